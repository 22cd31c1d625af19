#include "tfloc/phase_space.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfloc/gamma_engine.hpp"

namespace tfloc {

namespace {

long integer_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument(std::string("grid mismatch: ") + what + " is not an integer");
  return static_cast<long>(k);
}

struct StftPlan {
  long step;   // phase spacing in signal samples
  long P;      // FFT length 1/(Delta delta)
  long x0;     // -L_z in signal samples (relative to t = 0)
  long origin; // index of t = 0 on the signal grid
};

StftPlan make_plan(const GridSpec& sg, const PhaseGrid& pg) {
  if (sg.dim != 1) throw std::invalid_argument("phase-space transforms are one-dimensional");
  StftPlan p;
  p.step = integer_ratio(pg.spacing, sg.spacing, "phase spacing / signal spacing");
  p.P = integer_ratio(1.0, sg.spacing * pg.spacing, "1 / (signal spacing * phase spacing)");
  p.x0 = integer_ratio(-pg.half_width, sg.spacing, "phase half-width / signal spacing");
  p.origin = integer_ratio(sg.half_width, sg.spacing, "signal half-width / signal spacing");
  if (static_cast<long>(pg.points_per_axis()) > p.P)
    throw std::invalid_argument("grid mismatch: phase grid wider than one frequency period");
  return p;
}

}  // namespace

std::size_t PhaseGrid::points_per_axis() const {
  if (!(half_width > 0.0) || !(spacing > 0.0)) throw std::invalid_argument("phase grid needs positive extent and spacing");
  return static_cast<std::size_t>(integer_ratio(2.0 * half_width, spacing, "2 L_z / delta"));
}

PhaseField stft(const GridFunction& f, const GridFunction& g, const PhaseGrid& pg) {
  if (!f.grid.same_as(g.grid)) throw std::invalid_argument("grid mismatch between signal and window");
  if (g.samples.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("window is identically zero");
  const StftPlan plan = make_plan(f.grid, pg);
  const long M = static_cast<long>(f.grid.points_per_axis());
  const long K = static_cast<long>(pg.points_per_axis());
  const double dt = f.grid.spacing, t0 = f.grid.coord(0);
  PhaseField out{pg, Eigen::MatrixXcd(K, K)};

  // e^{-2 pi i xi_l t_j} = e^{2 pi i L_z t_j} e^{-2 pi i l delta t_0} e^{-2 pi i l j / P}
  std::vector<cplx> carrier(M), post(K);
  for (long j = 0; j < M; ++j) carrier[j] = std::polar(dt, 2.0 * kPi * pg.half_width * f.grid.coord(j));
  for (long l = 0; l < K; ++l) post[l] = std::polar(1.0, -2.0 * kPi * l * pg.spacing * t0);

  Eigen::FFT<double> fft;
  std::vector<cplx> buf(plan.P), spec(plan.P);
  for (long k = 0; k < K; ++k) {
    const long shift = plan.x0 + k * plan.step;  // x_k / Delta
    std::fill(buf.begin(), buf.end(), cplx(0.0));
    for (long j = 0; j < M; ++j) {
      const long gi = j - shift;
      if (gi < 0 || gi >= M) continue;
      buf[j % plan.P] += f.samples[j] * std::conj(g.samples[gi]) * carrier[j];
    }
    fft.fwd(spec, buf);
    for (long l = 0; l < K; ++l) out.values(k, l) = spec[l] * post[l];
  }
  return out;
}

GridFunction istft(const PhaseField& F, const GridFunction& g) {
  const StftPlan plan = make_plan(g.grid, F.grid);
  const long M = static_cast<long>(g.grid.points_per_axis());
  const long K = static_cast<long>(F.grid.points_per_axis());
  if (F.values.rows() != K || F.values.cols() != K) throw std::invalid_argument("phase field does not match its grid");
  const double t0 = g.grid.coord(0), d2 = F.grid.spacing * F.grid.spacing;
  GridFunction out(g.grid);
  std::vector<cplx> carrier(M), pre(K);
  for (long j = 0; j < M; ++j) carrier[j] = std::polar(d2, -2.0 * kPi * F.grid.half_width * g.grid.coord(j));
  for (long l = 0; l < K; ++l) pre[l] = std::polar(1.0, 2.0 * kPi * l * F.grid.spacing * t0);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> buf(plan.P), u(plan.P);
  for (long k = 0; k < K; ++k) {
    const long shift = plan.x0 + k * plan.step;
    std::fill(buf.begin(), buf.end(), cplx(0.0));
    for (long l = 0; l < K; ++l) buf[l] = F.values(k, l) * pre[l];
    fft.inv(u, buf);
    for (long j = 0; j < M; ++j) {
      const long gi = j - shift;
      if (gi < 0 || gi >= M) continue;
      out.samples[j] += u[j % plan.P] * carrier[j] * g.samples[gi];
    }
  }
  return out;
}

HermitePhaseTable::HermitePhaseTable(int N, const Eigen::VectorXcd& window, const PhaseGrid& pg) : N_(N), pg_(pg) {
  const std::size_t K = pg.points_per_axis();
  std::vector<cplx> z(K * K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) z[i * K + j] = cplx(pg.coord(i), pg.coord(j));
  table_ = hermite_stft_table(N, window, z);
}

PhaseField HermitePhaseTable::field(const HermiteCoeffs& f) const {
  if (f.dim != 1) throw std::invalid_argument("phase fields are one-dimensional");
  const auto K = static_cast<Eigen::Index>(pg_.points_per_axis());
  const int n = std::min(f.N, N_);
  for (int a = n + 1; a <= f.N; ++a)
    if (f.c[a] != 0.0) throw std::invalid_argument("expansion exceeds the table cutoff");
  const Eigen::RowVectorXcd flat = f.c.head(n + 1).transpose() * table_.topRows(n + 1);
  PhaseField out{pg_, Eigen::MatrixXcd(K, K)};
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) out.values(i, j) = flat[i * K + j];
  return out;
}

PhaseField phase_field_from_coeffs(const HermiteCoeffs& f, const Eigen::VectorXcd& window, const PhaseGrid& pg) {
  return HermitePhaseTable(f.N, window, pg).field(f);
}

std::string method_name(NormMethod m) {
  switch (m) {
    case NormMethod::grid: return "grid";
    case NormMethod::frame: return "frame";
    case NormMethod::hermite: return "hermite";
  }
  return "unknown";
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponents must lie in [1, inf]");
}

double lp_accumulate(const Eigen::VectorXd& v, double p, double cell) {
  if (std::isinf(p)) return v.size() ? v.maxCoeff() : 0.0;
  const double mx = v.size() ? v.maxCoeff() : 0.0;
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(v[i] / mx, p);
  return mx * std::pow(s * cell, 1.0 / p);
}

}  // namespace

ModNormResult mod_norm_field(const PhaseField& F, double p, double q, const RadialWeight& m, double boundary_tol) {
  check_exponent(p);
  check_exponent(q);
  if (m.dim() != 1) throw std::invalid_argument("grid norms are one-dimensional");
  const auto K = F.values.rows();
  Eigen::MatrixXd a(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j)
      a(i, j) = std::abs(F.values(i, j)) *
                m(F.grid.coord(static_cast<std::size_t>(i)), F.grid.coord(static_cast<std::size_t>(j)));
  const double total = a.squaredNorm();
  if (total > 0.0) {
    double ring = a.row(0).squaredNorm() + a.row(K - 1).squaredNorm() + a.col(0).squaredNorm() +
                  a.col(K - 1).squaredNorm();
    if (ring > boundary_tol * total)
      throw ResolutionError("phase grid too small: boundary carries " + std::to_string(ring / total) +
                            " of the weighted mass");
  }
  const double d = F.grid.spacing;
  Eigen::VectorXd inner(K);
  for (Eigen::Index j = 0; j < K; ++j) inner[j] = lp_accumulate(a.col(j), p, d);
  ModNormResult r;
  r.value = lp_accumulate(inner, q, d);
  r.method = NormMethod::grid;
  r.p = p;
  r.q = q;
  r.weight_id = m.id();
  return r;
}

ModNormResult mod_norm_grid(const GridFunction& f, const GridFunction& g, double p, double q, const RadialWeight& m,
                            const PhaseGrid& pg) {
  return mod_norm_field(stft(f, g, pg), p, q, m);
}

ModNormResult mod_norm_hermite(const HermiteCoeffs& f, const RadialWeight& theta) {
  if (f.dim != theta.dim()) throw std::invalid_argument("coefficient and weight dimensions differ");
  double s = 0.0;
  for (Eigen::Index k = 0; k < f.c.size(); ++k) {
    const double c2 = std::norm(f.c[k]);
    if (c2 == 0.0) continue;
    s += c2 * tau(theta, unflat_index(static_cast<std::size_t>(k), f.dim, f.N), 2.0).value;
  }
  ModNormResult r;
  r.value = std::sqrt(s);
  r.method = NormMethod::hermite;
  r.weight_id = theta.id();
  r.truncation = f.N;
  return r;
}

GridFunction gaussian_window(const GridSpec& grid) {
  if (grid.dim == 1) return GridFunction::sample(grid, [](double t) { return cplx(hermite_eval(0, t)); });
  return GridFunction::sample(grid, [](double t, double u) { return cplx(hermite_eval(0, t) * hermite_eval(0, u)); });
}

}  // namespace tfloc
