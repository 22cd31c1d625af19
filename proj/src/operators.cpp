#include "tfloc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfloc {

Window Window::gaussian() {
  Window w;
  w.kind = Kind::gaussian;
  w.hermite = Eigen::VectorXcd::Zero(1);
  w.hermite[0] = 1.0;
  return w;
}

Window Window::hermite_mix(const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() == 0 || coeffs.norm() == 0.0) throw std::invalid_argument("window coefficients are zero");
  Window w;
  w.kind = Kind::hermite_mix;
  w.hermite = coeffs / coeffs.norm();
  return w;
}

Window Window::sampled(const GridFunction& g) {
  if (g.grid.dim != 1) throw std::invalid_argument("sampled windows are one-dimensional");
  const double n = g.norm();
  if (n == 0.0) throw std::invalid_argument("window is identically zero");
  Window w;
  w.kind = Kind::samples;
  w.samples = g;
  w.samples *= 1.0 / n;
  return w;
}

GridFunction Window::on_grid(const GridSpec& grid) const {
  if (kind == Kind::samples) {
    if (!grid.same_as(samples.grid)) throw std::invalid_argument("sampled window lives on a different grid");
    return samples;
  }
  const int K = static_cast<int>(hermite.size()) - 1;
  return hermite_synthesize(HermiteCoeffs(1, K, hermite), HermiteBasis(1, K, grid));
}

std::string Window::id() const {
  if (kind == Kind::gaussian) return "gaussian";
  if (kind == Kind::samples) return "samples";
  std::ostringstream os;
  os.precision(6);
  os << "hermite_mix(";
  for (Eigen::Index k = 0; k < hermite.size(); ++k) os << (k ? "," : "") << hermite[k].real();
  os << ")";
  return os.str();
}

DenseOperator DenseOperator::identity(int N) {
  return {N, Eigen::MatrixXcd::Identity(N + 1, N + 1), "identity"};
}

HermiteCoeffs DenseOperator::apply(const HermiteCoeffs& f) const {
  if (f.dim != 1 || f.N != N) throw std::invalid_argument("operator and expansion truncations differ");
  return {1, N, mat * f.c};
}

DenseOperator DiagonalOperator::to_dense() const {
  return {spectrum.N, spectrum.values.cast<cplx>().asDiagonal(), "canonical " + spectrum.weight_id};
}

HermiteCoeffs DiagonalOperator::apply(const HermiteCoeffs& f) const {
  if (f.dim != spectrum.dim || f.N != spectrum.N) throw std::invalid_argument("operator and expansion truncations differ");
  return {f.dim, f.N, spectrum.values.cast<cplx>().cwiseProduct(f.c)};
}

namespace {

DenseOperator gram_from_table(const Eigen::MatrixXcd& V, const Eigen::VectorXd& wt, int N, std::string prov) {
  Eigen::MatrixXcd M;
  if (wt.minCoeff() >= 0.0) {
    // square-root split keeps M exactly positive semidefinite
    Eigen::MatrixXcd B = V;
    for (Eigen::Index p = 0; p < V.cols(); ++p) B.col(p) *= std::sqrt(wt[p]);
    M = B.conjugate() * B.transpose();
  } else {
    M = (V.conjugate() * wt.asDiagonal()) * V.transpose();
    M = 0.5 * (M + M.adjoint()).eval();
  }
  return {N, M, std::move(prov)};
}

}  // namespace

DenseOperator localization_matrix(const Window& g, const PhaseWeight& m, int N, const LocalizationOptions& opt,
                                  const std::string& weight_id) {
  if (N < 0) throw std::invalid_argument("cutoff must be non-negative");
  const std::string prov = "localization " + g.id() + " " + weight_id;
  if (g.kind != Window::Kind::samples) {
    const int K = static_cast<int>(g.hermite.size()) - 1;
    const double R = std::max(8.0, std::sqrt((N + K) / kPi) + 7.0);
    const double W = std::cbrt(R);
    const int n = opt.graded_points;
    const double dw = 2.0 * W / n;
    std::vector<cplx> z(static_cast<std::size_t>(n) * n);
    Eigen::VectorXd wt(static_cast<Eigen::Index>(z.size()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double w1 = -W + i * dw, w2 = -W + j * dw;
        const double r2 = w1 * w1 + w2 * w2;
        const cplx zp(r2 * w1, r2 * w2);
        const std::size_t idx = static_cast<std::size_t>(i) * n + j;
        z[idx] = zp;
        wt[static_cast<Eigen::Index>(idx)] = 3.0 * r2 * r2 * dw * dw * m(zp.real(), zp.imag());
      }
    const Eigen::MatrixXcd V = hermite_stft_table(N, g.hermite, z);
    double peak = 0.0, ring = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto p = static_cast<Eigen::Index>(static_cast<std::size_t>(i) * n + j);
        const double v = V.col(p).cwiseAbs2().maxCoeff() * std::abs(wt[p]);
        peak = std::max(peak, v);
        if (i == 0 || j == 0 || i == n - 1 || j == n - 1) ring = std::max(ring, v);
      }
    if (!(ring <= opt.tail_tol * peak))
      throw ResolutionError("phase-space quadrature extent too small for this weight");
    return gram_from_table(V, wt, N, prov);
  }

  const PhaseGrid& pg = opt.sampled_grid;
  if (pg.spacing > 0.125 + 1e-15) throw std::invalid_argument("fine-lattice multiplier needs phase spacing <= 1/8");
  const GridSpec& sg = g.samples.grid;
  const HermiteBasis basis(1, N, sg);
  if (basis.gram_deviation() > 1e-8) throw ResolutionError("signal grid does not resolve the Hermite basis");
  const auto K = static_cast<Eigen::Index>(pg.points_per_axis());
  Eigen::MatrixXcd V(N + 1, K * K);
  for (int a = 0; a <= N; ++a) {
    const PhaseField F = stft(basis.sample(MultiIndex(a)), g.samples, pg);
    for (Eigen::Index i = 0; i < K; ++i)
      for (Eigen::Index j = 0; j < K; ++j) V(a, i * K + j) = F.values(i, j);
  }
  Eigen::VectorXd wt(K * K);
  double peak = 0.0, ring = 0.0;
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) {
      const Eigen::Index p = i * K + j;
      wt[p] = pg.spacing * pg.spacing *
              m(pg.coord(static_cast<std::size_t>(i)), pg.coord(static_cast<std::size_t>(j)));
      const double v = V.col(p).cwiseAbs2().maxCoeff() * std::abs(wt[p]);
      peak = std::max(peak, v);
      if (i == 0 || j == 0 || i == K - 1 || j == K - 1) ring = std::max(ring, v);
    }
  if (!(ring <= 1e-8 * peak)) throw ResolutionError("phase grid extent too small for this window and weight");
  return gram_from_table(V, wt, N, prov);
}

DenseOperator localization_matrix(const Window& g, const RadialWeight& m, int N, const LocalizationOptions& opt) {
  if (m.dim() != 1) throw std::invalid_argument("localization operators are one-dimensional");
  return localization_matrix(g, [&m](double x, double xi) { return m(x, xi); }, N, opt, m.id());
}

DiagonalOperator canonical_diagonal(const RadialWeight& theta, int N) { return {tau_spectrum(theta, 1.0, N)}; }

GridFunction gabor_multiplier_apply(const GaborSystem& system, const Eigen::VectorXd& lattice_weights,
                                    const GridFunction& f) {
  if (lattice_weights.size() != static_cast<Eigen::Index>(system.size()))
    throw std::invalid_argument("one weight per lattice point required");
  return system.synthesize(lattice_weights.cast<cplx>().cwiseProduct(system.coeffs(f)));
}

GridFunction gabor_multiplier_apply(const GaborSystem& system, const RadialWeight& m, const GridFunction& f) {
  return gabor_multiplier_apply(system, system.lattice_values(m), f);
}

DenseOperator compose(const DenseOperator& A, const DenseOperator& B) {
  if (A.N != B.N || A.mat.cols() != B.mat.rows()) throw std::invalid_argument("operator truncations differ");
  return {A.N, A.mat * B.mat, "(" + A.provenance + ") o (" + B.provenance + ")"};
}

double TFKernel::H(cplx w) const {
  const double fx = w.real() / spacing, fy = w.imag() / spacing;
  const double ix = std::round(fx), iy = std::round(fy);
  if (std::abs(fx - ix) > 1e-9 || std::abs(fy - iy) > 1e-9) return 0.0;
  const auto it = lookup.find({static_cast<int>(ix), static_cast<int>(iy)});
  return it == lookup.end() ? 0.0 : it->second;
}

TFKernel tf_kernel(const DenseOperator& T, const Eigen::VectorXcd& window, const KernelOptions& opt) {
  const int N = T.N;
  const double radius = opt.radius > 0.0 ? opt.radius : 0.5 * std::sqrt(N / kPi);
  const double h = opt.spacing;
  TFKernel out;
  out.spacing = h;
  const int R = static_cast<int>(std::floor(radius / h + 1e-12));
  std::vector<std::pair<int, int>> idx;
  for (int i = -R; i <= R; ++i)
    for (int j = -R; j <= R; ++j)
      if (std::hypot(i * h, j * h) <= radius + 1e-12) {
        idx.emplace_back(i, j);
        out.probes.emplace_back(i * h, j * h);
      }
  // coefficients of pi(z) g: <pi(z) g, h_alpha> = conj(V_g h_alpha(z))
  const Eigen::MatrixXcd A = hermite_stft_table(N, window, out.probes).conjugate();
  for (Eigen::Index p = 0; p < A.cols(); ++p) {
    const double tail = 1.0 - A.col(p).squaredNorm() / window.squaredNorm();
    if (tail > opt.tail_tol)
      throw ResolutionError("probe point outside the resolvable range of the Hermite truncation");
  }
  out.K = A.adjoint() * (T.mat * A);
  std::map<std::pair<int, int>, std::pair<double, double>> env;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const std::pair<int, int> key{idx[a].first - idx[b].first, idx[a].second - idx[b].second};
      const double v = std::abs(out.K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      auto it = env.find(key);
      if (it == env.end())
        env.emplace(key, std::make_pair(v, v));
      else
        it->second = {std::max(it->second.first, v), std::min(it->second.second, v)};
    }
  for (const auto& [key, mm] : env) {
    out.envelope.push_back({cplx(key.first * h, key.second * h), mm.first});
    out.lookup[key] = mm.first;
    out.offset_spread = std::max(out.offset_spread, mm.first - mm.second);
  }
  return out;
}

EnvelopeCheck envelope_check(const TFKernel& kernel, const RadialWeight& v) {
  EnvelopeCheck rep;
  double rmax = 0.0;
  for (const auto& e : kernel.envelope) rmax = std::max(rmax, std::abs(e.w));
  for (double r = 0.0; r <= rmax + 1e-12; r += kernel.spacing) {
    double s = 0.0;
    for (const auto& e : kernel.envelope)
      if (std::abs(e.w) >= r - 1e-12) s += e.H * v(e.w);
    rep.radii.push_back(r);
    rep.tail_sums.push_back(s);
  }
  rep.monotone = true;
  for (std::size_t k = 1; k < rep.tail_sums.size(); ++k)
    if (rep.tail_sums[k] > rep.tail_sums[k - 1] * (1.0 + 1e-12)) rep.monotone = false;
  rep.tail_ratio = rep.tail_sums.empty() || rep.tail_sums.front() == 0.0 ? 0.0 : rep.tail_sums.back() / rep.tail_sums.front();
  // least squares for log H = c0 - c |w|^2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& e : kernel.envelope) {
    if (!(e.H > 1e-200)) continue;
    const double x = std::norm(e.w), y = std::log(e.H);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) rep.decay_rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.pass = rep.monotone && rep.tail_ratio < 1e-6;
  return rep;
}

namespace {

double bilinear(const TFKernel& H0, double x, double y) {
  const double s = H0.spacing;
  const double fx = x / s, fy = y / s;
  const double ix = std::floor(fx), iy = std::floor(fy);
  const double tx = fx - ix, ty = fy - iy;
  auto at = [&](double i, double j) { return H0.H(cplx(i * s, j * s)); };
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) + (1 - tx) * ty * at(ix, iy + 1) +
         tx * ty * at(ix + 1, iy + 1);
}

}  // namespace

Domination dominating_convolution(const TFKernel& kernel, const TFKernel& H0, const RadialWeight& v, double h,
                                  double extent) {
  const int n = static_cast<int>(std::llround(2.0 * extent / h));
  auto coord = [&](int i) { return -extent + i * h; };
  double hmax = 0.0;
  for (const auto& e : H0.envelope) hmax = std::max(hmax, std::max(std::abs(e.w.real()), std::abs(e.w.imag())));
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = coord(i), y = coord(j);
      if (std::abs(x) > hmax + H0.spacing || std::abs(y) > hmax + H0.spacing) continue;
      F(i, j) = v(x, y) * bilinear(H0, x, y);
    }
  // G * G = e^{-pi |u|^2 / 4}, applied separably
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) g(i, k) = std::exp(-0.25 * kPi * std::pow((i - k) * h, 2));
  const Eigen::MatrixXd D = (g * F * g.transpose()) * (h * h);

  Domination out;
  out.pass = true;
  for (const auto& e : kernel.envelope) {
    const double fx = (e.w.real() + extent) / h, fy = (e.w.imag() + extent) / h;
    const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
    const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
    const double tx = fx - ix, ty = fy - iy;
    const double d = (1 - tx) * (1 - ty) * D(ix, iy) + tx * (1 - ty) * D(ix + 1, iy) + (1 - tx) * ty * D(ix, iy + 1) +
                     tx * ty * D(ix + 1, iy + 1);
    out.H.push_back(e.H);
    out.D.push_back(d);
    const double ratio = d > 0.0 ? e.H / d : std::numeric_limits<double>::infinity();
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (e.H > d * (1.0 + 1e-9)) out.pass = false;
  }
  return out;
}

}  // namespace tfloc
