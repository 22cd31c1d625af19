#include "tfloc/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfloc {

namespace {

constexpr double kRescale = 1e150;

// Log-scaled three-term recurrence; row n of `out` receives h_n(x_j).
void fill_table(int N, std::span<const double> x, Eigen::MatrixXd& out) {
  out.resize(N + 1, static_cast<Eigen::Index>(x.size()));
  std::vector<double> a(N + 1), b(N + 1);
  for (int n = 0; n < N; ++n) {
    a[n] = 2.0 * std::sqrt(kPi / (n + 1.0));
    b[n] = std::sqrt(n / (n + 1.0));
  }
  const double log_rescale = std::log(kRescale);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = x[j];
    double log_scale = 0.25 * std::log(2.0) - kPi * t * t;
    double prev = 0.0, cur = 1.0;
    const auto col = static_cast<Eigen::Index>(j);
    out(0, col) = std::exp(log_scale);
    for (int n = 0; n < N; ++n) {
      const double next = a[n] * t * cur - b[n] * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += log_rescale;
      }
      out(n + 1, col) = cur == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(cur)) + log_scale), cur);
    }
  }
}

// Generalized Laguerre L_k^{(a)}(x) by the standard three-term recurrence.
double laguerre(int k, double a, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

Eigen::MatrixXd hermite_table(int N, std::span<const double> x) {
  if (N < 0) throw std::invalid_argument("Hermite cutoff must be non-negative");
  Eigen::MatrixXd out;
  fill_table(N, x, out);
  return out;
}

double hermite_eval(int n, double x) {
  const double pts[1] = {x};
  return hermite_table(n, pts)(n, 0);
}

std::vector<double> hermite_eval(int n, std::span<const double> x) {
  const Eigen::MatrixXd t = hermite_table(n, x);
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = t(n, static_cast<Eigen::Index>(j));
  return out;
}

double hermite_tensor(const MultiIndex& alpha, std::span<const double> x) {
  if (static_cast<int>(x.size()) != alpha.dim())
    throw std::invalid_argument("point dimension does not match the multi-index");
  double v = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) v *= hermite_eval(alpha[j], x[j]);
  return v;
}

cplx stft_hermite_cross(int n, int k, cplx z) {
  if (n < 0 || k < 0) throw std::invalid_argument("Hermite degrees must be non-negative");
  const double x = z.real(), xi = z.imag();
  const double r2 = std::norm(z);
  const int lo = std::min(n, k), hi = std::max(n, k), a = hi - lo;
  const cplx phase = std::polar(1.0, -kPi * x * xi);
  // (sqrt(pi) conj z)^a for n >= k, (-sqrt(pi) z)^a otherwise
  cplx dir = n >= k ? std::conj(z) : -z;
  const double rad = std::abs(dir);
  if (a > 0 && rad == 0.0) return 0.0;
  const double L = laguerre(lo, a, kPi * r2);
  if (L == 0.0) return 0.0;
  double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) - 0.5 * kPi * r2 + std::log(std::abs(L));
  cplx unit = 1.0;
  if (a > 0) {
    log_mag += a * std::log(std::sqrt(kPi) * rad);
    unit = std::pow(dir / rad, a);
  }
  return (L < 0 ? -1.0 : 1.0) * std::exp(log_mag) * unit * phase;
}

cplx stft_hermite_analytic(int n, cplx z) { return stft_hermite_cross(n, 0, z); }

cplx stft_hermite_analytic(const MultiIndex& alpha, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != alpha.dim())
    throw std::invalid_argument("point dimension does not match the multi-index");
  cplx v = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) v *= stft_hermite_cross(alpha[j], 0, z[j]);
  return v;
}

Eigen::MatrixXcd hermite_stft_table(int N, const Eigen::VectorXcd& window, std::span<const cplx> z) {
  if (N < 0) throw std::invalid_argument("cutoff must be non-negative");
  const auto P = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N + 1, P);
  const bool gaussian = window.size() >= 1 && window[0] == 1.0 && window.tail(window.size() - 1).isZero(0.0);
  for (Eigen::Index p = 0; p < P; ++p) {
    const cplx zp = z[static_cast<std::size_t>(p)];
    if (gaussian) {
      // V_h h_{n+1} = sqrt(pi / (n+1)) conj(z) V_h h_n
      cplx v = std::polar(std::exp(-0.5 * kPi * std::norm(zp)), -kPi * zp.real() * zp.imag());
      const cplx zb = std::conj(zp);
      for (int n = 0; n <= N; ++n) {
        T(n, p) = v;
        v *= std::sqrt(kPi / (n + 1.0)) * zb;
      }
      continue;
    }
    for (Eigen::Index k = 0; k < window.size(); ++k) {
      if (window[k] == 0.0) continue;
      const cplx wk = std::conj(window[k]);
      for (int n = 0; n <= N; ++n) T(n, p) += wk * stft_hermite_cross(n, static_cast<int>(k), zp);
    }
  }
  return T;
}

HermiteCoeffs::HermiteCoeffs(int d, int cutoff) : dim(d), N(cutoff) {
  require_dimension(d);
  if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
  c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(block_size(d, cutoff)));
}

HermiteCoeffs::HermiteCoeffs(int d, int cutoff, Eigen::VectorXcd coeffs) : HermiteCoeffs(d, cutoff) {
  if (coeffs.size() != c.size()) throw std::invalid_argument("coefficient count does not match the cutoff");
  c = std::move(coeffs);
}

HermiteCoeffs HermiteCoeffs::unit(const MultiIndex& alpha, int cutoff) {
  if (alpha.max_component() > cutoff) throw std::invalid_argument("multi-index exceeds the cutoff");
  HermiteCoeffs out(alpha.dim(), cutoff);
  out[alpha] = 1.0;
  return out;
}

HermiteCoeffs HermiteCoeffs::with_cutoff(int cutoff) const {
  HermiteCoeffs out(dim, cutoff);
  const int M = std::min(N, cutoff);
  if (dim == 1) {
    out.c.head(M + 1) = c.head(M + 1);
  } else {
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j) out[MultiIndex(i, j)] = (*this)[MultiIndex(i, j)];
  }
  return out;
}

HermiteBasis::HermiteBasis(int dim, int N, const GridSpec& grid) : dim_(dim), N_(N), grid_(grid) {
  require_dimension(dim);
  if (grid.dim != dim) throw std::invalid_argument("basis and grid dimensions differ");
  std::vector<double> x(grid.points_per_axis());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = grid.coord(i);
  table_ = hermite_table(N, x);
  const Eigen::MatrixXd G = grid.spacing * (table_ * table_.transpose());
  const Eigen::MatrixXd E = G - Eigen::MatrixXd::Identity(N + 1, N + 1);
  if (dim == 1) {
    gram_deviation_ = E.cwiseAbs().maxCoeff();
  } else {
    // max |G_ab G_cd - delta_ab delta_cd| over the Kronecker square
    const Eigen::VectorXd d = G.diagonal();
    const double dmax = d.maxCoeff(), dmin = d.minCoeff();
    Eigen::MatrixXd off = G.cwiseAbs();
    off.diagonal().setZero();
    gram_deviation_ = std::max({std::abs(dmax * dmax - 1.0), std::abs(dmin * dmin - 1.0),
                                std::abs(dmax * dmin - 1.0), off.maxCoeff() * G.cwiseAbs().maxCoeff()});
  }
}

GridFunction HermiteBasis::sample(const MultiIndex& alpha) const {
  if (alpha.dim() != dim_ || alpha.max_component() > N_) throw std::invalid_argument("multi-index outside the basis");
  GridFunction out(grid_);
  const auto M = static_cast<Eigen::Index>(grid_.points_per_axis());
  if (dim_ == 1) {
    out.samples = table_.row(alpha[0]).transpose().cast<cplx>();
  } else {
    for (Eigen::Index i = 0; i < M; ++i)
      for (Eigen::Index j = 0; j < M; ++j) out.samples[i * M + j] = table_(alpha[0], i) * table_(alpha[1], j);
  }
  return out;
}

HermiteCoeffs hermite_coeffs(const GridFunction& f, const HermiteBasis& basis, double gram_tol) {
  if (!f.grid.same_as(basis.grid())) throw std::invalid_argument("function and basis live on different grids");
  if (basis.gram_deviation() > gram_tol)
    throw ResolutionError("grid does not resolve the Hermite basis: Gram deviation " +
                          std::to_string(basis.gram_deviation()));
  const Eigen::MatrixXd& T = basis.table();
  const double dx = basis.grid().spacing;
  const int N = basis.cutoff();
  if (basis.dim() == 1) return {1, N, (T.cast<cplx>() * f.samples) * dx};
  const auto M = static_cast<Eigen::Index>(basis.grid().points_per_axis());
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> F(f.samples.data(), M, M);
  const Eigen::MatrixXcd Tc = T.cast<cplx>();
  RowMat C = (Tc * F * Tc.transpose()) * (dx * dx);
  return {2, N, Eigen::Map<Eigen::VectorXcd>(C.data(), C.size())};
}

GridFunction hermite_synthesize(const HermiteCoeffs& c, const HermiteBasis& basis) {
  if (c.dim != basis.dim() || c.N != basis.cutoff()) throw std::invalid_argument("coefficients do not match the basis");
  GridFunction out(basis.grid());
  const Eigen::MatrixXcd Tc = basis.table().cast<cplx>();
  if (c.dim == 1) {
    out.samples = Tc.transpose() * c.c;
    return out;
  }
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> C(c.c.data(), c.N + 1, c.N + 1);
  RowMat F = Tc.transpose() * C * Tc;
  out.samples = Eigen::Map<Eigen::VectorXcd>(F.data(), F.size());
  return out;
}

}  // namespace tfloc
