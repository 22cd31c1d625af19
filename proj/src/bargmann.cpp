#include "tfloc/bargmann.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tfloc/gamma_engine.hpp"
#include "tfloc/quadrature.hpp"

namespace tfloc {

cplx fock_monomial(int n, cplx z) {
  if (n < 0) throw std::invalid_argument("degree must be non-negative");
  if (n == 0) return 1.0;
  if (z == 0.0) return 0.0;
  const double logmag = 0.5 * (n * std::log(kPi) - std::lgamma(n + 1.0)) + n * std::log(std::abs(z));
  return std::polar(std::exp(logmag), n * std::arg(z));
}

cplx FockFunction::operator()(cplx z) const {
  if (coeffs.dim != 1) throw std::invalid_argument("point dimension mismatch");
  // Horner-free accumulation with the recurrence e_{n+1} = sqrt(pi/(n+1)) z e_n
  cplx e = 1.0, s = 0.0;
  for (int n = 0; n <= coeffs.N; ++n) {
    s += coeffs.c[n] * e;
    e *= std::sqrt(kPi / (n + 1.0)) * z;
  }
  return s;
}

cplx FockFunction::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != coeffs.dim) throw std::invalid_argument("point dimension mismatch");
  if (coeffs.dim == 1) return (*this)(z[0]);
  const int N = coeffs.N;
  std::vector<cplx> e1(N + 1), e2(N + 1);
  e1[0] = e2[0] = 1.0;
  for (int n = 0; n < N; ++n) {
    e1[n + 1] = e1[n] * std::sqrt(kPi / (n + 1.0)) * z[0];
    e2[n + 1] = e2[n] * std::sqrt(kPi / (n + 1.0)) * z[1];
  }
  cplx s = 0.0;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) s += coeffs[MultiIndex(i, j)] * e1[i] * e2[j];
  return s;
}

FockFunction bargmann(const HermiteCoeffs& f) { return {f}; }

std::vector<cplx> bargmann(const HermiteCoeffs& f, std::span<const cplx> z) {
  const FockFunction F{f};
  std::vector<cplx> out;
  out.reserve(z.size());
  if (f.dim == 1) {
    for (cplx p : z) out.push_back(F(p));
  } else {
    if (z.size() % 2 != 0) throw std::invalid_argument("two-dimensional points come in pairs");
    for (std::size_t i = 0; i < z.size(); i += 2) out.push_back(F(z.subspan(i, 2)));
  }
  return out;
}

std::vector<cplx> bargmann(const GridFunction& f, std::span<const cplx> z) {
  if (f.grid.dim != 1) throw std::invalid_argument("grid route is one-dimensional");
  const std::size_t M = f.grid.points_per_axis();
  const double dt = f.grid.spacing;
  std::vector<cplx> out;
  out.reserve(z.size());
  for (cplx w : z) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const double t = f.grid.coord(j);
      // exponent -pi z^2/2 - pi t^2 + 2 pi t z combined before exponentiation
      s += f.samples[static_cast<Eigen::Index>(j)] * std::exp(-0.5 * kPi * w * w - kPi * t * t + 2.0 * kPi * t * w);
    }
    out.push_back(std::pow(2.0, 0.25) * s * dt);
  }
  return out;
}

double fock_norm(const FockFunction& F, double p, double q, const RadialWeight& m, const ComplexGrid& grid) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("norm exponents must lie in [1, inf]");
  if (F.coeffs.dim != 1 || m.dim() != 1) throw std::invalid_argument("Fock norms on a grid are one-dimensional");
  const GridSpec axis(1, grid.half_width, grid.spacing);
  const auto K = static_cast<Eigen::Index>(axis.points_per_axis());
  Eigen::MatrixXd a(K, K);  // a(i, j) at x_i + i y_j
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) {
      const double x = axis.coord(static_cast<std::size_t>(i)), y = axis.coord(static_cast<std::size_t>(j));
      const cplx z(x, y);
      a(i, j) = std::abs(F(z)) * std::exp(m.log_eval(std::array<double, 2>{x, y}) - 0.5 * kPi * std::norm(z));
    }
  const double total = a.squaredNorm();
  const double ring = a.row(0).squaredNorm() + a.row(K - 1).squaredNorm() + a.col(0).squaredNorm() +
                      a.col(K - 1).squaredNorm();
  if (total > 0.0 && ring > 1e-12 * total) throw ResolutionError("complex grid too small for this Fock function");
  auto lp = [](const Eigen::VectorXd& v, double e, double h) {
    if (std::isinf(e)) return v.maxCoeff();
    const double mx = v.maxCoeff();
    if (mx == 0.0) return 0.0;
    double s = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) s += std::pow(v[k] / mx, e);
    return mx * std::pow(s * h, 1.0 / e);
  };
  Eigen::VectorXd inner(K);
  for (Eigen::Index j = 0; j < K; ++j) inner[j] = lp(a.col(j), p, grid.spacing);
  return lp(inner, q, grid.spacing);
}

PolarRule polar_rule(int angles, int radial, double R) {
  if (angles < 1 || radial < 1 || !(R > 0.0)) throw std::invalid_argument("invalid polar rule parameters");
  const QuadratureRule& gl = gauss_legendre(radial);
  const double S = std::sqrt(R);
  PolarRule rule;
  for (int i = 0; i < radial; ++i) {
    const double s = 0.5 * S * (gl.nodes[i] + 1.0);
    const double r = s * s;
    // r dr dphi with dr = 2 s ds
    const double wr = 0.5 * S * gl.weights[i] * r * 2.0 * s;
    for (int k = 0; k < angles; ++k) {
      const double phi = 2.0 * kPi * k / angles;
      rule.nodes.push_back(std::polar(r, phi));
      rule.weights.push_back(wr * 2.0 * kPi / angles);
    }
  }
  return rule;
}

cplx fock_inner(const FockFunction& F, const FockFunction& G, const PolarRule& rule) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const cplx z = rule.nodes[i];
    s += rule.weights[i] * F(z) * std::conj(G(z)) * std::exp(-kPi * std::norm(z));
  }
  return s;
}

FockFunction toeplitz_apply(const RadialWeight& m, const FockFunction& F) {
  if (m.dim() != F.coeffs.dim) throw std::invalid_argument("weight and Fock function dimensions differ");
  const TauSpectrum sp = tau_spectrum(m, 1.0, F.coeffs.N);
  return {HermiteCoeffs(F.coeffs.dim, F.coeffs.N, sp.values.cast<cplx>().cwiseProduct(F.coeffs.c))};
}

std::vector<cplx> toeplitz_quadrature(const RadialWeight& m, const FockFunction& F, std::span<const cplx> w,
                                      const PolarRule& rule) {
  if (m.dim() != 1 || F.coeffs.dim != 1) throw std::invalid_argument("quadrature route is one-dimensional");
  std::vector<cplx> pre(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const cplx z = rule.nodes[i];
    pre[i] = rule.weights[i] * m(z) * F(z);
  }
  std::vector<cplx> out;
  out.reserve(w.size());
  for (cplx wp : w) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const cplx z = rule.nodes[i];
      s += pre[i] * std::exp(kPi * std::conj(z) * wp - kPi * std::norm(z));
    }
    out.push_back(s);
  }
  return out;
}

double intertwine_check(const RadialWeight& m, const HermiteCoeffs& f, std::span<const cplx> points,
                        const PolarRule& rule) {
  if (f.dim != 1) throw std::invalid_argument("intertwining check is one-dimensional");
  // left: B(J_m f) with J_m diagonal on Hermite functions; right: T_m applied to B f by quadrature
  const TauSpectrum sp = tau_spectrum(m, 1.0, f.N);
  const FockFunction left{HermiteCoeffs(1, f.N, sp.values.cast<cplx>().cwiseProduct(f.c))};
  const std::vector<cplx> right = toeplitz_quadrature(m, bargmann(f), points, rule);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const cplx l = left(points[i]);
    num = std::max(num, std::abs(l - right[i]));
    den = std::max(den, std::abs(l));
  }
  return den == 0.0 ? num : num / den;
}

std::vector<cplx> disc_points(double radius, double spacing) {
  std::vector<cplx> out;
  const int R = static_cast<int>(std::floor(radius / spacing + 1e-12));
  for (int i = -R; i <= R; ++i)
    for (int j = -R; j <= R; ++j)
      if (std::hypot(i * spacing, j * spacing) <= radius + 1e-12) out.emplace_back(i * spacing, j * spacing);
  return out;
}

}  // namespace tfloc
