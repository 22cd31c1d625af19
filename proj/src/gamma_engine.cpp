#include "tfloc/gamma_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "tfloc/quadrature.hpp"

namespace tfloc {

namespace {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double peak = 0.0;
  bool from_zero = false;
};

// log of the unnormalized Gamma(n+1) density times the weight factor
using LogIntegrand = std::function<double(double)>;

double log_power(int n, double x) { return n == 0 ? 0.0 : n * std::log(x); }

Window find_window(int n, const LogIntegrand& g, double cut) {
  constexpr int K = 4000;
  double X = std::max(60.0, 2.0 * (n + 1) + 40.0 * std::sqrt(n + 1.0));
  std::vector<double> xs(K + 1), gs(K + 1);
  for (int attempt = 0; attempt < 40; ++attempt) {
    for (int k = 0; k <= K; ++k) {
      const double t = static_cast<double>(k) / K;
      xs[k] = X * t * t;
      gs[k] = k == 0 && n > 0 ? -std::numeric_limits<double>::infinity() : g(xs[k]);
    }
    const auto best = std::max_element(gs.begin(), gs.end());
    const double gmax = *best;
    if (!std::isfinite(gmax)) throw QuadratureError("integrand is not finite on the scan", 0.0);
    if (gs[K] > gmax - cut - 5.0) {
      X *= 2.0;
      continue;
    }
    const int ip = static_cast<int>(best - gs.begin());
    int ilo = ip, ihi = ip;
    while (ilo > 0 && gs[ilo] >= gmax - cut) --ilo;
    while (ihi < K && gs[ihi] >= gmax - cut) ++ihi;
    Window w;
    w.peak = xs[ip];
    w.lo = xs[ilo];
    w.hi = xs[ihi];
    if (w.lo <= 0.25 * w.peak || w.peak < 2.0) {
      w.lo = 0.0;
      w.from_zero = true;
    }
    return w;
  }
  throw QuadratureError("integrand does not decay; weight grows too fast for this exponent", 0.0);
}

struct Rule1D {
  std::vector<double> x;
  std::vector<double> logw;  // log(density * quadrature weight * jacobian)
};

Rule1D build_rule(int n, const Window& w, int nodes) {
  const double lg = std::lgamma(n + 1.0);
  Rule1D r;
  const QuadratureRule& gl = gauss_legendre(nodes);
  auto push = [&](double x, double logjw) {
    r.x.push_back(x);
    r.logw.push_back(log_power(n, x) - x - lg + logjw);
  };
  double a = w.lo;
  if (w.from_zero) {
    const double x1 = w.peak < 2.0 ? w.hi : 0.5 * w.peak;
    // x = x1 y^4 on [0, x1]
    for (int i = 0; i < nodes; ++i) {
      const double y = 0.5 * (gl.nodes[i] + 1.0);
      const double x = x1 * y * y * y * y;
      push(x, std::log(0.5 * gl.weights[i] * 4.0 * x1 * y * y * y));
    }
    a = x1;
  }
  if (w.hi > a) {
    const double half = 0.5 * (w.hi - a), mid = 0.5 * (w.hi + a);
    for (int i = 0; i < nodes; ++i) push(mid + half * gl.nodes[i], std::log(half * gl.weights[i]));
  }
  return r;
}

double theta_log_1d(const RadialWeight& theta, double u) { return theta.log_profile(std::sqrt(u / kPi)); }

TauResult tau_1d(const RadialWeight& theta, int n, double s, const TauOptions& opt) {
  const LogIntegrand g = [&](double x) { return log_power(n, x) - x + s * theta_log_1d(theta, x); };
  const Window w = find_window(n, g, 45.0);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int nodes = opt.initial_nodes; nodes <= opt.max_nodes; nodes *= 2) {
    const Rule1D r = build_rule(n, w, nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) sum += std::exp(r.logw[i] + s * theta_log_1d(theta, r.x[i]));
    if (std::isfinite(prev) && std::abs(sum - prev) <= opt.rel_tol * std::abs(sum))
      return {sum, std::abs(sum - prev), static_cast<int>(r.x.size())};
    prev = sum;
  }
  throw QuadratureError("tau quadrature did not converge for n = " + std::to_string(n), prev);
}

TauResult tau_2d(const RadialWeight& theta, const MultiIndex& alpha, double s, const TauOptions& opt) {
  auto logtheta = [&](double u1, double u2) {
    const double r[2] = {std::sqrt(u1 / kPi), std::sqrt(u2 / kPi)};
    return theta.log_profile(r);
  };
  Window w[2];
  for (int j = 0; j < 2; ++j) {
    const int n = alpha[j];
    const LogIntegrand g = [&, j, n](double x) {
      return log_power(n, x) - x + s * (j == 0 ? logtheta(x, 0.0) : logtheta(0.0, x));
    };
    w[j] = find_window(n, g, 60.0);
  }
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int nodes = opt.initial_nodes; nodes <= opt.max_nodes_2d; nodes *= 2) {
    const Rule1D r1 = build_rule(alpha[0], w[0], nodes);
    const Rule1D r2 = build_rule(alpha[1], w[1], nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < r1.x.size(); ++i)
      for (std::size_t k = 0; k < r2.x.size(); ++k)
        sum += std::exp(r1.logw[i] + r2.logw[k] + s * logtheta(r1.x[i], r2.x[k]));
    if (std::isfinite(prev) && std::abs(sum - prev) <= opt.rel_tol * std::abs(sum))
      return {sum, std::abs(sum - prev), static_cast<int>(r1.x.size() * r2.x.size())};
    prev = sum;
  }
  throw QuadratureError("tau quadrature did not converge for alpha = (" + std::to_string(alpha[0]) + "," +
                            std::to_string(alpha[1]) + ")",
                        prev);
}

}  // namespace

TauResult tau(const RadialWeight& theta, const MultiIndex& alpha, double s, const TauOptions& opt) {
  if (alpha.dim() != theta.dim()) throw std::invalid_argument("multi-index and weight dimensions differ");
  if (!std::isfinite(s) || std::abs(s) > 8.0) throw std::invalid_argument("exponent s must lie in [-8, 8]");
  if (s == 0.0) return {1.0, 0.0, 0};
  if (theta.family() == WeightFamily::product) {
    const TauResult a = tau(theta.factors()[0].pow(theta.exponent()), MultiIndex(alpha[0]), s, opt);
    const TauResult b = tau(theta.factors()[1].pow(theta.exponent()), MultiIndex(alpha[1]), s, opt);
    return {a.value * b.value, a.est_error * b.value + b.est_error * a.value, a.nodes * b.nodes};
  }
  return alpha.dim() == 1 ? tau_1d(theta, alpha[0], s, opt) : tau_2d(theta, alpha, s, opt);
}

double tau_gauss_laguerre(const RadialWeight& theta, int n, double s, int nodes) {
  if (theta.dim() != 1) throw std::invalid_argument("Gauss-Laguerre cross-check is one-dimensional");
  const QuadratureRule r = gauss_laguerre_normalized(nodes, n);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i)
    if (r.weights[i] > 0.0) sum += r.weights[i] * std::exp(s * theta_log_1d(theta, r.nodes[i]));
  return sum;
}

TauSpectrum tau_spectrum(const RadialWeight& theta, double s, int N, const TauOptions& opt) {
  if (N < 0) throw std::invalid_argument("cutoff must be non-negative");
  TauSpectrum sp;
  sp.weight_id = theta.id();
  sp.s = s;
  sp.dim = theta.dim();
  sp.N = N;
  const auto K = static_cast<Eigen::Index>(block_size(sp.dim, N));
  sp.values.resize(K);
  sp.est_error.resize(K);
  sp.nodes.resize(static_cast<std::size_t>(K));
  for (Eigen::Index k = 0; k < K; ++k) {
    const TauResult r = tau(theta, unflat_index(static_cast<std::size_t>(k), sp.dim, N), s, opt);
    sp.values[k] = r.value;
    sp.est_error[k] = r.est_error;
    sp.nodes[static_cast<std::size_t>(k)] = r.nodes;
  }
  return sp;
}

ProductScan product_inequality_scan(const RadialWeight& theta, double s, double t, int N) {
  if (N < 1) throw std::invalid_argument("scan needs N >= 1");
  const TauSpectrum a = tau_spectrum(theta, s, N);
  const TauSpectrum b = tau_spectrum(theta, t, N);
  const TauSpectrum c = tau_spectrum(theta, -s - t, N);
  ProductScan out;
  const auto K = static_cast<std::size_t>(a.values.size());
  out.gamma.resize(K);
  out.running_sup.resize(K);
  out.running_inf.resize(K);
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out.gamma[k] = a.values[i] * b.values[i] * c.values[i];
    hi = std::max(hi, out.gamma[k]);
    lo = std::min(lo, out.gamma[k]);
    out.running_sup[k] = hi;
    out.running_inf[k] = lo;
  }
  out.sup = hi;
  out.inf = lo;
  return out;
}

double vst_condition(const RadialWeight& theta, double s, double t, int N) {
  const ProductScan p = product_inequality_scan(theta, s, t, N);
  return p.sup / p.inf;
}

}  // namespace tfloc
