#pragma once

// Radial moderate weights on phase space, their submultiplicative envelopes,
// moderateness probes and the GRS diagnostic. Evaluation is in the log domain.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfloc/common.hpp"

namespace tfloc {

enum class WeightFamily { polynomial, quadratic, peetre, subexponential, loglin, exponential, product, custom };

std::string family_name(WeightFamily f);

/// Positive weight m(z) = m0(|z_1|, ..., |z_d|) on R^{2d}, with z_j = (x_j, xi_j).
class RadialWeight {
 public:
  /// log m0 as a function of the per-coordinate radii.
  using LogProfile = std::function<double(std::span<const double>)>;

  /// (1 + |z|^2)^{s/2}
  static RadialWeight polynomial(double s, int dim = 1);
  /// 1 + c |z|^2
  static RadialWeight quadratic(double c, int dim = 1);
  /// (1 + c |z|)^t
  static RadialWeight peetre(double t, double c = 1.0, int dim = 1);
  /// exp(a |z|^b), 0 < b <= 1
  static RadialWeight subexponential(double a, double b, int dim = 1);
  /// exp(a |z| / log(e + |z|))
  static RadialWeight loglin(double a, int dim = 1);
  /// exp(a |z|); constructible but fails the GRS condition.
  static RadialWeight exponential(double a, int dim = 1);
  static RadialWeight constant(int dim = 1) { return polynomial(0.0, dim); }
  /// m(z_1, z_2) = m_1(z_1) m_2(z_2) for one-dimensional factors.
  static RadialWeight product(const RadialWeight& first, const RadialWeight& second);
  static RadialWeight custom(int dim, LogProfile log_profile, std::optional<RadialWeight> envelope, std::string id);

  /// m^s; its envelope is v^{|s|}.
  RadialWeight pow(double s) const;

  int dim() const { return dim_; }
  WeightFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double exponent() const { return scale_; }
  const std::vector<RadialWeight>& factors() const { return factors_; }
  std::string id() const;

  double log_profile(std::span<const double> radii) const;
  double log_profile(double r) const;
  /// log m(z) for real coordinates z = (x_1, xi_1[, x_2, xi_2]).
  double log_eval(std::span<const double> z) const;
  double eval(std::span<const double> z) const;
  double operator()(double x, double xi) const;
  double operator()(cplx z) const { return (*this)(z.real(), z.imag()); }

  bool has_envelope() const;
  /// Declared submultiplicative envelope v with m(z + y) <= v(y) m(z).
  RadialWeight envelope() const;
  bool grs_failing_by_construction() const;
  bool is_constant() const;

 private:
  RadialWeight() = default;
  double family_log(double rho) const;

  int dim_ = 1;
  WeightFamily family_ = WeightFamily::polynomial;
  std::vector<double> params_;
  double scale_ = 1.0;
  std::vector<RadialWeight> factors_;
  LogProfile custom_;
  std::shared_ptr<RadialWeight> custom_envelope_;
  std::string custom_id_;
};

/// Parses "family:p1,p2" (families: const, polynomial, quadratic, peetre, subexp, loglin, exponential).
RadialWeight parse_weight(const std::string& spec, int dim = 1);

struct EnvelopeProbe {
  std::vector<double> y;
  double max_ratio = 0.0;  // sup_z m(z + y) / (v(y) m(z))
};

struct EnvelopeReport {
  std::vector<EnvelopeProbe> probes;
  double max_ratio = 0.0;
  /// inf over pairs of m(z1)/m(z2) * v(z1 - z2); the lower bound 1/v <= m(z1)/m(z2) needs this >= 1.
  double min_lower_ratio = 0.0;
  bool pass = false;
};

struct ProbeGrid {
  int points = 41;
  double half_width = 8.0;
};

/// Samples m(z + y) <= v(y) m(z) and its reverse over all probe pairs; pass iff ratios stay within 1 + tol.
EnvelopeReport moderateness_report(const RadialWeight& m, const RadialWeight& v, const ProbeGrid& grid = {},
                                   double tol = 1e-9);

struct GrsReport {
  std::vector<double> values;  // values[n-1] = v(n z)^{1/n}
  bool pass = false;
};

/// v(n z)^{1/n} for n = 1..n_max (n_max >= 10) and a trend verdict.
GrsReport grs_diagnostic(const RadialWeight& v, std::span<const double> z, int n_max);

}  // namespace tfloc
