#include "tfloc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tfloc {

namespace {

void require_finite(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) throw std::invalid_argument("weight parameters must be finite");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

std::string family_name(WeightFamily f) {
  switch (f) {
    case WeightFamily::polynomial: return "polynomial";
    case WeightFamily::quadratic: return "quadratic";
    case WeightFamily::peetre: return "peetre";
    case WeightFamily::subexponential: return "subexp";
    case WeightFamily::loglin: return "loglin";
    case WeightFamily::exponential: return "exponential";
    case WeightFamily::product: return "product";
    case WeightFamily::custom: return "custom";
  }
  return "unknown";
}

RadialWeight RadialWeight::polynomial(double s, int dim) {
  require_dimension(dim);
  require_finite({s});
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::polynomial;
  w.params_ = {s};
  return w;
}

RadialWeight RadialWeight::quadratic(double c, int dim) {
  require_dimension(dim);
  require_finite({c});
  if (c < 0.0) throw std::invalid_argument("quadratic weight needs c >= 0");
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::quadratic;
  w.params_ = {c};
  return w;
}

RadialWeight RadialWeight::peetre(double t, double c, int dim) {
  require_dimension(dim);
  require_finite({t, c});
  if (c <= 0.0) throw std::invalid_argument("peetre weight needs c > 0");
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::peetre;
  w.params_ = {t, c};
  return w;
}

RadialWeight RadialWeight::subexponential(double a, double b, int dim) {
  require_dimension(dim);
  require_finite({a, b});
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("subexponential weight needs 0 < b < 1");
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::subexponential;
  w.params_ = {a, b};
  return w;
}

RadialWeight RadialWeight::loglin(double a, int dim) {
  require_dimension(dim);
  require_finite({a});
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::loglin;
  w.params_ = {a};
  return w;
}

RadialWeight RadialWeight::exponential(double a, int dim) {
  require_dimension(dim);
  require_finite({a});
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::exponential;
  w.params_ = {a};
  return w;
}

RadialWeight RadialWeight::product(const RadialWeight& first, const RadialWeight& second) {
  if (first.dim() != 1 || second.dim() != 1) throw std::invalid_argument("product weights take one-dimensional factors");
  RadialWeight w;
  w.dim_ = 2;
  w.family_ = WeightFamily::product;
  w.factors_ = {first, second};
  return w;
}

RadialWeight RadialWeight::custom(int dim, LogProfile log_profile, std::optional<RadialWeight> envelope,
                                  std::string id) {
  require_dimension(dim);
  if (!log_profile) throw std::invalid_argument("custom weight needs a profile");
  if (envelope && envelope->dim() != dim) throw std::invalid_argument("envelope dimension differs from the weight");
  RadialWeight w;
  w.dim_ = dim;
  w.family_ = WeightFamily::custom;
  w.custom_ = std::move(log_profile);
  if (envelope) w.custom_envelope_ = std::make_shared<RadialWeight>(*envelope);
  w.custom_id_ = std::move(id);
  return w;
}

RadialWeight RadialWeight::pow(double s) const {
  require_finite({s});
  RadialWeight w = *this;
  w.scale_ = scale_ * s;
  return w;
}

std::string RadialWeight::id() const {
  std::string base;
  switch (family_) {
    case WeightFamily::product: base = "product(" + factors_[0].id() + "," + factors_[1].id() + ")"; break;
    case WeightFamily::custom: base = custom_id_; break;
    default: {
      base = family_name(family_) + "(";
      for (std::size_t i = 0; i < params_.size(); ++i) base += (i ? "," : "") + fmt(params_[i]);
      base += ")";
    }
  }
  if (scale_ != 1.0) base += "^" + fmt(scale_);
  return base;
}

double RadialWeight::family_log(double rho) const {
  switch (family_) {
    case WeightFamily::polynomial: return 0.5 * params_[0] * std::log1p(rho * rho);
    case WeightFamily::quadratic: return std::log1p(params_[0] * rho * rho);
    case WeightFamily::peetre: return params_[0] * std::log1p(params_[1] * rho);
    case WeightFamily::subexponential: return rho > 0.0 ? params_[0] * std::pow(rho, params_[1]) : 0.0;
    case WeightFamily::loglin: return params_[0] * rho / std::log(std::numbers::e + rho);
    case WeightFamily::exponential: return params_[0] * rho;
    default: break;
  }
  throw std::logic_error("family_log on a composite weight");
}

double RadialWeight::log_profile(std::span<const double> radii) const {
  if (static_cast<int>(radii.size()) != dim_) throw std::invalid_argument("radius count does not match the weight dimension");
  if (scale_ == 0.0) return 0.0;
  double v;
  if (family_ == WeightFamily::product) {
    v = factors_[0].log_profile(radii[0]) + factors_[1].log_profile(radii[1]);
  } else if (family_ == WeightFamily::custom) {
    v = custom_(radii);
  } else {
    const double rho = dim_ == 1 ? std::abs(radii[0]) : std::hypot(radii[0], radii[1]);
    v = family_log(rho);
  }
  return scale_ * v;
}

double RadialWeight::log_profile(double r) const {
  const double radii[2] = {r, 0.0};
  return log_profile(std::span<const double>(radii, 1));
}

double RadialWeight::log_eval(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != 2 * dim_) throw std::invalid_argument("phase-space point dimension mismatch");
  double r[2] = {std::hypot(z[0], z[1]), 0.0};
  if (dim_ == 2) r[1] = std::hypot(z[2], z[3]);
  return log_profile(std::span<const double>(r, static_cast<std::size_t>(dim_)));
}

double RadialWeight::eval(std::span<const double> z) const { return std::exp(log_eval(z)); }

double RadialWeight::operator()(double x, double xi) const {
  if (dim_ != 1) throw std::invalid_argument("phase-space point dimension mismatch");
  return std::exp(log_profile(std::hypot(x, xi)));
}

bool RadialWeight::has_envelope() const {
  if (family_ == WeightFamily::custom) return static_cast<bool>(custom_envelope_) || scale_ == 0.0;
  if (family_ == WeightFamily::product) return factors_[0].has_envelope() && factors_[1].has_envelope();
  return true;
}

RadialWeight RadialWeight::envelope() const {
  const double k = std::abs(scale_);
  if (k == 0.0) return constant(dim_);
  switch (family_) {
    case WeightFamily::polynomial: return peetre(std::abs(params_[0]), 1.0, dim_).pow(k);
    case WeightFamily::quadratic:
      return params_[0] == 0.0 ? constant(dim_) : peetre(2.0, std::sqrt(params_[0]), dim_).pow(k);
    case WeightFamily::peetre: return peetre(std::abs(params_[0]), params_[1], dim_).pow(k);
    case WeightFamily::subexponential: return subexponential(std::abs(params_[0]), params_[1], dim_).pow(k);
    case WeightFamily::loglin: return loglin(std::abs(params_[0]), dim_).pow(k);
    case WeightFamily::exponential: return exponential(std::abs(params_[0]), dim_).pow(k);
    case WeightFamily::product: return product(factors_[0].envelope(), factors_[1].envelope()).pow(k);
    case WeightFamily::custom:
      if (!custom_envelope_) throw std::invalid_argument("custom weight " + custom_id_ + " has no declared envelope");
      return custom_envelope_->pow(k);
  }
  throw std::logic_error("unreachable");
}

bool RadialWeight::grs_failing_by_construction() const {
  if (scale_ == 0.0) return false;
  switch (family_) {
    case WeightFamily::exponential: return params_[0] != 0.0;
    case WeightFamily::product:
      return factors_[0].grs_failing_by_construction() || factors_[1].grs_failing_by_construction();
    case WeightFamily::custom: return custom_envelope_ && custom_envelope_->grs_failing_by_construction();
    default: return false;
  }
}

bool RadialWeight::is_constant() const {
  if (scale_ == 0.0) return true;
  switch (family_) {
    case WeightFamily::product: return factors_[0].is_constant() && factors_[1].is_constant();
    case WeightFamily::custom: return false;
    case WeightFamily::subexponential:
    case WeightFamily::loglin:
    case WeightFamily::exponential:
    case WeightFamily::polynomial:
    case WeightFamily::quadratic:
    case WeightFamily::peetre: return params_[0] == 0.0;
  }
  return false;
}

RadialWeight parse_weight(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  const std::string fam = spec.substr(0, colon);
  std::vector<double> p;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad weight parameter '" + tok + "'");
      }
      if (used != tok.size()) throw std::invalid_argument("bad weight parameter '" + tok + "'");
      p.push_back(v);
    }
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw std::invalid_argument("wrong number of parameters for weight family '" + fam + "'");
  };
  if (fam == "const" || fam == "constant") { need(0, 0); return RadialWeight::constant(dim); }
  if (fam == "polynomial" || fam == "poly") { need(1, 1); return RadialWeight::polynomial(p[0], dim); }
  if (fam == "quadratic") { need(1, 1); return RadialWeight::quadratic(p[0], dim); }
  if (fam == "peetre") { need(1, 2); return RadialWeight::peetre(p[0], p.size() > 1 ? p[1] : 1.0, dim); }
  if (fam == "subexp" || fam == "subexponential") { need(2, 2); return RadialWeight::subexponential(p[0], p[1], dim); }
  if (fam == "loglin") { need(1, 1); return RadialWeight::loglin(p[0], dim); }
  if (fam == "exponential" || fam == "exp") { need(1, 1); return RadialWeight::exponential(p[0], dim); }
  throw std::invalid_argument("unknown weight family '" + fam + "'");
}

EnvelopeReport moderateness_report(const RadialWeight& m, const RadialWeight& v, const ProbeGrid& grid, double tol) {
  if (m.dim() != v.dim()) throw std::invalid_argument("weight and envelope dimensions differ");
  if (grid.points < 2 || !(grid.half_width > 0.0)) throw std::invalid_argument("probe grid needs >= 2 points and positive extent");
  const int D = 2 * m.dim();
  const int P = grid.points;
  const double h = 2.0 * grid.half_width / (P - 1);
  std::size_t count = 1;
  for (int k = 0; k < D; ++k) count *= static_cast<std::size_t>(P);
  std::vector<double> pts(count * D);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rem = i;
    for (int k = D - 1; k >= 0; --k) {
      pts[i * D + k] = -grid.half_width + h * static_cast<double>(rem % P);
      rem /= P;
    }
  }
  std::vector<double> logm(count);
  for (std::size_t i = 0; i < count; ++i) logm[i] = m.log_eval(std::span<const double>(&pts[i * D], D));

  EnvelopeReport rep;
  rep.probes.reserve(count);
  double max_log = -std::numeric_limits<double>::infinity();
  double min_lower = std::numeric_limits<double>::infinity();
  std::vector<double> sum(D);
  for (std::size_t iy = 0; iy < count; ++iy) {
    std::span<const double> y(&pts[iy * D], D);
    const double logv = v.log_eval(y);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t iz = 0; iz < count; ++iz) {
      for (int k = 0; k < D; ++k) sum[k] = pts[iz * D + k] + y[k];
      const double diff = m.log_eval(sum) - logm[iz];
      worst = std::max(worst, diff - logv);
      min_lower = std::min(min_lower, diff + logv);
    }
    rep.probes.push_back({std::vector<double>(y.begin(), y.end()), std::exp(worst)});
    max_log = std::max(max_log, worst);
  }
  rep.max_ratio = std::exp(max_log);
  rep.min_lower_ratio = std::exp(min_lower);
  rep.pass = std::isfinite(max_log) && rep.max_ratio <= 1.0 + tol && rep.min_lower_ratio >= 1.0 - tol;
  return rep;
}

GrsReport grs_diagnostic(const RadialWeight& v, std::span<const double> z, int n_max) {
  if (n_max < 10) throw std::invalid_argument("GRS diagnostic needs n_max >= 10");
  if (static_cast<int>(z.size()) != 2 * v.dim()) throw std::invalid_argument("phase-space point dimension mismatch");
  GrsReport rep;
  rep.values.resize(static_cast<std::size_t>(n_max));
  std::vector<double> nz(z.size());
  std::vector<double> L(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t k = 0; k < z.size(); ++k) nz[k] = n * z[k];
    L[n] = v.log_eval(nz) / n;
    rep.values[n - 1] = std::exp(L[n]);
  }
  const double last = L[n_max], half = L[n_max / 2];
  const bool decaying = last <= 1e-12 || last < (1.0 - 1e-9) * half;
  rep.pass = !v.grs_failing_by_construction() && decaying;
  return rep;
}

}  // namespace tfloc
