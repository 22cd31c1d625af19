#pragma once

// Weighted gamma functions
//   tau_{alpha,s}(theta) = int theta_0(sqrt(u_1/pi), ...)^s prod_j u_j^{alpha_j} e^{-u_j} / alpha_j! du
// and the inequality scans built on them.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tfloc/common.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

struct TauOptions {
  int initial_nodes = 200;
  int max_nodes = 3200;      // per coordinate piece, d = 1
  int max_nodes_2d = 800;    // per coordinate piece, d = 2
  double rel_tol = 1e-11;
};

struct TauResult {
  double value = 0.0;
  double est_error = 0.0;  // |difference of the last two refinements|
  int nodes = 0;           // total nodes of the accepted rule
};

/// Windowed Gauss-Legendre evaluation of tau_{alpha,s}(theta); throws QuadratureError when refinement stalls.
TauResult tau(const RadialWeight& theta, const MultiIndex& alpha, double s, const TauOptions& opt = {});
inline double tau_value(const RadialWeight& theta, int n, double s) { return tau(theta, MultiIndex(n), s).value; }

/// d = 1 cross-check with an n-point generalized Gauss-Laguerre rule.
double tau_gauss_laguerre(const RadialWeight& theta, int n, double s, int nodes = 400);

struct TauSpectrum {
  std::string weight_id;
  double s = 1.0;
  int dim = 1;
  int N = 0;
  Eigen::VectorXd values;     // flat multi-index order
  Eigen::VectorXd est_error;
  std::vector<int> nodes;

  double operator[](const MultiIndex& a) const { return values[static_cast<Eigen::Index>(flat_index(a, N))]; }
};

TauSpectrum tau_spectrum(const RadialWeight& theta, double s, int N, const TauOptions& opt = {});

struct ProductScan {
  std::vector<double> gamma;  // gamma(alpha) = tau_s tau_t tau_{-s-t}, flat order
  std::vector<double> running_sup;
  std::vector<double> running_inf;
  double sup = 0.0;
  double inf = 0.0;
};

ProductScan product_inequality_scan(const RadialWeight& theta, double s, double t, int N);

/// sup gamma / inf gamma over the truncation.
double vst_condition(const RadialWeight& theta, double s, double t, int N);

}  // namespace tfloc
