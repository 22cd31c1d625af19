#pragma once

// Isomorphism experiments: conditioning of J_theta, lifting ratios of localization
// operators, and preconditioned inversion of Gabor multipliers.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "tfloc/gabor.hpp"
#include "tfloc/operators.hpp"
#include "tfloc/phase_space.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

struct RefinementPoint {
  int N = 0;
  double sup = 0.0;
  double inf = 0.0;
};

struct IsoReport {
  std::string weight_id;
  int N = 0;
  std::vector<double> rho;
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 0.0;
  std::vector<RefinementPoint> refinement;  // prefixes N/2 and N
};

/// rho_n = tau_n(theta)^2 / tau_n(theta^2) for n <= N (d = 1).
IsoReport iso_condition(const RadialWeight& theta, int N);

/// Throws GrsRefusal when the weight's envelope violates the GRS condition.
void require_grs(const RadialWeight& m);

struct LiftConfig {
  Window window = Window::gaussian();
  int N = 64;
  double phase_spacing = 1.0 / 16.0;
  double phase_extent = 8.0;
  double p = 2.0;
  double q = 2.0;
  int hermite_tests = 20;  // h_0 .. h_{K-1}
  int random_tests = 10;
  int random_degree = 19;
  std::uint64_t seed = 20240607;
};

struct LiftStats {
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;
};

/// The test set: h_0..h_{K-1}, then seeded random unit-norm mixes of h_0..h_degree.
std::vector<HermiteCoeffs> lifting_test_set(const LiftConfig& cfg);

/// r(f) = ||A_m f||_{M^p_{mu/m}} / ||f||_{M^p_mu} with grid norms against the Gaussian window.
LiftStats lifting_ratio(const RadialWeight& m, const RadialWeight& mu, const LiftConfig& cfg);

struct HilbertPairReport {
  double form_lo = 0.0;  // extreme values of <A_m f, f> / ||f||^2_{M^2_theta}
  double form_hi = 0.0;
  double map_lo = 0.0;   // extreme values of ||A_m f||_{M^2_{1/theta}} / ||f||_{M^2_theta}
  double map_hi = 0.0;
};

/// Two-sided bounds of A_m : M^2_theta -> M^2_{1/theta}, theta = m^{1/2}, over the truncation.
HilbertPairReport hilbert_iso_pair_check(const Window& g, const RadialWeight& m, int N);

enum class Preconditioner { none, inverse_weight };

struct SolveTrace {
  int iterations = 0;
  std::vector<double> residuals;  // relative residual ||G_m f - b|| / ||b|| per iteration
  double final_residual = 0.0;
  std::string preconditioner;
};

struct SolveResult {
  GridFunction f;
  SolveTrace trace;
};

/// Solves G_m f = b. With the inverse-weight preconditioner: GMRES on G_m G_{1/m} y = b, f = G_{1/m} y.
/// Without: conjugate gradients on the normal equations G_m^2 f = G_m b.
SolveResult precond_solve(const GaborSystem& system, const RadialWeight& m, const GridFunction& b, double tol,
                          Preconditioner pre = Preconditioner::inverse_weight, int max_iter = 1000);

struct SpectrumBracket {
  double precond_lo = 0.0;
  double precond_hi = 0.0;
  double normal_condition = 0.0;  // condition of G_m^2 on the same span
};

/// Extreme eigenvalues of G_{1/m} G_m compressed to span{h_0..h_K}, against the condition of G_m^2 there.
SpectrumBracket precond_spectrum(const GaborSystem& system, const RadialWeight& m, int K);

}  // namespace tfloc
