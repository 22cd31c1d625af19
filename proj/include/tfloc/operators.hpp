#pragma once

// Localization operators in the Hermite truncation, canonical diagonal operators,
// Gabor multipliers and time-frequency kernels.

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tfloc/common.hpp"
#include "tfloc/gabor.hpp"
#include "tfloc/gamma_engine.hpp"
#include "tfloc/grid.hpp"
#include "tfloc/hermite.hpp"
#include "tfloc/phase_space.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

/// Analysis window: the Gaussian, a normalized Hermite mix, or raw grid samples.
struct Window {
  enum class Kind { gaussian, hermite_mix, samples };
  Kind kind = Kind::gaussian;
  Eigen::VectorXcd hermite;  // normalized coefficients (gaussian, hermite_mix)
  GridFunction samples;      // samples kind only

  static Window gaussian();
  static Window hermite_mix(const Eigen::VectorXcd& coeffs);
  static Window sampled(const GridFunction& g);

  GridFunction on_grid(const GridSpec& grid) const;
  std::string id() const;
};

using PhaseWeight = std::function<double(double, double)>;

/// Operator matrix in the Hermite basis h_0..h_N (d = 1): mat(row, col) = <T h_col, h_row>.
struct DenseOperator {
  int N = 0;
  Eigen::MatrixXcd mat;
  std::string provenance;

  static DenseOperator identity(int N);
  HermiteCoeffs apply(const HermiteCoeffs& f) const;
};

struct DiagonalOperator {
  TauSpectrum spectrum;

  int N() const { return spectrum.N; }
  DenseOperator to_dense() const;
  HermiteCoeffs apply(const HermiteCoeffs& f) const;
};

struct LocalizationOptions {
  int graded_points = 256;             // per axis of the graded grid (Hermite windows)
  PhaseGrid sampled_grid{8.0, 1.0 / 16.0};  // Cartesian phase grid (sampled windows)
  double tail_tol = 1e-12;             // allowed integrand size on the outer ring, relative to the peak
};

/// M(b, a) = int m(z) V_g h_a(z) conj(V_g h_b(z)) dz. Hermite windows use a graded grid
/// z = |w|^2 w; sampled windows use the Cartesian phase grid (a fine-lattice Gabor multiplier).
DenseOperator localization_matrix(const Window& g, const PhaseWeight& m, int N, const LocalizationOptions& opt = {},
                                  const std::string& weight_id = "custom");
DenseOperator localization_matrix(const Window& g, const RadialWeight& m, int N, const LocalizationOptions& opt = {});

/// J_theta: eigenvalues tau_alpha(theta) on h_alpha.
DiagonalOperator canonical_diagonal(const RadialWeight& theta, int N);

GridFunction gabor_multiplier_apply(const GaborSystem& system, const Eigen::VectorXd& lattice_weights,
                                    const GridFunction& f);
GridFunction gabor_multiplier_apply(const GaborSystem& system, const RadialWeight& m, const GridFunction& f);

DenseOperator compose(const DenseOperator& A, const DenseOperator& B);

struct KernelOffset {
  cplx w;
  double H = 0.0;
};

/// K(y, z) = <T pi(z) g, pi(y) g> on probe points with its offset envelope H(w) = max_{y - z = w} |K|.
struct TFKernel {
  std::vector<cplx> probes;
  double spacing = 0.25;
  Eigen::MatrixXcd K;  // K(i, j) = kernel at (y = probes[i], z = probes[j])
  std::vector<KernelOffset> envelope;
  /// max over offsets of (max |K| - min |K|) among pairs sharing the offset.
  double offset_spread = 0.0;
  std::map<std::pair<int, int>, double> lookup;  // offset in units of spacing -> H

  double H(cplx w) const;
};

struct KernelOptions {
  double spacing = 0.25;
  double radius = 0.0;  // 0 means sqrt(N/pi)/2
  double tail_tol = 1e-6;
};

TFKernel tf_kernel(const DenseOperator& T, const Eigen::VectorXcd& window, const KernelOptions& opt = {});

struct EnvelopeCheck {
  std::vector<double> radii;
  std::vector<double> tail_sums;  // sum over |w| >= radius of H(w) v(w)
  bool monotone = false;
  double tail_ratio = 0.0;        // last / first tail sum
  double decay_rate = 0.0;        // c in log H ~ -c |w|^2 (least squares)
  bool pass = false;
};

EnvelopeCheck envelope_check(const TFKernel& kernel, const RadialWeight& v);

/// D = G * (v H0) * G* on a grid of spacing h over [-extent, extent)^2, evaluated at the kernel offsets,
/// with G(z) = e^{-pi |z|^2 / 2} and H0 bilinearly interpolated from `H0` (zero outside its probes).
struct Domination {
  std::vector<double> H;
  std::vector<double> D;
  double worst_ratio = 0.0;  // max H / D
  bool pass = false;
};

Domination dominating_convolution(const TFKernel& kernel, const TFKernel& H0, const RadialWeight& v, double h = 0.125,
                                  double extent = 12.0);

}  // namespace tfloc
