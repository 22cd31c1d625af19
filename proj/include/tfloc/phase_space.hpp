#pragma once

// Sampled short-time Fourier transform on uniform phase-space grids and the
// modulation-space norms built on it.

#include <Eigen/Dense>

#include <limits>
#include <string>

#include "tfloc/common.hpp"
#include "tfloc/grid.hpp"
#include "tfloc/hermite.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

/// Half-open phase grid [-L_z, L_z)^2 (d = 1) with spacing delta.
struct PhaseGrid {
  double half_width = 8.0;
  double spacing = 1.0 / 16.0;

  std::size_t points_per_axis() const;
  double coord(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing; }
};

/// Samples F(x_k, xi_l) stored as values(k, l).
struct PhaseField {
  PhaseGrid grid;
  Eigen::MatrixXcd values;
};

/// V_g f(x, xi) = int f(t) conj(g(t - x)) e^{-2 pi i xi t} dt by Riemann sums, one FFT per time shift.
/// Requires delta / Delta and 1 / (Delta delta) to be integers.
PhaseField stft(const GridFunction& f, const GridFunction& g, const PhaseGrid& pg = {});

/// f = delta^2 sum_z F(z) pi(z) g on the window's grid.
GridFunction istft(const PhaseField& F, const GridFunction& g);

/// V_g f for a finite Hermite expansion with a Hermite-expanded window g = sum_k w_k h_k, in closed form.
PhaseField phase_field_from_coeffs(const HermiteCoeffs& f, const Eigen::VectorXcd& window, const PhaseGrid& pg);

/// Precomputed V_g h_alpha on a phase grid; fields of many expansions then cost one product each.
class HermitePhaseTable {
 public:
  HermitePhaseTable(int N, const Eigen::VectorXcd& window, const PhaseGrid& pg);
  PhaseField field(const HermiteCoeffs& f) const;
  int cutoff() const { return N_; }
  const PhaseGrid& grid() const { return pg_; }

 private:
  int N_;
  PhaseGrid pg_;
  Eigen::MatrixXcd table_;  // (N+1) x K^2, point index i * K + j
};

enum class NormMethod { grid, frame, hermite };
std::string method_name(NormMethod m);

struct ModNormResult {
  double value = 0.0;
  NormMethod method = NormMethod::grid;
  double p = 2.0;
  double q = 2.0;
  std::string weight_id;
  int truncation = 0;  // Hermite cutoff or lattice size, 0 when unused
};

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Mixed L^{p,q}_m norm of a sampled field: inner p-norm over x, outer q-norm over xi.
/// Throws ResolutionError when the outer ring carries more than `boundary_tol` of the weighted mass.
ModNormResult mod_norm_field(const PhaseField& F, double p, double q, const RadialWeight& m,
                             double boundary_tol = 1e-8);

/// ||V_g f||_{L^{p,q}_m} with the sampled STFT against window g.
ModNormResult mod_norm_grid(const GridFunction& f, const GridFunction& g, double p, double q, const RadialWeight& m,
                            const PhaseGrid& pg = {});

/// sqrt(sum |c_alpha|^2 tau_alpha(theta^2)).
ModNormResult mod_norm_hermite(const HermiteCoeffs& f, const RadialWeight& theta);

/// The Gaussian window h sampled on a grid.
GridFunction gaussian_window(const GridSpec& grid);

}  // namespace tfloc
