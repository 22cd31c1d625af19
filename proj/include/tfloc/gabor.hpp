#pragma once

// Gabor systems on separable lattices aZ x bZ truncated to [-L, L)^2, applied matrix-free.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "tfloc/common.hpp"
#include "tfloc/grid.hpp"
#include "tfloc/phase_space.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

struct FrameBounds {
  double A = 0.0;
  double B = 0.0;
};

struct GaborOptions {
  double half_width = 0.0;      // lattice extent; 0 means the signal grid's half-width
  int bound_subspace = 48;      // Hermite span used for frame bounds on large grids
  double dual_tol = 1e-13;
};

class GaborSystem {
 public:
  /// The window is normalized to unit norm. Throws NotAFrameError when ab >= 1 or the
  /// frame bounds collapse (A / B < 1e-10).
  GaborSystem(const GridFunction& window, double a, double b, const GaborOptions& opt = {});

  const GridFunction& window() const { return g_; }
  const GridFunction& dual_window() const { return dual_; }
  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t size() const { return static_cast<std::size_t>(nk_ * nl_); }
  /// Lattice point (x, xi) for flat index k * n_l + l.
  std::pair<double, double> point(std::size_t idx) const;
  FrameBounds bounds() const { return bounds_; }

  /// c_lambda = <f, pi(lambda) g>.
  Eigen::VectorXcd coeffs(const GridFunction& f) const;
  /// sum_lambda c_lambda pi(lambda) w for a window w on the same grid.
  GridFunction synthesize(const Eigen::VectorXcd& c, const GridFunction& w) const;
  GridFunction synthesize(const Eigen::VectorXcd& c) const { return synthesize(c, g_); }

  GridFunction frame_operator(const GridFunction& f) const { return synthesize(coeffs(f)); }
  /// f = sum <f, pi(lambda) g> pi(lambda) gamma with the dual window.
  GridFunction reconstruct(const GridFunction& f) const { return synthesize(coeffs(f), dual_); }
  /// Samples of a weight on the lattice.
  Eigen::VectorXd lattice_values(const std::function<double(double, double)>& m) const;
  Eigen::VectorXd lattice_values(const RadialWeight& m) const;

 private:
  FrameBounds compute_bounds(int subspace) const;

  GridFunction g_;
  GridFunction dual_;
  double a_, b_, L_;
  long nk_ = 0, nl_ = 0, step_ = 0, k0_ = 0, l0_ = 0;
  Eigen::MatrixXcd E_;  // E(l, j) = e^{2 pi i xi_l t_j}
  FrameBounds bounds_;
};

/// Weighted l^p norm of the lattice coefficients (p = q only).
ModNormResult mod_norm_frame(const GridFunction& f, double p, const RadialWeight& m, const GaborSystem& system);

/// Conjugate gradients for a Hermitian positive definite operator on grid functions.
struct CgResult {
  GridFunction x;
  int iterations = 0;
  double residual = 0.0;
};
CgResult conjugate_gradient(const std::function<GridFunction(const GridFunction&)>& op, const GridFunction& b,
                            double tol, int max_iter);

}  // namespace tfloc
