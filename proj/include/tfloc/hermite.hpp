#pragma once

// Hermite functions in the exp(-pi x^2) scaling:
//   h_0(x) = 2^{1/4} exp(-pi x^2),  ||h_n||_2 = 1,
// their tensor products, and closed-form short-time Fourier transforms
// against Hermite windows.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "tfloc/common.hpp"
#include "tfloc/grid.hpp"

namespace tfloc {

/// Values h_0(x) .. h_N(x) at every point; row n holds h_n.
Eigen::MatrixXd hermite_table(int N, std::span<const double> x);

double hermite_eval(int n, double x);
std::vector<double> hermite_eval(int n, std::span<const double> x);

/// h_alpha(x) = prod_j h_{alpha_j}(x_j); x.size() must equal alpha.dim().
double hermite_tensor(const MultiIndex& alpha, std::span<const double> x);

/// V_h h_alpha at phase-space point (x_j, xi_j) ~ z_j = x_j + i xi_j:
///   prod_j exp(-pi i x_j xi_j) (pi^{a_j}/a_j!)^{1/2} conj(z_j)^{a_j} exp(-pi |z_j|^2 / 2).
cplx stft_hermite_analytic(const MultiIndex& alpha, std::span<const cplx> z);
cplx stft_hermite_analytic(int n, cplx z);

/// V_{h_k} h_n(z) = <h_n, pi(z) h_k> in one dimension (Laguerre form).
cplx stft_hermite_cross(int n, int k, cplx z);

/// Table T(alpha, p) = V_g h_alpha(z_p) for alpha <= N and the window g = sum_k w_k h_k.
Eigen::MatrixXcd hermite_stft_table(int N, const Eigen::VectorXcd& window, std::span<const cplx> z);

/// Finite Hermite expansion sum_alpha c_alpha h_alpha with alpha_j <= N.
struct HermiteCoeffs {
  int dim = 1;
  int N = 0;
  Eigen::VectorXcd c;

  HermiteCoeffs() = default;
  HermiteCoeffs(int d, int cutoff);
  HermiteCoeffs(int d, int cutoff, Eigen::VectorXcd coeffs);

  static HermiteCoeffs unit(const MultiIndex& alpha, int cutoff);

  cplx& operator[](const MultiIndex& a) { return c[static_cast<Eigen::Index>(flat_index(a, N))]; }
  cplx operator[](const MultiIndex& a) const { return c[static_cast<Eigen::Index>(flat_index(a, N))]; }
  double norm() const { return c.norm(); }
  /// Same expansion viewed with a different cutoff (zero-padded or truncated).
  HermiteCoeffs with_cutoff(int cutoff) const;
};

/// Hermite functions sampled on a grid, with the Gram deviation of the sampled set.
class HermiteBasis {
 public:
  HermiteBasis(int dim, int N, const GridSpec& grid);
  static HermiteBasis with_defaults(int dim, int N) { return {dim, N, GridSpec::hermite_default(dim, N)}; }

  int dim() const { return dim_; }
  int cutoff() const { return N_; }
  const GridSpec& grid() const { return grid_; }
  /// One-dimensional table, row n = h_n on the axis grid.
  const Eigen::MatrixXd& table() const { return table_; }
  /// max |<h_a, h_b> - delta_ab| over the sampled family (d = 2 via the tensor structure).
  double gram_deviation() const { return gram_deviation_; }

  GridFunction sample(const MultiIndex& alpha) const;

 private:
  int dim_;
  int N_;
  GridSpec grid_;
  Eigen::MatrixXd table_;
  double gram_deviation_ = 0.0;
};

/// c_alpha = <f, h_alpha> by grid quadrature. Throws ResolutionError when the
/// basis Gram deviation exceeds `gram_tol`.
HermiteCoeffs hermite_coeffs(const GridFunction& f, const HermiteBasis& basis, double gram_tol = 1e-8);

GridFunction hermite_synthesize(const HermiteCoeffs& c, const HermiteBasis& basis);

}  // namespace tfloc
