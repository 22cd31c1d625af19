#pragma once

// Bargmann transform, Fock-space norms, Toeplitz operators and the intertwining check.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "tfloc/common.hpp"
#include "tfloc/grid.hpp"
#include "tfloc/hermite.hpp"
#include "tfloc/weights.hpp"

namespace tfloc {

/// e_n(z) = (pi^n / n!)^{1/2} z^n.
cplx fock_monomial(int n, cplx z);

/// F = sum_n a_n e_n (d = 1) or sum_alpha a_alpha e_alpha (d = 2), stored with a Hermite-style cutoff.
struct FockFunction {
  HermiteCoeffs coeffs;

  cplx operator()(cplx z) const;
  cplx operator()(std::span<const cplx> z) const;
  double norm() const { return coeffs.norm(); }
};

/// Coefficient route: B h_alpha = e_alpha.
FockFunction bargmann(const HermiteCoeffs& f);
std::vector<cplx> bargmann(const HermiteCoeffs& f, std::span<const cplx> z);
/// Grid route: 2^{1/4} e^{-pi z^2/2} int f(t) e^{-pi t^2} e^{2 pi t z} dt (d = 1).
std::vector<cplx> bargmann(const GridFunction& f, std::span<const cplx> z);

/// Cartesian complex grid [-L, L)^2 with spacing h for Fock norms.
struct ComplexGrid {
  double half_width = 6.0;
  double spacing = 1.0 / 32.0;
};

/// (int (int |F|^p m^p e^{-p pi |z|^2 / 2} dx)^{q/p} dy)^{1/q} (d = 1); throws ResolutionError on boundary mass.
double fock_norm(const FockFunction& F, double p, double q, const RadialWeight& m, const ComplexGrid& grid = {});

/// Polar rule on the plane: uniform angles times Gauss-Legendre in s with r = s^2 on [0, R].
struct PolarRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // include the area element
};
PolarRule polar_rule(int angles = 128, int radial = 256, double R = 10.0);

/// <F, G> = int F conj(G) e^{-pi |z|^2} dz by the polar rule (d = 1).
cplx fock_inner(const FockFunction& F, const FockFunction& G, const PolarRule& rule);

/// Radial coefficient route: a_alpha -> tau_alpha(m) a_alpha.
FockFunction toeplitz_apply(const RadialWeight& m, const FockFunction& F);
/// Quadrature route: T_m F(w) = int m(z) F(z) e^{pi conj(z) w} e^{-pi |z|^2} dz at the points w (d = 1).
std::vector<cplx> toeplitz_quadrature(const RadialWeight& m, const FockFunction& F, std::span<const cplx> w,
                                      const PolarRule& rule);

/// max |B(J_m f) - T_m(B f)| / max |B(J_m f)| over the points, with T_m by quadrature.
double intertwine_check(const RadialWeight& m, const HermiteCoeffs& f, std::span<const cplx> points,
                        const PolarRule& rule);

/// Points of a square lattice of the given spacing inside the disc |z| <= radius.
std::vector<cplx> disc_points(double radius, double spacing);

}  // namespace tfloc
