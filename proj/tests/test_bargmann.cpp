#include <doctest.h>

#include <cmath>

#include "tfloc/bargmann.hpp"
#include "tfloc/hermite.hpp"

using namespace tfloc;

TEST_CASE("monomials") {
  CHECK(std::abs(fock_monomial(0, cplx(2.0, 1.0)) - 1.0) < 1e-15);
  CHECK(std::abs(fock_monomial(1, 1.0)) == doctest::Approx(std::sqrt(kPi)));
  const PolarRule rule = polar_rule();
  HermiteCoeffs a(1, 3), b(1, 3);
  a.c[2] = 1.0;
  b.c[3] = 1.0;
  CHECK(std::abs(fock_inner(FockFunction{a}, FockFunction{a}, rule) - 1.0) < 1e-10);
  CHECK(std::abs(fock_inner(FockFunction{a}, FockFunction{b}, rule)) < 1e-10);
}

TEST_CASE("grid route matches coefficient route") {
  const GridSpec grid = GridSpec::phase_default(16);
  const HermiteBasis basis(1, 5, grid);
  const GridFunction f = basis.sample(MultiIndex(1));
  const std::vector<cplx> pts = {1.0, cplx(0.3, -0.7), cplx(-1.5, 2.0)};
  const std::vector<cplx> g = bargmann(f, pts), c = bargmann(HermiteCoeffs::unit(MultiIndex(1), 5), pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(g[i] - c[i]) < 1e-10);
  CHECK(std::abs(g[0]) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("Fock norms") {
  HermiteCoeffs f(1, 1);
  f.c << 1.0, 1.0;
  CHECK(fock_norm(bargmann(f), 2, 2, RadialWeight::constant()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  HermiteCoeffs far = HermiteCoeffs::unit(MultiIndex(60), 60);
  CHECK_THROWS_AS(fock_norm(bargmann(far), 2, 2, RadialWeight::constant(), ComplexGrid{2.0, 1.0 / 16.0}), ResolutionError);
}

TEST_CASE("Toeplitz operators") {
  HermiteCoeffs f(1, 4);
  f.c << 1.0, 0.5, 0.0, 0.0, cplx(0.0, 1.0);
  const FockFunction F = bargmann(f);
  CHECK((toeplitz_apply(RadialWeight::constant(), F).coeffs.c - f.c).norm() < 1e-12);
  const RadialWeight m = RadialWeight::polynomial(2.0);
  const FockFunction T = toeplitz_apply(m, F);
  const std::vector<cplx> w = {0.5, cplx(-1.0, 1.0)};
  const std::vector<cplx> q = toeplitz_quadrature(m, F, w, polar_rule());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(q[i] - T(w[i])) < 1e-8 * std::abs(T(w[i])));
}

TEST_CASE("intertwining") {
  HermiteCoeffs f(1, 1);
  f.c << 1.0, 1.0;
  const auto pts = disc_points(3.0, 0.5);
  for (const auto& x : pts) CHECK(std::abs(x) <= 3.0);
  CHECK(intertwine_check(RadialWeight::subexponential(1.0, 0.5), f, pts, polar_rule()) < 1e-6);
}
