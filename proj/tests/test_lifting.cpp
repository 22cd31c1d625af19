#include <doctest.h>

#include <cmath>

#include "tfloc/hermite.hpp"
#include "tfloc/lifting.hpp"

using namespace tfloc;

TEST_CASE("rho for 1 + pi r^2") {
  const IsoReport r = iso_condition(RadialWeight::quadratic(kPi), 50);
  for (int n : {0, 5, 50}) {
    const double ex = (n + 2.0) * (n + 2.0) / (1.0 + 2.0 * (n + 1) + (n + 1.0) * (n + 2.0));
    CHECK(r.rho[n] == doctest::Approx(ex).epsilon(1e-10));
  }
  CHECK(r.refinement.size() == 2);
  CHECK(r.sup <= 1.0);
}

TEST_CASE("GRS refusal") {
  CHECK_THROWS_AS(require_grs(RadialWeight::exponential(1.0)), GrsRefusal);
  CHECK_NOTHROW(require_grs(RadialWeight::subexponential(1.0, 0.5)));
}

TEST_CASE("deterministic test set") {
  LiftConfig cfg;
  cfg.N = 32;
  const auto a = lifting_test_set(cfg), b = lifting_test_set(cfg);
  REQUIRE(a.size() == 30);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].norm() == doctest::Approx(1.0));
    CHECK((a[i].c - b[i].c).norm() == 0.0);
  }
}

TEST_CASE("lifting ratios of the identity") {
  LiftConfig cfg;
  cfg.N = 32;
  cfg.phase_spacing = 1.0 / 8.0;
  const LiftStats s = lifting_ratio(RadialWeight::constant(), RadialWeight::constant(), cfg);
  CHECK(s.min == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.max == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Hilbert pair bounds") {
  const HilbertPairReport r = hilbert_iso_pair_check(Window::gaussian(), RadialWeight::polynomial(2.0), 24);
  CHECK(r.form_lo > 0.0);
  CHECK(r.form_lo <= r.form_hi);
  CHECK(r.map_lo > 0.0);
  CHECK(std::isfinite(r.map_hi));
}

TEST_CASE("preconditioned inversion") {
  const GridSpec grid = GridSpec::phase_default(64);
  const GaborSystem sys(gaussian_window(grid), 0.5, 0.5);
  const RadialWeight m = RadialWeight::polynomial(1.0);
  const GridFunction h2 = HermiteBasis(1, 2, grid).sample(MultiIndex(2));
  const GridFunction b = gabor_multiplier_apply(sys, m, h2);
  const SolveResult pre = precond_solve(sys, m, b, 1e-8, Preconditioner::inverse_weight);
  const SolveResult nrm = precond_solve(sys, m, b, 1e-8, Preconditioner::none);
  CHECK(pre.trace.iterations < nrm.trace.iterations);
  CHECK(pre.trace.final_residual <= 1e-8);
  CHECK((pre.f - h2).norm() < 1e-6);
  const SpectrumBracket sb = precond_spectrum(sys, m, 20);
  CHECK(sb.precond_lo > 0.0);
  CHECK(sb.precond_lo <= sb.precond_hi);
  CHECK(sb.normal_condition >= 1.0);
  CHECK_THROWS_AS(precond_solve(sys, m, b, 1e-14, Preconditioner::none, 3), ConvergenceError);
}

TEST_CASE("mixed-norm lifting ratios") {
  LiftConfig cfg;
  cfg.N = 32;
  cfg.phase_spacing = 1.0 / 8.0;
  cfg.p = 1.0;
  cfg.q = kInf;
  const LiftStats s = lifting_ratio(RadialWeight::polynomial(1.0), RadialWeight::constant(), cfg);
  CHECK(s.ratios.size() == 30);
  CHECK(s.min > 0.0);
  CHECK(std::isfinite(s.max));
  CHECK(s.spread == doctest::Approx(s.max / s.min));
}
