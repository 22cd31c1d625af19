#include <doctest.h>

#include <cmath>

#include "tfloc/hermite.hpp"
#include "tfloc/phase_space.hpp"

using namespace tfloc;

namespace {
const GridSpec& grid() {
  static const GridSpec g = GridSpec::phase_default(64);
  return g;
}
}  // namespace

TEST_CASE("sampled STFT matches the closed form, phase included") {
  const HermiteBasis basis(1, 6, grid());
  const PhaseGrid pg;
  const PhaseField F = stft(basis.sample(MultiIndex(5)), gaussian_window(grid()), pg);
  double worst = 0.0;
  for (std::size_t i = 0; i < pg.points_per_axis(); i += 7)
    for (std::size_t j = 0; j < pg.points_per_axis(); j += 7) {
      const cplx z(pg.coord(i), pg.coord(j));
      worst = std::max(worst, std::abs(F.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                       stft_hermite_analytic(5, z)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("coefficient route agrees with the sampled route") {
  const HermiteBasis basis(1, 8, grid());
  HermiteCoeffs c(1, 8);
  c.c[1] = 0.6;
  c.c[8] = cplx(0.0, 0.8);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(2);
  w << 1.0, 0.0;
  const PhaseGrid pg{6.0, 1.0 / 8.0};
  const PhaseField A = phase_field_from_coeffs(c, w, pg);
  const PhaseField B = stft(hermite_synthesize(c, basis), gaussian_window(grid()), pg);
  CHECK((A.values - B.values).cwiseAbs().maxCoeff() < 1e-12);
  const HermitePhaseTable table(8, w, pg);
  CHECK((table.field(c).values - A.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Moyal identity and inversion") {
  const HermiteBasis basis(1, 3, grid());
  const GridFunction f = basis.sample(MultiIndex(3));
  const GridFunction g = gaussian_window(grid());
  const ModNormResult r = mod_norm_grid(f, g, 2.0, 2.0, RadialWeight::constant());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
  const GridFunction back = istft(stft(f, g), g);
  CHECK((back - f).norm() < 1e-8);
}

TEST_CASE("grid norm agrees with the Hermite norm for p = q = 2") {
  const RadialWeight m = RadialWeight::polynomial(1.0);
  HermiteCoeffs c(1, 4);
  c.c << 0.5, 0.0, 0.5, 0.5, 0.5;
  const HermiteBasis basis(1, 4, grid());
  const double a = mod_norm_grid(hermite_synthesize(c, basis), gaussian_window(grid()), 2, 2, m).value;
  const double b = mod_norm_hermite(c, m).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("mixed norms") {
  const GridFunction g = gaussian_window(grid());
  const PhaseField F = stft(g, g);
  // |V_h h_0| = e^{-pi |z|^2 / 2}: the sup is 1 and the L^1 norm is 2
  CHECK(mod_norm_field(F, kInf, kInf, RadialWeight::constant()).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mod_norm_field(F, 1, 1, RadialWeight::constant()).value == doctest::Approx(2.0).epsilon(1e-8));
  // inner L^1 in x gives sqrt(2) e^{-pi xi^2/2}; outer sup over xi
  CHECK(mod_norm_field(F, 1, kInf, RadialWeight::constant()).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("resolution failures") {
  const HermiteBasis basis(1, 30, grid());
  const GridFunction f = basis.sample(MultiIndex(30));
  CHECK_THROWS_AS(mod_norm_grid(f, gaussian_window(grid()), 2, 2, RadialWeight::constant(), PhaseGrid{2.0, 1.0 / 16.0}),
                  ResolutionError);
  CHECK_THROWS_AS(stft(f, gaussian_window(grid()), PhaseGrid{8.0, 0.1}), std::invalid_argument);
}
