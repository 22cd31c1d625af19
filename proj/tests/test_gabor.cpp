#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tfloc/gabor.hpp"
#include "tfloc/hermite.hpp"
#include "tfloc/operators.hpp"

using namespace tfloc;

namespace {
const GridSpec& grid() {
  static const GridSpec g = GridSpec::phase_default(64);
  return g;
}
}  // namespace

TEST_CASE("Gaussian frame at a = b = 1/2") {
  const GaborSystem sys(gaussian_window(grid()), 0.5, 0.5);
  const FrameBounds fb = sys.bounds();
  CHECK(fb.A > 3.9);
  CHECK(fb.B < 4.1);
  CHECK(fb.A <= fb.B);
  const HermiteBasis basis(1, 19, grid());
  for (int n : {0, 7, 19}) {
    const GridFunction f = basis.sample(MultiIndex(n));
    CHECK((sys.reconstruct(f) - f).norm() < 1e-8);
    const double energy = sys.coeffs(f).squaredNorm();
    CHECK(energy >= fb.A * (1 - 1e-9));
    CHECK(energy <= fb.B * (1 + 1e-9));
  }
}

TEST_CASE("frame bounds agree with the Walnut symbol") {
  // 1/b = 4a: S acts on each coset x + Z/b as convolution with (1/b) G_n(x), so the bounds are the
  // extremes of (1/b) sum_n G_n(x) e^{2 pi i n t} over x in [0, a), t in [0, 1).
  const double a = 0.5, b = 0.5;
  auto g = [](double x) { return std::pow(2.0, 0.25) * std::exp(-kPi * x * x); };
  double lo = 1e300, hi = 0.0;
  for (int ix = 0; ix < 100; ++ix) {
    const double x = a * ix / 100.0;
    std::vector<double> G;
    for (int n = -6; n <= 6; ++n) {
      double s = 0.0;
      for (int k = -60; k <= 60; ++k) s += g(x - n / b - k * a) * g(x - k * a);
      G.push_back(s / b);
    }
    for (int it = 0; it <= 100; ++it) {
      double v = 0.0;
      for (int n = -6; n <= 6; ++n) v += G[n + 6] * std::cos(2.0 * kPi * n * it / 200.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const GaborSystem sys(gaussian_window(grid()), a, b);
  // the estimate lives on a Hermite span, so it sits inside the exact interval
  CHECK(sys.bounds().A >= lo * (1 - 1e-9));
  CHECK(sys.bounds().B <= hi * (1 + 1e-9));
  CHECK(sys.bounds().A == doctest::Approx(lo).epsilon(5e-3));
  CHECK(sys.bounds().B == doctest::Approx(hi).epsilon(5e-3));
}

TEST_CASE("density obstruction") {
  CHECK_THROWS_AS(GaborSystem(gaussian_window(grid()), 1.1, 1.1), NotAFrameError);
  CHECK_THROWS_AS(GaborSystem(gaussian_window(grid()), 1.0, 1.0), NotAFrameError);
}

TEST_CASE("unit multiplier is the frame operator") {
  const GaborSystem sys(gaussian_window(grid()), 0.5, 0.5);
  const GridFunction f = HermiteBasis(1, 3, grid()).sample(MultiIndex(3));
  CHECK((gabor_multiplier_apply(sys, RadialWeight::constant(), f) - sys.frame_operator(f)).norm() < 1e-14);
}

TEST_CASE("frame norm of a weighted coefficient sequence") {
  const GaborSystem sys(gaussian_window(grid()), 0.5, 0.5);
  const GridFunction g = gaussian_window(grid());
  const ModNormResult r = mod_norm_frame(g, 2.0, RadialWeight::constant(), sys);
  CHECK(r.value == doctest::Approx(sys.coeffs(g).norm()).epsilon(1e-12));
  CHECK(r.method == NormMethod::frame);
}

TEST_CASE("conjugate gradients") {
  const GaborSystem sys(gaussian_window(grid()), 0.5, 0.5);
  const GridFunction f = HermiteBasis(1, 4, grid()).sample(MultiIndex(4));
  const GridFunction b = sys.frame_operator(f);
  const CgResult r = conjugate_gradient([&](const GridFunction& x) { return sys.frame_operator(x); }, b, 1e-12, 200);
  CHECK((r.x - f).norm() < 1e-9);
}
