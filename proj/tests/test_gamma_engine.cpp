#include <doctest.h>

#include <cmath>

#include "tfloc/gamma_engine.hpp"

using namespace tfloc;

namespace {
void oracle(const RadialWeight& w, int n, double s, double expected) {
  CAPTURE(w.id());
  CAPTURE(n);
  CAPTURE(s);
  CHECK(tau_value(w, n, s) == doctest::Approx(expected).epsilon(1e-11));
}
}  // namespace

// Reference values computed independently with 30-digit arithmetic.
TEST_CASE("frozen reference values") {
  oracle(RadialWeight::quadratic(kPi), 0, -1, 0.596347362323194074341);
  const RadialWeight se = RadialWeight::subexponential(1.0, 0.5);
  oracle(se, 0, 1, 2.01163558294636518965);
  oracle(se, 0, -1, 0.515563543721332418332);
  oracle(se, 1, 1, 2.37219459421284396621);
  oracle(se, 1, -1, 0.432545442311419954429);
  oracle(se, 5, 1, 3.20396020292703964697);
  oracle(se, 5, -1, 0.316704190046707431964);
  oracle(se, 64, 1, 8.43057706143124650706);
  oracle(se, 64, -1, 0.119136513893958336344);
  oracle(se, 200, 1, 16.9138656741979578898);
  oracle(se, 200, -1, 0.0592703911768492563467);
  const RadialWeight se3 = RadialWeight::subexponential(1.0, 0.75);
  oracle(se3, 0, 1, 1.83411913085237358956);
  oracle(se3, 0, -1, 0.575801633143605300576);
  oracle(se3, 0, 2, 3.56453239090950321190);
  oracle(se3, 3, 1, 2.95609514888541002796);
  oracle(se3, 3, -1, 0.352646907513789448479);
  oracle(se3, 3, 2, 9.11544538821129387227);
  const RadialWeight ll = RadialWeight::loglin(1.0);
  oracle(ll, 0, 1, 1.54405873782447566412);
  oracle(ll, 0, -1, 0.671540259237381547264);
  oracle(ll, 10, 1, 3.39753285644888947789);
  oracle(ll, 10, -1, 0.299800348599139195969);
  const RadialWeight p1 = RadialWeight::polynomial(1.0);
  oracle(p1, 0, 1, 1.14102958808784132259);
  oracle(p1, 0, -1, 0.886115035751113830325);
  oracle(p1, 0, 2, 1.31830988618379067154);
  oracle(p1, 7, 1, 1.86848205432485409217);
  oracle(p1, 7, -1, 0.543692818138268796253);
  oracle(p1, 7, 2, 3.54647908947032537230);
  const RadialWeight ex = RadialWeight::exponential(1.0);
  oracle(ex, 0, 1, 1.70928808057212447223);
  oracle(ex, 0, -1, 0.626458635821003931762);
  const RadialWeight p2 = RadialWeight::polynomial(2.0);
  oracle(p2, 0, -1, 0.792873133462716224012);
  oracle(p2, 1, -1, 0.650708242274604286606);
  oracle(p2, 2, -1, 0.548666210014784540836);
  oracle(p2, 3, -1, 0.472635639644797160918);
}

TEST_CASE("closed forms") {
  for (int n : {0, 1, 10, 100, 512}) {
    CHECK(tau_value(RadialWeight::quadratic(kPi), n, 1.0) == doctest::Approx(n + 2.0).epsilon(1e-12));
    CHECK(tau_value(RadialWeight::polynomial(2.0), n, 1.0) == doctest::Approx(1.0 + (n + 1) / kPi).epsilon(1e-12));
    CHECK(tau_value(RadialWeight::constant(), n, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(tau_value(RadialWeight::subexponential(1.0, 0.5), 17, 0.0) == 1.0);
}

TEST_CASE("Gauss-Laguerre cross-check") {
  const RadialWeight w = RadialWeight::subexponential(1.0, 0.5);
  for (int n : {16, 32, 64})
    CHECK(tau_gauss_laguerre(w, n, 1.0) == doctest::Approx(tau_value(w, n, 1.0)).epsilon(1e-12));
}

TEST_CASE("product weights factorize") {
  const RadialWeight a = RadialWeight::polynomial(1.0), b = RadialWeight::subexponential(1.0, 0.5);
  const RadialWeight p = RadialWeight::product(a, b);
  const double v = tau(p, MultiIndex(3, 5), 1.0).value;
  CHECK(v == doctest::Approx(tau_value(a, 3, 1.0) * tau_value(b, 5, 1.0)).epsilon(1e-10));
  const TauSpectrum sp = tau_spectrum(p, -1.0, 4);
  CHECK(sp.values.size() == 25);
  CHECK(sp[MultiIndex(2, 4)] == doctest::Approx(tau_value(a, 2, -1.0) * tau_value(b, 4, -1.0)).epsilon(1e-10));
}

TEST_CASE("errors and scans") {
  CHECK_THROWS_AS(tau(RadialWeight::polynomial(1.0), MultiIndex(0), 9.0), std::invalid_argument);
  const ProductScan sc = product_inequality_scan(RadialWeight::loglin(1.0), 1.0, -1.0, 100);
  CHECK(sc.gamma.size() == 101);
  CHECK(sc.inf >= 1.0 - 1e-9);
  CHECK(sc.running_sup.back() == doctest::Approx(sc.sup));
  CHECK(vst_condition(RadialWeight::loglin(1.0), 1.0, -1.0, 100) == doctest::Approx(sc.sup / sc.inf));
  // Cauchy-Schwarz: tau_s tau_-s >= 1
  const TauSpectrum a = tau_spectrum(RadialWeight::polynomial(2.0), 1.0, 50), b = tau_spectrum(RadialWeight::polynomial(2.0), -1.0, 50);
  CHECK((a.values.array() * b.values.array()).minCoeff() >= 1.0);
}
