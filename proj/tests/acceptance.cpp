// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tfloc/bargmann.hpp"
#include "tfloc/cli.hpp"
#include "tfloc/gabor.hpp"
#include "tfloc/gamma_engine.hpp"
#include "tfloc/hermite.hpp"
#include "tfloc/lifting.hpp"
#include "tfloc/operators.hpp"
#include "tfloc/phase_space.hpp"
#include "tfloc/weights.hpp"

using namespace tfloc;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "" : "[violated] ") + note);
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const std::vector<RadialWeight>& scan_weights() {
  static const std::vector<RadialWeight> w = {RadialWeight::polynomial(2.0), RadialWeight::subexponential(1.0, 0.5),
                                              RadialWeight::subexponential(1.0, 0.75), RadialWeight::loglin(1.0)};
  return w;
}

Outcome c1_orthonormality() {
  Outcome o;
  const HermiteBasis b = HermiteBasis::with_defaults(1, 64);
  o.expect(b.gram_deviation() < 1e-10, "max |<h_m,h_n> - delta| = " + fmt("%.2e", b.gram_deviation()) + " (m,n <= 64)");
  return o;
}

Outcome c2_stft_closed_form() {
  // relative to max(|exact|, 1e-9); the closed form vanishes at z = 0 for n >= 1
  Outcome o;
  const GridSpec grid = GridSpec::phase_default(64);
  const HermiteBasis basis(1, 16, grid);
  const GridFunction h = gaussian_window(grid);
  const PhaseGrid pg;
  double worst = 0.0, worst_fine_floor = 0.0, abs_err = 0.0;
  for (int n = 0; n <= 16; ++n) {
    const PhaseField F = stft(basis.sample(MultiIndex(n)), h, pg);
    for (std::size_t i = 0; i < pg.points_per_axis(); ++i)
      for (std::size_t j = 0; j < pg.points_per_axis(); ++j) {
        const cplx z(pg.coord(i), pg.coord(j));
        if (std::abs(z) > 3.0) continue;
        const cplx ex = stft_hermite_analytic(n, z);
        const cplx got = F.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double d = std::abs(std::abs(got) - std::abs(ex));
        worst = std::max(worst, d / std::max(std::abs(ex), 1e-9));
        worst_fine_floor = std::max(worst_fine_floor, d / std::max(std::abs(ex), 1e-10));
        abs_err = std::max(abs_err, std::abs(got - ex));
      }
  }
  o.expect(worst < 1e-6, "max relative error " + fmt("%.2e", worst) + " over |z| <= 3, n <= 16 (floor 1e-9)");
  o.notes.push_back("reported: " + fmt("%.2e", worst_fine_floor) + " with floor 1e-10; max complex abs error " +
                    fmt("%.2e", abs_err));
  return o;
}

Outcome c3_tau() {
  Outcome o;
  const RadialWeight q = RadialWeight::quadratic(kPi), one = RadialWeight::constant();
  double wq = 0.0, w1 = 0.0;
  for (int n = 0; n <= 512; ++n) {
    wq = std::max(wq, std::abs(tau_value(q, n, 1.0) - (n + 2.0)) / (n + 2.0));
    w1 = std::max(w1, std::abs(tau(one, MultiIndex(n), 1.0).value - 1.0));
  }
  o.expect(wq < 1e-10, "1 + pi r^2: max relative error vs n+2 = " + fmt("%.2e", wq) + " (n <= 512)");
  o.expect(w1 < 1e-11, "constant weight: max |tau - 1| = " + fmt("%.2e", w1));
  return o;
}

std::map<std::string, ProductScan> g_scans;  // shared by criteria 4 and 5

const ProductScan& scan(const RadialWeight& w, double s, double t) {
  const std::string key = w.id() + "|" + std::to_string(s) + "|" + std::to_string(t);
  auto it = g_scans.find(key);
  if (it == g_scans.end()) it = g_scans.emplace(key, product_inequality_scan(w, s, t, 500)).first;
  return it->second;
}

double tail_change(const std::vector<double>& run) { return std::abs(run[500] / run[400] - 1.0); }

Outcome c4_pair_products() {
  Outcome o;
  for (const auto& w : scan_weights()) {
    const ProductScan& sc = scan(w, 1.0, -1.0);
    const double mn = *std::min_element(sc.gamma.begin(), sc.gamma.end());
    const double ch = tail_change(sc.running_sup);
    o.expect(mn >= 1.0 - 1e-9 && ch < 1e-3, w.id() + ": min product " + fmt("%.6f", mn) + ", sup " +
                                                fmt("%.6f", sc.sup) + ", sup change on [400,500] " + fmt("%.2e", ch));
  }
  return o;
}

Outcome c5_triple_products() {
  Outcome o;
  const std::vector<std::pair<double, double>> pairs = {{1, -1}, {2, -1}, {1, 1}};
  for (const auto& w : scan_weights())
    for (const auto& [s, t] : pairs) {
      const ProductScan& sc = scan(w, s, t);
      const double sup_ch = tail_change(sc.running_sup);
      const double inf_ch = tail_change(sc.running_inf);
      std::ostringstream note;
      note << w.id() << " (s,t)=(" << s << "," << t << "): gamma in [" << fmt("%.6f", sc.inf) << ", "
           << fmt("%.6f", sc.sup) << "], sup change " << fmt("%.2e", sup_ch) << ", inf drift " << fmt("%.2e", inf_ch)
           << " (reported)";
      o.expect(sc.inf >= 1.0 - 1e-9 && sup_ch < 1e-3, note.str());
    }
  return o;
}

Outcome c6_diagonality() {
  Outcome o;
  const RadialWeight m = RadialWeight::subexponential(1.0, 0.5);
  const DenseOperator A = localization_matrix(Window::gaussian(), m, 48);
  const TauSpectrum sp = tau_spectrum(m, 1.0, 48);
  double off = 0.0, mind = std::numeric_limits<double>::infinity(), err = 0.0;
  for (int i = 0; i <= 48; ++i)
    for (int j = 0; j <= 48; ++j) {
      if (i != j) {
        off = std::max(off, std::abs(A.mat(i, j)));
      } else {
        mind = std::min(mind, A.mat(i, i).real());
        err = std::max(err, std::abs(A.mat(i, i).real() - sp.values[i]) / sp.values[i]);
      }
    }
  o.expect(off / mind < 1e-6, "max off-diagonal / min diagonal = " + fmt("%.2e", off / mind));
  o.expect(err < 1e-6, "diagonal vs tau relative error = " + fmt("%.2e", err));
  return o;
}

Outcome c7_iso() {
  Outcome o;
  std::vector<RadialWeight> ws = {RadialWeight::quadratic(kPi)};
  for (const auto& w : scan_weights()) ws.push_back(w);
  for (const auto& w : ws) {
    const IsoReport r = iso_condition(w, 300);
    const double ds = std::abs(r.refinement[1].sup / r.refinement[0].sup - 1.0);
    const double di = std::abs(r.refinement[1].inf / r.refinement[0].inf - 1.0);
    o.expect(r.inf > 0.0 && r.sup <= 1.0 && ds < 1e-2 && di < 1e-2,
             w.id() + ": rho in [" + fmt("%.6f", r.inf) + ", " + fmt("%.6f", r.sup) + "], sup moves " +
                 fmt("%.2e", ds) + ", inf moves " + fmt("%.2e", di) + " (150 -> 300)");
  }
  return o;
}

Outcome c8_frame() {
  Outcome o;
  const GridSpec grid = GridSpec::phase_default(64);
  const GaborSystem sys(gaussian_window(grid), 0.5, 0.5);
  const HermiteBasis basis(1, 19, grid);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const GridFunction f = basis.sample(MultiIndex(n));
    worst = std::max(worst, (sys.reconstruct(f) - f).norm() / f.norm());
  }
  o.expect(worst < 1e-8, "a=b=1/2: bounds [" + fmt("%.4f", sys.bounds().A) + ", " + fmt("%.4f", sys.bounds().B) +
                             "], max reconstruction residual " + fmt("%.2e", worst));
  std::string msg = "no exception";
  bool raised = false;
  try {
    GaborSystem bad(gaussian_window(grid), 1.1, 1.1);
  } catch (const NotAFrameError& e) {
    raised = true;
    msg = e.what();
  }
  o.expect(raised, "a=b=1.1: " + msg);
  return o;
}

Outcome c9_solver() {
  Outcome o;
  const RadialWeight m = RadialWeight::polynomial(1.0);
  const GridSpec grid = GridSpec::phase_default(64);
  const GaborSystem sys(gaussian_window(grid), 0.5, 0.5);
  const GridFunction h2 = HermiteBasis(1, 2, grid).sample(MultiIndex(2));
  const GridFunction b = gabor_multiplier_apply(sys, m, h2);
  const SolveResult pre = precond_solve(sys, m, b, 1e-8, Preconditioner::inverse_weight);
  const SolveResult nrm = precond_solve(sys, m, b, 1e-8, Preconditioner::none);
  o.expect(pre.trace.final_residual <= 1e-8 && nrm.trace.final_residual <= 1e-8 &&
               pre.trace.iterations < nrm.trace.iterations,
           "iterations to 1e-8: preconditioned " + std::to_string(pre.trace.iterations) + ", normal equations " +
               std::to_string(nrm.trace.iterations));
  const SolveResult tight = precond_solve(sys, m, b, 1e-10, Preconditioner::inverse_weight);
  const double err = (tight.f - h2).norm() / h2.norm();
  const double err8 = (pre.f - h2).norm() / h2.norm();
  o.expect(err < 1e-7, "recovery of h_2: relative error " + fmt("%.2e", err) + " at tol 1e-10 (" + fmt("%.2e", err8) +
                           " at tol 1e-8)");
  return o;
}

Outcome c10_lifting() {
  Outcome o;
  for (const auto& m : {RadialWeight::polynomial(1.0), RadialWeight::subexponential(1.0, 0.5)}) {
    LiftConfig coarse;
    coarse.N = 32;
    coarse.phase_spacing = 1.0 / 8.0;
    LiftConfig fine;
    fine.N = 64;
    fine.phase_spacing = 1.0 / 16.0;
    const LiftStats a = lifting_ratio(m, RadialWeight::constant(), coarse);
    const LiftStats b = lifting_ratio(m, RadialWeight::constant(), fine);
    const double ch = std::abs(b.spread / a.spread - 1.0);
    o.expect(a.ratios.size() == 30 && ch < 0.05,
             m.id() + ": " + std::to_string(a.ratios.size()) + " test functions, spread " + fmt("%.6f", a.spread) +
                 " -> " + fmt("%.6f", b.spread) + " (change " + fmt("%.2e", ch) + ")");
  }
  return o;
}

Outcome c11_intertwining() {
  Outcome o;
  HermiteCoeffs f(1, 1);
  f.c << 1.0, 1.0;
  const PolarRule rule = polar_rule();
  const std::vector<cplx> pts = disc_points(3.0, 0.25);
  for (const auto& m : {RadialWeight::constant(), RadialWeight::polynomial(2.0), RadialWeight::subexponential(1.0, 0.5)}) {
    const double r = intertwine_check(m, f, pts, rule);
    o.expect(r < 1e-6, m.id() + ": residual " + fmt("%.2e", r) + " on " + std::to_string(pts.size()) + " points");
  }
  return o;
}

Outcome c12_kernel() {
  Outcome o;
  const Eigen::VectorXcd h0 = Eigen::VectorXcd::Ones(1);
  const TFKernel K0 = tf_kernel(DenseOperator::identity(64), h0);
  for (const auto& m : {RadialWeight::polynomial(1.0), RadialWeight::polynomial(2.0)}) {
    const DenseOperator T = compose(canonical_diagonal(m.pow(-1.0), 64).to_dense(), canonical_diagonal(m, 64).to_dense());
    const TFKernel K = tf_kernel(T, h0);
    const RadialWeight v = m.envelope();
    const Domination dom = dominating_convolution(K, K0, v.pow(0.5));
    const EnvelopeCheck ec = envelope_check(K, v);
    o.expect(dom.pass && ec.pass, m.id() + ": " + std::to_string(K.envelope.size()) + " offsets, max H/D " +
                                      fmt("%.3f", dom.worst_ratio) + ", tail sums " +
                                      (ec.monotone ? "decreasing" : "not decreasing") + " (last/first " +
                                      fmt("%.2e", ec.tail_ratio) + ")");
  }
  return o;
}

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

Outcome c13_determinism() {
  Outcome o;
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "tfloc_acceptance_selftest";
  std::filesystem::remove_all(dir);
  const std::vector<std::string> args = {"selftest", "--out", dir.string()};
  std::ostringstream out1, out2, err;
  const int rc1 = cli::run(args, out1, err);
  const auto first = snapshot(dir);
  const int rc2 = cli::run(args, out2, err);
  const auto second = snapshot(dir);
  o.expect(rc1 == 0 && rc2 == 0, "exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2));
  o.expect(!first.empty() && first == second && out1.str() == out2.str(),
           std::to_string(first.size()) + " report files byte-identical across runs");
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"hermite orthonormality", c1_orthonormality},
      {"sampled STFT vs closed form", c2_stft_closed_form},
      {"weighted gamma correctness", c3_tau},
      {"tau_s tau_-s product scan", c4_pair_products},
      {"three-factor product scan", c5_triple_products},
      {"localization diagonality", c6_diagonality},
      {"rho-report refinement", c7_iso},
      {"Gabor frame and reconstruction", c8_frame},
      {"preconditioned solver", c9_solver},
      {"lifting-ratio stability", c10_lifting},
      {"Bargmann intertwining", c11_intertwining},
      {"kernel domination", c12_kernel},
      {"selftest determinism", c13_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " " << criteria[i].first << "\n";
    for (const auto& n : o.notes) std::cout << "       " << n << "\n";
    std::cout.flush();
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
