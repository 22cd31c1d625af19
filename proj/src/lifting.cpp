#include "tfloc/lifting.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "tfloc/gamma_engine.hpp"
#include "tfloc/hermite.hpp"

namespace tfloc {

IsoReport iso_condition(const RadialWeight& theta, int N) {
  if (theta.dim() != 1) throw std::invalid_argument("iso_condition is one-dimensional");
  if (N < 1) throw std::invalid_argument("N must be positive");
  IsoReport rep;
  rep.weight_id = theta.id();
  rep.N = N;
  rep.rho.resize(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    const double t1 = tau(theta, MultiIndex(n), 1.0).value;
    const double t2 = tau(theta, MultiIndex(n), 2.0).value;
    rep.rho[n] = t1 * t1 / t2;
  }
  for (int cut : {N / 2, N}) {
    const auto end = rep.rho.begin() + cut + 1;
    rep.refinement.push_back({cut, *std::max_element(rep.rho.begin(), end), *std::min_element(rep.rho.begin(), end)});
  }
  rep.sup = rep.refinement.back().sup;
  rep.inf = rep.refinement.back().inf;
  rep.ratio = rep.sup / rep.inf;
  return rep;
}

void require_grs(const RadialWeight& m) {
  if (m.grs_failing_by_construction())
    throw GrsRefusal("weight " + m.id() + " has an exponential envelope, which violates the GRS condition");
  if (!m.has_envelope()) throw GrsRefusal("weight " + m.id() + " declares no envelope; GRS condition unverifiable");
  const RadialWeight v = m.envelope();
  std::vector<double> z(static_cast<std::size_t>(2 * m.dim()), 0.0);
  z[0] = 1.0;
  if (!grs_diagnostic(v, z, 10000).pass)
    throw GrsRefusal("envelope of " + m.id() + " fails the GRS diagnostic");
}

std::vector<HermiteCoeffs> lifting_test_set(const LiftConfig& cfg) {
  if (cfg.hermite_tests > cfg.N + 1 || cfg.random_degree > cfg.N)
    throw std::invalid_argument("test set exceeds the Hermite truncation");
  std::vector<HermiteCoeffs> out;
  for (int n = 0; n < cfg.hermite_tests; ++n) out.push_back(HermiteCoeffs::unit(MultiIndex(n), cfg.N));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int r = 0; r < cfg.random_tests; ++r) {
    HermiteCoeffs c(1, cfg.N);
    for (int n = 0; n <= cfg.random_degree; ++n) {
      const double re = nd(rng), im = nd(rng);
      c.c[n] = cplx(re, im);
    }
    c.c /= c.c.norm();
    out.push_back(c);
  }
  return out;
}

LiftStats lifting_ratio(const RadialWeight& m, const RadialWeight& mu, const LiftConfig& cfg) {
  if (m.dim() != 1 || mu.dim() != 1) throw std::invalid_argument("lifting experiments are one-dimensional");
  if (!(cfg.p >= 1.0) || !(cfg.q >= 1.0)) throw std::invalid_argument("p and q must lie in [1, inf]");
  require_grs(m);
  const DenseOperator A = localization_matrix(cfg.window, m, cfg.N);
  Eigen::VectorXcd h0 = Eigen::VectorXcd::Zero(1);
  h0[0] = 1.0;
  const HermitePhaseTable table(cfg.N, h0, PhaseGrid{cfg.phase_extent, cfg.phase_spacing});
  const RadialWeight target = RadialWeight::custom(
      1, [mu, m](std::span<const double> r) { return mu.log_profile(r) - m.log_profile(r); }, std::nullopt,
      mu.id() + "/" + m.id());
  LiftStats st;
  for (const HermiteCoeffs& f : lifting_test_set(cfg)) {
    const double num = mod_norm_field(table.field(A.apply(f)), cfg.p, cfg.q, target).value;
    const double den = mod_norm_field(table.field(f), cfg.p, cfg.q, mu).value;
    st.ratios.push_back(num / den);
  }
  st.min = *std::min_element(st.ratios.begin(), st.ratios.end());
  st.max = *std::max_element(st.ratios.begin(), st.ratios.end());
  st.spread = st.max / st.min;
  return st;
}

HilbertPairReport hilbert_iso_pair_check(const Window& g, const RadialWeight& m, int N) {
  require_grs(m);
  const DenseOperator A = localization_matrix(g, m, N);
  Eigen::VectorXd dth(N + 1), dinv(N + 1);
  for (int n = 0; n <= N; ++n) {
    dth[n] = tau(m, MultiIndex(n), 1.0).value;    // tau_n(theta^2)
    dinv[n] = tau(m, MultiIndex(n), -1.0).value;  // tau_n(theta^{-2})
  }
  const Eigen::VectorXd s = dth.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd Ms = s.cast<cplx>().asDiagonal() * A.mat * s.cast<cplx>().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> form(0.5 * (Ms + Ms.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::MatrixXcd Q = Ms.adjoint() * dinv.cast<cplx>().asDiagonal() * Ms;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> map(0.5 * (Q + Q.adjoint()), Eigen::EigenvaluesOnly);
  return {form.eigenvalues().minCoeff(), form.eigenvalues().maxCoeff(),
          std::sqrt(std::max(0.0, map.eigenvalues().minCoeff())), std::sqrt(map.eigenvalues().maxCoeff())};
}

namespace {

SolveResult gmres_right(const GaborSystem& sys, const Eigen::VectorXd& wm, const Eigen::VectorXd& winv,
                        const GridFunction& b, double tol, int max_iter) {
  const GridSpec& grid = b.grid;
  auto Gm = [&](const Eigen::VectorXcd& x) { return gabor_multiplier_apply(sys, wm, GridFunction(grid, x)).samples; };
  auto Gi = [&](const Eigen::VectorXcd& x) { return gabor_multiplier_apply(sys, winv, GridFunction(grid, x)).samples; };
  SolveResult res{GridFunction(grid), {}};
  res.trace.preconditioner = "G_1/m";
  const double beta = b.samples.norm();
  if (beta == 0.0) return res;
  std::vector<Eigen::VectorXcd> V{b.samples / beta};
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(max_iter + 1, max_iter);
  std::vector<cplx> cs, sn;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(max_iter + 1);
  g[0] = beta;
  int k = 0;
  for (; k < max_iter; ++k) {
    Eigen::VectorXcd w = Gm(Gi(V[k]));
    for (int i = 0; i <= k; ++i) {
      H(i, k) = V[i].dot(w);
      w -= H(i, k) * V[i];
    }
    H(k + 1, k) = w.norm();
    for (int i = 0; i < k; ++i) {
      const cplx t = std::conj(cs[i]) * H(i, k) + std::conj(sn[i]) * H(i + 1, k);
      H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
      H(i, k) = t;
    }
    const double den = std::hypot(std::abs(H(k, k)), std::abs(H(k + 1, k)));
    const cplx c = den == 0.0 ? cplx(1.0) : H(k, k) / den;
    const cplx s = den == 0.0 ? cplx(0.0) : H(k + 1, k) / den;
    cs.push_back(c);
    sn.push_back(s);
    H(k, k) = den;
    H(k + 1, k) = 0.0;
    g[k + 1] = -s * g[k];
    g[k] = std::conj(c) * g[k];
    const double rel = std::abs(g[k + 1]) / beta;
    res.trace.residuals.push_back(rel);
    res.trace.iterations = k + 1;
    if (rel <= tol || H.col(k).norm() == 0.0) {
      ++k;
      break;
    }
    V.push_back(w / w.norm());
  }
  const int m = std::min(k, max_iter);
  const Eigen::VectorXcd y =
      H.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(g.head(m));
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(b.samples.size());
  for (int i = 0; i < m; ++i) x += y[i] * V[i];
  res.f.samples = Gi(x);
  res.trace.final_residual = (Gm(res.f.samples) - b.samples).norm() / beta;
  if (res.trace.residuals.back() > tol)
    throw ConvergenceError("GMRES did not converge; residual " + std::to_string(res.trace.residuals.back()));
  return res;
}

SolveResult cg_normal(const GaborSystem& sys, const Eigen::VectorXd& wm, const GridFunction& b, double tol,
                      int max_iter) {
  const GridSpec& grid = b.grid;
  auto Gm = [&](const Eigen::VectorXcd& x) { return gabor_multiplier_apply(sys, wm, GridFunction(grid, x)).samples; };
  SolveResult res{GridFunction(grid), {}};
  res.trace.preconditioner = "none";
  const double beta = b.samples.norm();
  if (beta == 0.0) return res;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(b.samples.size());
  Eigen::VectorXcd r = b.samples;
  Eigen::VectorXcd z = Gm(r);
  Eigen::VectorXcd p = z;
  double zz = z.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd w = Gm(p);
    const double alpha = zz / w.squaredNorm();
    x += alpha * p;
    r -= alpha * w;
    const double rel = r.norm() / beta;
    res.trace.residuals.push_back(rel);
    res.trace.iterations = it;
    if (rel <= tol) break;
    z = Gm(r);
    const double zz_new = z.squaredNorm();
    p = z + (zz_new / zz) * p;
    zz = zz_new;
  }
  res.f.samples = x;
  res.trace.final_residual = (Gm(x) - b.samples).norm() / beta;
  if (res.trace.residuals.back() > tol)
    throw ConvergenceError("normal-equation CG did not converge; residual " + std::to_string(res.trace.residuals.back()));
  return res;
}

}  // namespace

SolveResult precond_solve(const GaborSystem& system, const RadialWeight& m, const GridFunction& b, double tol,
                          Preconditioner pre, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Eigen::VectorXd wm = system.lattice_values(m);
  if (pre == Preconditioner::none) return cg_normal(system, wm, b, tol, max_iter);
  return gmres_right(system, wm, wm.cwiseInverse(), b, tol, max_iter);
}

SpectrumBracket precond_spectrum(const GaborSystem& system, const RadialWeight& m, int K) {
  const GridSpec& grid = system.window().grid;
  const HermiteBasis basis(1, K, grid);
  const Eigen::VectorXd wm = system.lattice_values(m);
  const Eigen::VectorXd wi = wm.cwiseInverse();
  const auto M = static_cast<Eigen::Index>(grid.points_per_axis());
  Eigen::MatrixXcd Hs(M, K + 1), A(M, K + 1), B(M, K + 1);
  for (int n = 0; n <= K; ++n) {
    const GridFunction h = basis.sample(MultiIndex(n));
    Hs.col(n) = h.samples;
    A.col(n) = gabor_multiplier_apply(system, wm, h).samples;
    B.col(n) = gabor_multiplier_apply(system, wi, h).samples;
  }
  const double dx = grid.spacing;
  Eigen::MatrixXcd Gm = Hs.adjoint() * A * dx, Gi = Hs.adjoint() * B * dx, N2 = A.adjoint() * A * dx;
  Gm = 0.5 * (Gm + Gm.adjoint()).eval();
  Gi = 0.5 * (Gi + Gi.adjoint()).eval();
  N2 = 0.5 * (N2 + N2.adjoint()).eval();
  const Eigen::LLT<Eigen::MatrixXcd> llt(Gi);
  const Eigen::MatrixXcd L = llt.matrixL();
  const Eigen::MatrixXcd P = L.adjoint() * Gm * L;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ep(0.5 * (P + P.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> en(N2, Eigen::EigenvaluesOnly);
  return {ep.eigenvalues().minCoeff(), ep.eigenvalues().maxCoeff(),
          en.eigenvalues().maxCoeff() / en.eigenvalues().minCoeff()};
}

}  // namespace tfloc
