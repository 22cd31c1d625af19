#include "tfloc/gabor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "tfloc/hermite.hpp"

namespace tfloc {

namespace {

long as_integer(double r, const char* what) {
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
    throw std::invalid_argument(std::string("grid mismatch: ") + what + " is not an integer");
  return static_cast<long>(k);
}

}  // namespace

GaborSystem::GaborSystem(const GridFunction& window, double a, double b, const GaborOptions& opt)
    : g_(window), dual_(window), a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("lattice parameters must be positive");
  if (window.grid.dim != 1) throw std::invalid_argument("Gabor systems are one-dimensional");
  if (a * b >= 1.0 - 1e-12)
    throw NotAFrameError("not a frame: lattice density ab = " + std::to_string(a * b) + " >= 1");
  const double nrm = g_.norm();
  if (nrm == 0.0) throw std::invalid_argument("window is identically zero");
  g_ *= 1.0 / nrm;
  const GridSpec& sg = g_.grid;
  L_ = opt.half_width > 0.0 ? opt.half_width : sg.half_width;
  step_ = as_integer(a / sg.spacing, "a / signal spacing");
  // lattice indices with ka, lb in [-L, L)
  k0_ = static_cast<long>(std::ceil(-L_ / a - 1e-12));
  const long k1 = static_cast<long>(std::ceil(L_ / a - 1e-12));
  l0_ = static_cast<long>(std::ceil(-L_ / b - 1e-12));
  const long l1 = static_cast<long>(std::ceil(L_ / b - 1e-12));
  nk_ = k1 - k0_;
  nl_ = l1 - l0_;
  const auto M = static_cast<Eigen::Index>(sg.points_per_axis());
  E_.resize(nl_, M);
  for (long l = 0; l < nl_; ++l)
    for (Eigen::Index j = 0; j < M; ++j)
      E_(l, j) = std::polar(1.0, 2.0 * kPi * (l0_ + l) * b_ * sg.coord(static_cast<std::size_t>(j)));

  bounds_ = compute_bounds(opt.bound_subspace);
  if (!(bounds_.A > 0.0) || bounds_.A / bounds_.B < 1e-10)
    throw NotAFrameError("not a frame: lower frame bound collapses (A/B = " + std::to_string(bounds_.A / bounds_.B) + ")");

  const CgResult cg = conjugate_gradient([this](const GridFunction& f) { return frame_operator(f); }, g_,
                                         opt.dual_tol, 2000);
  dual_ = cg.x;
}

std::pair<double, double> GaborSystem::point(std::size_t idx) const {
  const long k = static_cast<long>(idx) / nl_, l = static_cast<long>(idx) % nl_;
  return {(k0_ + k) * a_, (l0_ + l) * b_};
}

Eigen::VectorXcd GaborSystem::coeffs(const GridFunction& f) const {
  if (!f.grid.same_as(g_.grid)) throw std::invalid_argument("grid mismatch between signal and Gabor system");
  const long M = static_cast<long>(g_.grid.points_per_axis());
  Eigen::VectorXcd out(nk_ * nl_);
  Eigen::VectorXcd u(M);
  for (long k = 0; k < nk_; ++k) {
    const long shift = (k0_ + k) * step_;
    for (long j = 0; j < M; ++j) {
      const long gi = j - shift;
      u[j] = (gi >= 0 && gi < M) ? f.samples[j] * std::conj(g_.samples[gi]) : cplx(0.0);
    }
    out.segment(k * nl_, nl_) = (E_.conjugate() * u) * g_.grid.spacing;
  }
  return out;
}

GridFunction GaborSystem::synthesize(const Eigen::VectorXcd& c, const GridFunction& w) const {
  if (c.size() != nk_ * nl_) throw std::invalid_argument("coefficient count does not match the lattice");
  if (!w.grid.same_as(g_.grid)) throw std::invalid_argument("grid mismatch between window and Gabor system");
  const long M = static_cast<long>(g_.grid.points_per_axis());
  GridFunction out(g_.grid);
  for (long k = 0; k < nk_; ++k) {
    const Eigen::VectorXcd s = E_.transpose() * c.segment(k * nl_, nl_);
    const long shift = (k0_ + k) * step_;
    for (long j = 0; j < M; ++j) {
      const long gi = j - shift;
      if (gi >= 0 && gi < M) out.samples[j] += s[j] * w.samples[gi];
    }
  }
  return out;
}

Eigen::VectorXd GaborSystem::lattice_values(const std::function<double(double, double)>& m) const {
  Eigen::VectorXd v(nk_ * nl_);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto [x, xi] = point(i);
    v[static_cast<Eigen::Index>(i)] = m(x, xi);
  }
  return v;
}

Eigen::VectorXd GaborSystem::lattice_values(const RadialWeight& m) const {
  return lattice_values([&m](double x, double xi) { return m(x, xi); });
}

FrameBounds GaborSystem::compute_bounds(int subspace) const {
  const GridSpec& sg = g_.grid;
  const auto M = static_cast<Eigen::Index>(sg.points_per_axis());
  Eigen::MatrixXcd S;
  if (M <= 256) {
    // full frame operator on the grid, normalized to the discrete inner product
    S.resize(M, M);
    for (Eigen::Index j = 0; j < M; ++j) {
      GridFunction e(sg);
      e.samples[j] = 1.0;
      S.col(j) = frame_operator(e).samples;
    }
  } else {
    const HermiteBasis basis(1, subspace, sg);
    const int K = subspace + 1;
    Eigen::MatrixXcd H(M, K), SH(M, K);
    for (int n = 0; n < K; ++n) {
      H.col(n) = basis.sample(MultiIndex(n)).samples;
      SH.col(n) = frame_operator(basis.sample(MultiIndex(n))).samples;
    }
    const Eigen::MatrixXcd G = H.adjoint() * H * sg.spacing;
    const Eigen::MatrixXcd C = H.adjoint() * SH * sg.spacing;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()), G);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (S + S.adjoint()), Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

ModNormResult mod_norm_frame(const GridFunction& f, double p, const RadialWeight& m, const GaborSystem& system) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must lie in [1, inf]");
  const Eigen::VectorXcd c = system.coeffs(f);
  const Eigen::VectorXd w = system.lattice_values(m);
  Eigen::VectorXd a = c.cwiseAbs().cwiseProduct(w);
  ModNormResult r;
  r.method = NormMethod::frame;
  r.p = r.q = p;
  r.weight_id = m.id();
  r.truncation = static_cast<int>(system.size());
  const double mx = a.size() ? a.maxCoeff() : 0.0;
  if (std::isinf(p) || mx == 0.0) {
    r.value = mx;
    return r;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::pow(a[i] / mx, p);
  r.value = mx * std::pow(s, 1.0 / p);
  return r;
}

CgResult conjugate_gradient(const std::function<GridFunction(const GridFunction&)>& op, const GridFunction& b,
                            double tol, int max_iter) {
  CgResult res{GridFunction(b.grid), 0, 1.0};
  const double bn = b.samples.norm();
  if (bn == 0.0) {
    res.residual = 0.0;
    return res;
  }
  Eigen::VectorXcd r = b.samples, p = r;
  double rr = r.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    const GridFunction Ap = op(GridFunction(b.grid, p));
    const cplx pAp = p.dot(Ap.samples);
    if (pAp.real() <= 0.0) throw ConvergenceError("conjugate gradients: operator not positive definite");
    const double alpha = rr / pAp.real();
    res.x.samples += alpha * p;
    r -= alpha * Ap.samples;
    const double rr_new = r.squaredNorm();
    res.iterations = it;
    res.residual = std::sqrt(rr_new) / bn;
    if (res.residual <= tol) return res;
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  throw ConvergenceError("conjugate gradients did not reach tolerance; residual " + std::to_string(res.residual));
}

}  // namespace tfloc
