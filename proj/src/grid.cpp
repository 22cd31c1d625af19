#include "tfloc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfloc {

GridSpec::GridSpec(int d, double L, double delta) : dim(d), half_width(L), spacing(delta) {
  require_dimension(d);
  if (!(L > 0.0) || !(delta > 0.0) || !std::isfinite(L) || !std::isfinite(delta))
    throw std::invalid_argument("grid half-width and spacing must be positive and finite");
  const double count = 2.0 * L / delta;
  const double rounded = std::round(count);
  if (std::abs(count - rounded) > 1e-6 * std::max(1.0, count))
    throw std::invalid_argument("grid spacing must divide the interval [-L, L)");
  axis_points_ = static_cast<std::size_t>(rounded);
}

GridSpec GridSpec::hermite_default(int dim, int N) {
  const double L = std::max(6.0, 2.0 * std::sqrt(static_cast<double>(N) / kPi));
  return {dim, L, L / 1024.0};
}

GridSpec GridSpec::phase_default(int N) {
  const double L = std::max(8.0, std::ceil(2.0 * std::sqrt(static_cast<double>(N) / kPi)));
  return {1, L, 1.0 / 128.0};
}

bool GridSpec::same_as(const GridSpec& other) const {
  return dim == other.dim && axis_points_ == other.axis_points_ &&
         std::abs(half_width - other.half_width) <= 1e-12 * half_width &&
         std::abs(spacing - other.spacing) <= 1e-12 * spacing;
}

GridFunction::GridFunction(GridSpec g, Eigen::VectorXcd s) : grid(g), samples(std::move(s)) {
  if (static_cast<std::size_t>(samples.size()) != grid.size())
    throw std::invalid_argument("sample count does not match the grid");
}

GridFunction GridFunction::sample(const GridSpec& g, const std::function<cplx(double)>& f) {
  if (g.dim != 1) throw std::invalid_argument("one-variable sampler needs a 1-D grid");
  GridFunction out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out.samples[static_cast<Eigen::Index>(i)] = f(g.coord(i));
  return out;
}

GridFunction GridFunction::sample(const GridSpec& g, const std::function<cplx(double, double)>& f) {
  if (g.dim != 2) throw std::invalid_argument("two-variable sampler needs a 2-D grid");
  GridFunction out(g);
  const std::size_t M = g.points_per_axis();
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j)
      out.samples[static_cast<Eigen::Index>(i * M + j)] = f(g.coord(i), g.coord(j));
  return out;
}

cplx GridFunction::inner(const GridFunction& other) const {
  if (!grid.same_as(other.grid)) throw std::invalid_argument("inner product of functions on different grids");
  // <f, g> = sum f conj(g) dV
  return other.samples.dot(samples) * cell_volume();
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (!grid.same_as(o.grid)) throw std::invalid_argument("grid mismatch");
  samples += o.samples;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (!grid.same_as(o.grid)) throw std::invalid_argument("grid mismatch");
  samples -= o.samples;
  return *this;
}

}  // namespace tfloc
