#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>

#include "tfloc/common.hpp"

namespace tfloc {

/// Uniform half-open grid [-L, L)^d with spacing delta.
struct GridSpec {
  int dim = 1;
  double half_width = 8.0;
  double spacing = 1.0 / 128.0;

  GridSpec() = default;
  GridSpec(int d, double L, double delta);

  std::size_t points_per_axis() const { return axis_points_; }
  std::size_t size() const { return dim == 1 ? axis_points_ : axis_points_ * axis_points_; }
  double coord(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing; }

  /// Hermite analysis default: L = max(6, 2 sqrt(N/pi)), delta = L/1024.
  static GridSpec hermite_default(int dim, int N);
  /// Grid whose spacing divides the default phase-space lattice (delta = 1/128).
  static GridSpec phase_default(int N = 64);

  bool same_as(const GridSpec& other) const;

 private:
  std::size_t axis_points_ = 2048;
};

/// Complex samples of a function on a GridSpec; d = 2 is stored row-major in (x1, x2).
struct GridFunction {
  GridSpec grid;
  Eigen::VectorXcd samples;

  GridFunction() = default;
  GridFunction(GridSpec g, Eigen::VectorXcd s);
  explicit GridFunction(const GridSpec& g) : grid(g), samples(Eigen::VectorXcd::Zero(g.size())) {}

  static GridFunction sample(const GridSpec& g, const std::function<cplx(double)>& f);
  static GridFunction sample(const GridSpec& g, const std::function<cplx(double, double)>& f);

  double cell_volume() const { return grid.dim == 1 ? grid.spacing : grid.spacing * grid.spacing; }
  cplx inner(const GridFunction& other) const;
  double norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx c) { samples *= c; return *this; }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx c, GridFunction a) { return a *= c; }
};

}  // namespace tfloc
