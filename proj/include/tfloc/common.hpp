#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tfloc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr const char* kVersion = "0.1.0";

/// Multi-index alpha in N_0^d for d in {1, 2}.
class MultiIndex {
 public:
  explicit MultiIndex(int n) : dim_(1), idx_{n, 0} { check(); }
  MultiIndex(int n1, int n2) : dim_(2), idx_{n1, n2} { check(); }

  int dim() const { return dim_; }
  int operator[](int j) const { return idx_[j]; }
  int order() const { return idx_[0] + idx_[1]; }
  int max_component() const { return idx_[0] > idx_[1] ? idx_[0] : idx_[1]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  void check() const {
    if (idx_[0] < 0 || idx_[1] < 0) throw std::invalid_argument("multi-index components must be non-negative");
  }
  int dim_;
  std::array<int, 2> idx_;
};

// Flat position of alpha inside a cutoff-N block of (N+1)^d entries.
inline std::size_t flat_index(const MultiIndex& a, int N) {
  return a.dim() == 1 ? static_cast<std::size_t>(a[0])
                      : static_cast<std::size_t>(a[0]) * static_cast<std::size_t>(N + 1) + a[1];
}

inline MultiIndex unflat_index(std::size_t k, int dim, int N) {
  if (dim == 1) return MultiIndex(static_cast<int>(k));
  return MultiIndex(static_cast<int>(k / (N + 1)), static_cast<int>(k % (N + 1)));
}

inline std::size_t block_size(int dim, int N) {
  return dim == 1 ? static_cast<std::size_t>(N + 1) : static_cast<std::size_t>(N + 1) * (N + 1);
}

inline void require_dimension(int d) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

/// Grid or phase-space quadrature cannot resolve the requested quantity.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// The Gabor system fails to be a frame.
class NotAFrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment refused because the envelope violates the GRS condition.
class GrsRefusal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfloc
