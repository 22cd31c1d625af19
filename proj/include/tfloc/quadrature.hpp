#pragma once

#include <vector>

namespace tfloc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; rules are cached per n.
const QuadratureRule& gauss_legendre(int n);

/// Generalized Gauss-Laguerre rule for x^alpha e^{-x} on (0, inf) via Golub-Welsch,
/// with weights normalized to sum to one.
QuadratureRule gauss_laguerre_normalized(int n, double alpha);

}  // namespace tfloc
