#pragma once

#include <array>
#include <vector>

namespace bladepass {

// Gauss-Legendre rule on [-1, 1].  Orders 1..6 are tabulated; a rule of
// n points integrates polynomials of degree 2n-1 exactly.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule gauss_rule(int n);

// Tensor-product quadrature point set on a reference cell [-1,1]^dim with
// per-axis orders; flattened with the last axis fastest.
struct QuadratureRule {
  int order;                                   // points per axis
  std::vector<std::array<double, 3>> points;   // reference coordinates
  std::vector<double> weights;                 // reference weights
};

QuadratureRule tensor_rule_3d(int n);
QuadratureRule tensor_rule_2d(int n);  // third coordinate fixed to 0

}  // namespace bladepass
