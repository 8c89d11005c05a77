#include "bladepass/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bladepass {

GaussRule gauss_rule(int n) {
  GaussRule r;
  switch (n) {
    case 1:
      r.points = {0.0};
      r.weights = {2.0};
      break;
    case 2: {
      const double p = 1.0 / std::sqrt(3.0);
      r.points = {-p, p};
      r.weights = {1.0, 1.0};
      break;
    }
    case 3: {
      const double p = std::sqrt(0.6);
      r.points = {-p, 0.0, p};
      r.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      r.points = {-b, -a, a, b};
      r.weights = {wb, wa, wa, wb};
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      r.points = {-b, -a, 0.0, a, b};
      r.weights = {wb, wa, 128.0 / 225.0, wa, wb};
      break;
    }
    case 6: {
      // Abscissas/weights to full double precision.
      const double x1 = 0.2386191860831969086305017;
      const double x2 = 0.6612093864662645136613996;
      const double x3 = 0.9324695142031520278123016;
      const double w1 = 0.4679139345726910473898703;
      const double w2 = 0.3607615730481386075698335;
      const double w3 = 0.1713244923791703450402961;
      r.points = {-x3, -x2, -x1, x1, x2, x3};
      r.weights = {w3, w2, w1, w1, w2, w3};
      break;
    }
    default:
      throw std::invalid_argument("gauss_rule: order must be 1..6");
  }
  return r;
}

QuadratureRule tensor_rule_3d(int n) {
  const GaussRule g = gauss_rule(n);
  QuadratureRule q;
  q.order = n;
  q.points.reserve(static_cast<std::size_t>(n) * n * n);
  q.weights.reserve(q.points.capacity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        q.points.push_back({g.points[i], g.points[j], g.points[k]});
        q.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k]);
      }
  return q;
}

QuadratureRule tensor_rule_2d(int n) {
  const GaussRule g = gauss_rule(n);
  QuadratureRule q;
  q.order = n;
  q.points.reserve(static_cast<std::size_t>(n) * n);
  q.weights.reserve(q.points.capacity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      q.points.push_back({g.points[i], g.points[j], 0.0});
      q.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return q;
}

}  // namespace bladepass
