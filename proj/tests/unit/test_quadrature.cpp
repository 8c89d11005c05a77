#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bladepass/quadrature.hpp"

using bladepass::gauss_rule;
using bladepass::tensor_rule_2d;
using bladepass::tensor_rule_3d;

namespace {

double monomial_integral(int k) {  // over [-1, 1]
  return (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss rules are exact to degree 2n-1") {
  for (int n = 1; n <= 6; ++n) {
    auto rule = gauss_rule(n);
    REQUIRE(rule.points.size() == static_cast<size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q)
        acc += rule.weights[q] * std::pow(rule.points[q], k);
      CHECK(acc == doctest::Approx(monomial_integral(k)).epsilon(1e-13));
    }
    // and not exact one degree past that (sanity that the order is sharp)
    double acc = 0.0;
    for (int q = 0; q < n; ++q)
      acc += rule.weights[q] * std::pow(rule.points[q], 2 * n);
    CHECK(std::abs(acc - monomial_integral(2 * n)) > 1e-6);
  }
}

TEST_CASE("weights are positive and sum to 2") {
  for (int n = 1; n <= 6; ++n) {
    auto rule = gauss_rule(n);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("3d tensor rule integrates separable monomials") {
  auto rule = tensor_rule_3d(3);
  REQUIRE(rule.points.size() == 27);
  auto integrate = [&](int a, int b, int c) {
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q)
      acc += rule.weights[q] * std::pow(rule.points[q][0], a) *
             std::pow(rule.points[q][1], b) * std::pow(rule.points[q][2], c);
    return acc;
  };
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c)
        CHECK(integrate(a, b, c) ==
              doctest::Approx(monomial_integral(a) * monomial_integral(b) *
                              monomial_integral(c))
                  .epsilon(1e-12));
}

TEST_CASE("2d tensor rule lives in the xi=0 plane") {
  auto rule = tensor_rule_2d(2);
  REQUIRE(rule.points.size() == 4);
  double area = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    CHECK(rule.points[q][2] == 0.0);
    area += rule.weights[q];
  }
  CHECK(area == doctest::Approx(4.0));
}

TEST_CASE("invalid order throws") {
  CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(7), std::invalid_argument);
}

}  // TEST_SUITE
