#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bladepass/expression.hpp"

using bladepass::Expression;

TEST_SUITE("expression") {

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression::parse("2+3*4").eval(0, 0, 0) == doctest::Approx(14.0));
  CHECK(Expression::parse("2+3*4^2").eval(0, 0, 0) == doctest::Approx(50.0));
  CHECK(Expression::parse("2^3^2").eval(0, 0, 0) == doctest::Approx(512.0));
  CHECK(Expression::parse("-x1^2").eval(3, 0, 0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("(2+3)*4").eval(0, 0, 0) == doctest::Approx(20.0));
  CHECK(Expression::parse("7/2/2").eval(0, 0, 0) == doctest::Approx(1.75));
  CHECK(Expression::parse("2--3").eval(0, 0, 0) == doctest::Approx(5.0));
}

TEST_CASE("variables and constants") {
  Expression e = Expression::parse("x1*x2 + xi - pi");
  CHECK(e.eval(2.0, 3.0, 0.5) ==
        doctest::Approx(6.5 - std::numbers::pi));
  CHECK(e.uses_xi());
  CHECK_FALSE(Expression::parse("x1+x2").uses_xi());
}

TEST_CASE("functions evaluate") {
  CHECK(Expression::parse("sin(x1)").eval(0.3, 0, 0) ==
        doctest::Approx(std::sin(0.3)));
  CHECK(Expression::parse("pow(x1, 2.5)").eval(2.0, 0, 0) ==
        doctest::Approx(std::pow(2.0, 2.5)));
  CHECK(Expression::parse("sqrt(exp(log(x2)))").eval(0, 4.0, 0) ==
        doctest::Approx(2.0));
  CHECK(Expression::parse("tan(x1)/sin(x1)*cos(x1)").eval(0.7, 0, 0) ==
        doctest::Approx(1.0));
}

TEST_CASE("integer exponents expand exactly") {
  Expression e = Expression::parse("x1^3");
  CHECK(e.eval(1.5, 0, 0) == doctest::Approx(3.375));
  CHECK(Expression::parse("x1^-2").eval(2.0, 0, 0) == doctest::Approx(0.25));
  CHECK(Expression::parse("x1^0").eval(123.0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("surface jets agree with hand-built jets") {
  Expression e = Expression::parse("sin(x1*x2) + 0.5*x2^2");
  auto j = e.eval_surface(0.7, -0.4);
  auto ref = sin(bladepass::SurfaceJet::coordinate(0, 0.7) *
                 bladepass::SurfaceJet::coordinate(1, -0.4)) +
             bladepass::SurfaceJet::coordinate(1, -0.4) *
                 bladepass::SurfaceJet::coordinate(1, -0.4) * 0.5;
  CHECK(j.v == doctest::Approx(ref.v).epsilon(1e-13));
  CHECK(j.d1 == doctest::Approx(ref.d1).epsilon(1e-13));
  CHECK(j.d2 == doctest::Approx(ref.d2).epsilon(1e-13));
  CHECK(j.d12 == doctest::Approx(ref.d12).epsilon(1e-13));
  CHECK(j.d222 == doctest::Approx(ref.d222).epsilon(1e-13));
}

TEST_CASE("field jets include xi derivatives") {
  Expression e = Expression::parse("x1*xi^2");
  auto j = e.eval_field(2.0, 0.0, 3.0);
  CHECK(j.v == doctest::Approx(18.0));
  CHECK(j.d[2] == doctest::Approx(12.0));   // 2 x1 xi
  CHECK(j.hess(2, 2) == doctest::Approx(4.0));
  CHECK(j.hess(0, 2) == doctest::Approx(6.0));
}

TEST_CASE("surface evaluation rejects xi") {
  Expression e = Expression::parse("x1 + xi");
  CHECK_THROWS_AS(e.eval_surface(0.0, 0.0), std::runtime_error);
}

TEST_CASE("parse errors carry position info") {
  CHECK_THROWS_AS(Expression::parse("x1 +"), std::runtime_error);
  CHECK_THROWS_AS(Expression::parse("bogus(x1)"), std::runtime_error);
  CHECK_THROWS_AS(Expression::parse("x3"), std::runtime_error);
  CHECK_THROWS_AS(Expression::parse("(x1"), std::runtime_error);
  CHECK_THROWS_AS(Expression::parse("1 2"), std::runtime_error);
  CHECK_THROWS_AS(Expression::parse(""), std::runtime_error);
}

TEST_CASE("round trip text") {
  Expression e = Expression::parse("x1 + 2*x2");
  CHECK(e.text() == "x1 + 2*x2");
  CHECK_FALSE(e.empty());
}

}  // TEST_SUITE
