#include <doctest.h>

#include <cmath>

#include "bladepass/jets.hpp"

using bladepass::FieldJet;
using bladepass::SurfaceJet;

namespace {

// Exact jet of g(c1*x1 + c2*x2 + c0) given the derivative sequence of g:
// derivative order p in x1 and q in x2 is g^(p+q) * c1^p * c2^q.
SurfaceJet oracle_surface(const double g[4], double c1, double c2) {
  SurfaceJet j;
  j.v = g[0];
  j.d1 = g[1] * c1;
  j.d2 = g[1] * c2;
  j.d11 = g[2] * c1 * c1;
  j.d12 = g[2] * c1 * c2;
  j.d22 = g[2] * c2 * c2;
  j.d111 = g[3] * c1 * c1 * c1;
  j.d112 = g[3] * c1 * c1 * c2;
  j.d122 = g[3] * c1 * c2 * c2;
  j.d222 = g[3] * c2 * c2 * c2;
  return j;
}

void check_close(const SurfaceJet& a, const SurfaceJet& b, double tol) {
  CHECK(a.v == doctest::Approx(b.v).epsilon(tol));
  CHECK(a.d1 == doctest::Approx(b.d1).epsilon(tol));
  CHECK(a.d2 == doctest::Approx(b.d2).epsilon(tol));
  CHECK(a.d11 == doctest::Approx(b.d11).epsilon(tol));
  CHECK(a.d12 == doctest::Approx(b.d12).epsilon(tol));
  CHECK(a.d22 == doctest::Approx(b.d22).epsilon(tol));
  CHECK(a.d111 == doctest::Approx(b.d111).epsilon(tol));
  CHECK(a.d112 == doctest::Approx(b.d112).epsilon(tol));
  CHECK(a.d122 == doctest::Approx(b.d122).epsilon(tol));
  CHECK(a.d222 == doctest::Approx(b.d222).epsilon(tol));
}

void check_close(const FieldJet& a, const FieldJet& b, double tol) {
  CHECK(a.v == doctest::Approx(b.v).epsilon(tol));
  for (int c = 0; c < 3; ++c)
    CHECK(a.d[c] == doctest::Approx(b.d[c]).epsilon(tol));
  for (int c = 0; c < 6; ++c)
    CHECK(a.dd[c] == doctest::Approx(b.dd[c]).epsilon(tol));
}

SurfaceJet linear_arg(double c1, double c2, double c0, double x1, double x2) {
  return SurfaceJet::coordinate(0, x1) * c1 +
         SurfaceJet::coordinate(1, x2) * c2 + SurfaceJet::constant(c0);
}

}  // namespace

TEST_SUITE("jets") {

TEST_CASE("surface jet elementary functions against analytic derivatives") {
  const double x1 = 0.7, x2 = -0.4, c1 = 1.3, c2 = -0.8, c0 = 0.25;
  const double u = c1 * x1 + c2 * x2 + c0;
  SurfaceJet arg = linear_arg(c1, c2, c0, x1, x2);

  SUBCASE("sin") {
    double g[4] = {std::sin(u), std::cos(u), -std::sin(u), -std::cos(u)};
    check_close(sin(arg), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("cos") {
    double g[4] = {std::cos(u), -std::sin(u), -std::cos(u), std::sin(u)};
    check_close(cos(arg), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("exp") {
    double e = std::exp(u);
    double g[4] = {e, e, e, e};
    check_close(exp(arg), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("log") {
    double s = u + 3.0;  // shift into the domain
    SurfaceJet sh = arg + SurfaceJet::constant(3.0);
    double g[4] = {std::log(s), 1.0 / s, -1.0 / (s * s), 2.0 / (s * s * s)};
    check_close(log(sh), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("sqrt") {
    double s = u + 3.0;
    SurfaceJet sh = arg + SurfaceJet::constant(3.0);
    double q = std::sqrt(s);
    double g[4] = {q, 0.5 / q, -0.25 / (q * s), 0.375 / (q * s * s)};
    check_close(sqrt(sh), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("reciprocal") {
    double s = u + 3.0;
    SurfaceJet sh = arg + SurfaceJet::constant(3.0);
    double g[4] = {1.0 / s, -1.0 / (s * s), 2.0 / (s * s * s),
                   -6.0 / (s * s * s * s)};
    check_close(SurfaceJet::constant(1.0) / sh, oracle_surface(g, c1, c2),
                1e-12);
  }
  SUBCASE("pow fractional") {
    double s = u + 3.0;
    SurfaceJet sh = arg + SurfaceJet::constant(3.0);
    double a = 2.5;
    double g[4] = {std::pow(s, a), a * std::pow(s, a - 1),
                   a * (a - 1) * std::pow(s, a - 2),
                   a * (a - 1) * (a - 2) * std::pow(s, a - 3)};
    check_close(pow(sh, a), oracle_surface(g, c1, c2), 1e-12);
  }
  SUBCASE("tan") {
    double tn = std::tan(u), sc2 = 1.0 + tn * tn;
    double g[4] = {tn, sc2, 2.0 * tn * sc2,
                   sc2 * (2.0 * sc2 + 4.0 * tn * tn)};
    check_close(tan(arg), oracle_surface(g, c1, c2), 1e-12);
  }
}

TEST_CASE("surface jet product rule via trig identity") {
  // sin(u)cos(u) = sin(2u)/2 exercises the Leibniz path against the chain
  // path with no shared code.
  const double x1 = 0.3, x2 = 0.9, c1 = 0.7, c2 = 1.1, c0 = -0.2;
  SurfaceJet arg = linear_arg(c1, c2, c0, x1, x2);
  SurfaceJet lhs = sin(arg) * cos(arg);
  SurfaceJet rhs = sin(arg * 2.0) * 0.5;
  check_close(lhs, rhs, 1e-12);
}

TEST_CASE("surface jet quotient rule via tan") {
  const double x1 = 0.2, x2 = 0.4, c1 = 0.5, c2 = -0.3, c0 = 0.1;
  SurfaceJet arg = linear_arg(c1, c2, c0, x1, x2);
  check_close(sin(arg) / cos(arg), tan(arg), 1e-12);
}

TEST_CASE("surface jet exp addition law") {
  const double x1 = -0.5, x2 = 0.6;
  SurfaceJet u = linear_arg(0.4, -0.2, 0.0, x1, x2);
  SurfaceJet v = linear_arg(-0.1, 0.7, 0.3, x1, x2);
  check_close(exp(u) * exp(v), exp(u + v), 1e-12);
}

TEST_CASE("surface jet polynomial powers") {
  const double x1 = 1.2, x2 = -0.7;
  SurfaceJet u = linear_arg(1.0, 2.0, 3.0, x1, x2);
  // u^3 via repeated product vs pow
  check_close(u * u * u, pow(u, 3.0), 1e-12);
  // difference of squares
  SurfaceJet v = linear_arg(-0.5, 1.5, 0.0, x1, x2);
  check_close((u + v) * (u - v), u * u - v * v, 1e-12);
}

TEST_CASE("surface jet coordinate and constant basics") {
  SurfaceJet x = SurfaceJet::coordinate(0, 2.5);
  CHECK(x.v == 2.5);
  CHECK(x.d1 == 1.0);
  CHECK(x.d2 == 0.0);
  CHECK(x.d11 == 0.0);
  SurfaceJet c = SurfaceJet::constant(4.0);
  CHECK(c.v == 4.0);
  CHECK(c.d1 == 0.0);
  // grad / hess / third accessors
  SurfaceJet y = SurfaceJet::coordinate(1, -1.0);
  SurfaceJet f = x * y * y;  // f = x y^2
  CHECK(f.grad()[0] == doctest::Approx(1.0));   // y^2 = 1
  CHECK(f.grad()[1] == doctest::Approx(-5.0));  // 2xy = 2*2.5*(-1)
  CHECK(f.hess(0, 1) == doctest::Approx(-2.0));     // 2y
  CHECK(f.hess(1, 1) == doctest::Approx(5.0));      // 2x
  CHECK(f.third(0, 1, 1) == doctest::Approx(2.0));  // d/dx d2/dy2 = 2
  CHECK(f.third(1, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("field jet matches surface jet on xi-free functions") {
  const double x1 = 0.8, x2 = -0.3;
  SurfaceJet s = sin(SurfaceJet::coordinate(0, x1) *
                     SurfaceJet::coordinate(1, x2) +
                     SurfaceJet::constant(0.4)) *
                 2.0;
  FieldJet f = sin(FieldJet::coordinate(0, x1) * FieldJet::coordinate(1, x2) +
                   FieldJet::constant(0.4)) *
               2.0;
  CHECK(f.v == doctest::Approx(s.v).epsilon(1e-13));
  CHECK(f.d[0] == doctest::Approx(s.d1).epsilon(1e-13));
  CHECK(f.d[1] == doctest::Approx(s.d2).epsilon(1e-13));
  CHECK(f.d[2] == 0.0);
  CHECK(f.hess(0, 0) == doctest::Approx(s.d11).epsilon(1e-13));
  CHECK(f.hess(0, 1) == doctest::Approx(s.d12).epsilon(1e-13));
  CHECK(f.hess(1, 1) == doctest::Approx(s.d22).epsilon(1e-13));
  CHECK(f.hess(2, 2) == 0.0);
}

TEST_CASE("field jet elementary identities in three variables") {
  FieldJet x = FieldJet::coordinate(0, 0.4);
  FieldJet y = FieldJet::coordinate(1, -0.9);
  FieldJet z = FieldJet::coordinate(2, 0.2);
  FieldJet u = x * 0.5 + y * 1.2 - z * 0.7 + FieldJet::constant(0.3);
  check_close(sin(u) * cos(u), sin(u * 2.0) * 0.5, 1e-12);
  check_close(sin(u) / cos(u), tan(u), 1e-12);
  FieldJet s = u + FieldJet::constant(3.0);
  check_close(sqrt(s) * sqrt(s), s, 1e-12);
  check_close(exp(log(s)), s, 1e-12);
  check_close(pow(s, 2.0), s * s, 1e-12);
}

TEST_CASE("field jet hessian symmetry storage") {
  FieldJet x = FieldJet::coordinate(0, 1.1);
  FieldJet y = FieldJet::coordinate(1, 0.7);
  FieldJet z = FieldJet::coordinate(2, -0.5);
  FieldJet f = x * y * z + y * y * z * 0.5;
  CHECK(f.hess(0, 1) == f.hess(1, 0));
  CHECK(f.hess(0, 1) == doctest::Approx(-0.5));          // z
  CHECK(f.hess(1, 2) == doctest::Approx(1.1 + 0.7));     // x + y
  CHECK(f.hess(1, 1) == doctest::Approx(-0.5));          // z
  CHECK(f.hess(2, 2) == 0.0);
}

}  // TEST_SUITE
