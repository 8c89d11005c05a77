#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "bladepass/rng.hpp"
#include "bladepass/spline.hpp"
#include "bladepass/surface.hpp"

using bladepass::CubicBasis;
using bladepass::DirectionField;
using bladepass::DomainSpec;
using bladepass::Rng;
using bladepass::Spline1;
using bladepass::SurfaceSpline;
using bladepass::ThetaBasis;

TEST_SUITE("spline") {

TEST_CASE("basis forms a partition of unity with vanishing derivative sums") {
  CubicBasis basis(0.0, 2.0, 5);
  double window[4][4];
  for (double x : {0.0, 0.13, 0.4, 0.79, 1.0, 1.6, 1.9999, 2.0}) {
    int first = basis.eval(x, window);
    CHECK(first >= 0);
    CHECK(first + 3 < basis.size());
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (int w = 0; w < 4; ++w) {
      CHECK(window[w][0] >= -1e-14);  // B-splines are nonnegative
      s0 += window[w][0];
      s1 += window[w][1];
      s2 += window[w][2];
      s3 += window[w][3];
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s1 == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(s2 == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(s3 == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("1d spline reproduces cubics exactly") {
  auto f = [](double x) { return 1.0 + 2.0 * x - x * x + 0.5 * x * x * x; };
  auto f1 = [](double x) { return 2.0 - 2.0 * x + 1.5 * x * x; };
  auto f2 = [](double x) { return -2.0 + 3.0 * x; };
  const double a = -1.0, b = 2.0;
  const int n = 6;
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = f(a + (b - a) * i / n);
  Spline1 s(a, b, v, f1(a), f1(b));
  for (double x : {-1.0, -0.63, 0.0, 0.21, 0.5, 1.0, 1.77, 2.0}) {
    auto d = s.eval(x);
    CHECK(d[0] == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(f1(x)).epsilon(1e-11));
    CHECK(d[2] == doctest::Approx(f2(x)).epsilon(1e-10));
    CHECK(d[3] == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("1d spline interpolates random data with clamped slopes") {
  Rng rng(42);
  const double a = 0.0, b = 1.0;
  const int n = 8;
  std::vector<double> v(n + 1);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  double sa = rng.uniform(-1.0, 1.0), sb = rng.uniform(-1.0, 1.0);
  Spline1 s(a, b, v, sa, sb);
  for (int i = 0; i <= n; ++i)
    CHECK(s.value(a + (b - a) * i / n) == doctest::Approx(v[i]).epsilon(1e-12));
  CHECK(s.eval(a)[1] == doctest::Approx(sa).epsilon(1e-12));
  CHECK(s.eval(b)[1] == doctest::Approx(sb).epsilon(1e-12));
}

TEST_CASE("1d spline is C2 at interior knots") {
  Rng rng(7);
  const int n = 5;
  std::vector<double> v(n + 1);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  Spline1 s(0.0, 1.0, v, 0.3, -0.2);
  const double d = 1e-7;
  for (int k = 1; k < n; ++k) {
    double xk = static_cast<double>(k) / n;
    auto lo = s.eval(xk - d), hi = s.eval(xk + d);
    // jumps of the first three entries are O(d) since d3 is bounded
    CHECK(std::abs(hi[0] - lo[0]) < 1e-5);
    CHECK(std::abs(hi[1] - lo[1]) < 1e-4);
    CHECK(std::abs(hi[2] - lo[2]) < 1e-3);
  }
}

TEST_CASE("1d spline derivatives match finite differences") {
  Rng rng(99);
  const int n = 7;
  std::vector<double> v(n + 1);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  Spline1 s(0.0, 2.0, v, 0.0, 0.5);
  const double h = 1e-5;
  for (double x : {0.31, 0.77, 1.13, 1.62}) {  // generic points, off knots
    auto c = s.eval(x);
    double fd1 = (s.value(x + h) - s.value(x - h)) / (2 * h);
    double fd2 = (s.value(x + h) - 2 * c[0] + s.value(x - h)) / (h * h);
    CHECK(c[1] == doctest::Approx(fd1).epsilon(1e-7));
    CHECK(c[2] == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("2d spline reproduces bicubics exactly") {
  auto f = [](double x, double y) {
    return (1.0 + x + x * x * x) * (2.0 - y + 0.5 * y * y * y);
  };
  auto fx = [](double x, double y) {
    return (1.0 + 3.0 * x * x) * (2.0 - y + 0.5 * y * y * y);
  };
  auto fy = [](double x, double y) {
    return (1.0 + x + x * x * x) * (-1.0 + 1.5 * y * y);
  };
  auto fxy = [](double x, double y) {
    return (1.0 + 3.0 * x * x) * (-1.0 + 1.5 * y * y);
  };
  const double z0 = 0.0, z1 = 1.0, r0 = 1.0, r1 = 3.0;
  const int n1 = 4, n2 = 5;
  std::vector<double> vals((n1 + 1) * (n2 + 1));
  auto slopes = SurfaceSpline::EdgeSlopes::zero(n1, n2);
  for (int i = 0; i <= n1; ++i) {
    double x = z0 + (z1 - z0) * i / n1;
    for (int j = 0; j <= n2; ++j) {
      double y = r0 + (r1 - r0) * j / n2;
      vals[i * (n2 + 1) + j] = f(x, y);
    }
  }
  for (int j = 0; j <= n2; ++j) {
    double y = r0 + (r1 - r0) * j / n2;
    slopes.ddx1_lo[j] = fx(z0, y);
    slopes.ddx1_hi[j] = fx(z1, y);
  }
  for (int i = 0; i <= n1; ++i) {
    double x = z0 + (z1 - z0) * i / n1;
    slopes.ddx2_lo[i] = fy(x, r0);
    slopes.ddx2_hi[i] = fy(x, r1);
  }
  slopes.cross[0][0] = fxy(z0, r0);
  slopes.cross[0][1] = fxy(z0, r1);
  slopes.cross[1][0] = fxy(z1, r0);
  slopes.cross[1][1] = fxy(z1, r1);

  SurfaceSpline s(z0, z1, r0, r1, n1, n2, vals, slopes);
  for (double x : {0.0, 0.23, 0.5, 0.81, 1.0}) {
    for (double y : {1.0, 1.4, 2.17, 2.9, 3.0}) {
      auto j = s.jet(x, y);
      CHECK(j.v == doctest::Approx(f(x, y)).epsilon(1e-11));
      CHECK(j.d1 == doctest::Approx(fx(x, y)).epsilon(1e-10));
      CHECK(j.d2 == doctest::Approx(fy(x, y)).epsilon(1e-10));
      CHECK(j.d12 == doctest::Approx(fxy(x, y)).epsilon(1e-9));
      CHECK(j.d111 ==
            doctest::Approx(6.0 * (2.0 - y + 0.5 * y * y * y)).epsilon(1e-8));
      CHECK(j.d222 == doctest::Approx(3.0 * (1.0 + x + x * x * x))
                          .epsilon(1e-8));
    }
  }
}

TEST_CASE("2d spline interpolates random nodal data") {
  Rng rng(1234);
  const int n1 = 3, n2 = 4;
  std::vector<double> vals((n1 + 1) * (n2 + 1));
  for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
  SurfaceSpline s(0.0, 1.0, 1.0, 2.0, n1, n2, vals,
                  SurfaceSpline::EdgeSlopes::zero(n1, n2));
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j)
      CHECK(s.value(i / static_cast<double>(n1),
                    1.0 + j / static_cast<double>(n2)) ==
            doctest::Approx(vals[i * (n2 + 1) + j]).epsilon(1e-11));
}

TEST_CASE("theta basis is cardinal at interior nodes") {
  DomainSpec dom;
  dom.n1 = 4;
  dom.n2 = 3;
  ThetaBasis basis(dom);
  REQUIRE(basis.count() == (dom.n1 - 1) * (dom.n2 - 1));
  for (int k = 0; k < basis.count(); ++k) {
    for (int i1 = 0; i1 <= dom.n1; ++i1) {
      for (int i2 = 0; i2 <= dom.n2; ++i2) {
        double expected = 0.0;
        if (i1 > 0 && i1 < dom.n1 && i2 > 0 && i2 < dom.n2 &&
            basis.index(i1, i2) == k)
          expected = 1.0;
        CHECK(basis.jet(k, dom.node1(i1), dom.node2(i2)).v ==
              doctest::Approx(expected).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("theta basis bulk evaluation matches per-basis jets") {
  DomainSpec dom;
  dom.n1 = 3;
  dom.n2 = 3;
  ThetaBasis basis(dom);
  std::vector<bladepass::SurfaceJet> all;
  basis.jets_at(0.37, 1.61, all);
  REQUIRE(static_cast<int>(all.size()) == basis.count());
  for (int k = 0; k < basis.count(); ++k) {
    auto one = basis.jet(k, 0.37, 1.61);
    CHECK(all[k].v == doctest::Approx(one.v).epsilon(1e-14));
    CHECK(all[k].d1 == doctest::Approx(one.d1).epsilon(1e-14));
    CHECK(all[k].d22 == doctest::Approx(one.d22).epsilon(1e-14));
  }
}

TEST_CASE("direction fields vanish with all first derivatives on the boundary") {
  DomainSpec dom;
  dom.n1 = 4;
  dom.n2 = 4;
  Rng rng(5);
  DirectionField eta = DirectionField::random(dom, rng, 1.0);
  // sample along each edge, including between nodes
  for (int k = 0; k <= 20; ++k) {
    double s = k / 20.0;
    double x1 = dom.z0 + (dom.z1 - dom.z0) * s;
    double x2 = dom.r0 + (dom.r1 - dom.r0) * s;
    for (auto [px, py] : {std::pair{x1, dom.r0}, std::pair{x1, dom.r1},
                          std::pair{dom.z0, x2}, std::pair{dom.z1, x2}}) {
      auto j = eta.jet(px, py);
      CHECK(std::abs(j.v) < 1e-12);
      CHECK(std::abs(j.d1) < 1e-11);
      CHECK(std::abs(j.d2) < 1e-11);
    }
  }
}

TEST_CASE("direction field rejects nonzero boundary nodes") {
  DomainSpec dom;
  std::vector<double> nodal(dom.node_count(), 0.0);
  nodal[dom.node_index(0, 1)] = 0.5;
  CHECK_THROWS_AS(DirectionField(dom, nodal), std::invalid_argument);
}

TEST_CASE("perturbed blade surface is linear in the direction") {
  DomainSpec dom;
  Rng rng(77);
  auto theta = bladepass::BladeSurface::from_expression(
      dom, bladepass::Expression::parse("0.1*x1*x2 + 0.05*sin(x1)"));
  DirectionField eta = DirectionField::random(dom, rng, 1.0);
  const double t = 0.37;
  auto moved = theta.perturbed(eta, t);
  for (double x1 : {0.1, 0.5, 0.93}) {
    for (double x2 : {1.07, 1.5, 1.88}) {
      auto j0 = theta.jet(x1, x2);
      auto j1 = moved.jet(x1, x2);
      auto je = eta.jet(x1, x2);
      CHECK(j1.v == doctest::Approx(j0.v + t * je.v).epsilon(1e-12));
      CHECK(j1.d1 == doctest::Approx(j0.d1 + t * je.d1).epsilon(1e-11));
      CHECK(j1.d22 == doctest::Approx(j0.d22 + t * je.d22).epsilon(1e-10));
      CHECK(j1.d112 == doctest::Approx(j0.d112 + t * je.d112).epsilon(1e-9));
    }
  }
}

TEST_CASE("blade surface admissibility gate") {
  DomainSpec dom;
  auto flat = bladepass::BladeSurface::zero(dom);
  CHECK(flat.grad_sup() == doctest::Approx(0.0));
  CHECK(flat.admissible(0.1));
  auto steep = bladepass::BladeSurface::from_expression(
      dom, bladepass::Expression::parse("x1"));
  CHECK(steep.grad_sup() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(steep.admissible(0.5));
}

}  // TEST_SUITE
