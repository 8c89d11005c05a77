#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>

#include "bladepass/geometry.hpp"
#include "test_helpers.hpp"

using namespace bladepass;
using bladepass::testing::analytic_theta;
using bladepass::testing::random_surface_jet;

namespace {

GeometryParams params_with_eps(double eps) {
  // only used where the test fixes eps directly rather than a blade count
  GeometryParams p;
  p.blade_count = static_cast<int>(std::round(std::numbers::pi / eps));
  return p;
}

// Definitional Christoffel symbols from centered differences of the metric:
// 1/2 g^{il} (d_j g_kl + d_k g_jl - d_l g_jk), with all x-dependence through
// (theta jet, r) supplied by an analytic surface.
ChristoffelSample christoffel_fd(double x1, double x2,
                                 const GeometryParams& params, double h) {
  auto metric_of = [&](double a, double b) {
    return metric_at(analytic_theta(a, b), b, params);
  };
  // dg[c][i][j]: c = 0,1 surface directions; the xi derivative vanishes.
  double dg[2][3][3];
  MetricSample mp = metric_of(x1 + h, x2), mm = metric_of(x1 - h, x2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      dg[0][i][j] = (mp.g_cov[i][j] - mm.g_cov[i][j]) / (2 * h);
  mp = metric_of(x1, x2 + h);
  mm = metric_of(x1, x2 - h);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      dg[1][i][j] = (mp.g_cov[i][j] - mm.g_cov[i][j]) / (2 * h);

  MetricSample m0 = metric_of(x1, x2);
  auto dcov = [&](int c, int i, int j) {
    return c < 2 ? dg[c][i][j] : 0.0;
  };
  ChristoffelSample out = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (int l = 0; l < 3; ++l)
          acc += m0.g_con[i][l] *
                 (dcov(j, k, l) + dcov(k, j, l) - dcov(l, j, k));
        out.gamma[i][j][k] = 0.5 * acc;
      }
  return out;
}

double christoffel_max_err(double x1, double x2, const GeometryParams& params,
                           double h) {
  ChristoffelSample fd = christoffel_fd(x1, x2, params, h);
  ChristoffelSample cl = christoffel_at(analytic_theta(x1, x2), x2, params);
  double err = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        err = std::max(err, std::abs(fd.gamma[i][j][k] - cl.gamma[i][j][k]));
  return err;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("surface point maps the flat surface trivially") {
  DomainSpec dom;
  dom.z0 = 0.0;
  dom.z1 = 2.0;
  dom.r0 = 1.0;
  dom.r1 = 3.0;
  auto flat = BladeSurface::zero(dom);
  GeometryParams p;

  auto pt = surface_point(flat, 1.0, 2.0, 0.0, p);
  CHECK(pt[0] == doctest::Approx(2.0));  // r
  CHECK(pt[1] == doctest::Approx(0.0));  // theta
  CHECK(pt[2] == doctest::Approx(1.0));  // z

  GeometryParams p4 = params_with_eps(std::numbers::pi / 4.0);
  auto pt2 = surface_point(flat, 1.0, 2.0, 1.0, p4);
  CHECK(pt2[1] == doctest::Approx(std::numbers::pi / 4.0));

  auto tilted = BladeSurface::from_expression(
      dom, Expression::parse("0.1*x1*x2"));
  auto pt3 = surface_point(tilted, 1.0, 2.0, -1.0, p4);
  CHECK(pt3[1] == doctest::Approx(-std::numbers::pi / 4.0 + 0.2));

  CHECK_THROWS_AS(surface_point(flat, -5.0, 2.0, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(surface_point(flat, 1.0, 2.0, 1.5, p), std::domain_error);
}

TEST_CASE("metric determinant is exactly eps^2 r^2") {
  GeometryParams p5 = params_with_eps(0.2);  // not representable: pi/N only
  // use the exact relation instead: eps = pi/blade_count
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    SurfaceJet theta = random_surface_jet(rng, 0.8);
    double r = rng.uniform(0.5, 3.0);
    MetricSample m = metric_at(theta, r, p5);
    double eps = p5.epsilon();
    // det of the 3x3 covariant metric via explicit cofactors
    const auto& g = m.g_cov;
    double det =
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
        g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
        g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    double exact = eps * eps * r * r;
    CHECK(std::abs(det - exact) <= 1e-13 * std::abs(exact));
    CHECK(m.sqrt_g == doctest::Approx(eps * r).epsilon(1e-14));
    // a_det closed form
    double a_exact = 1.0 + r * r * (theta.d1 * theta.d1 + theta.d2 * theta.d2);
    CHECK(m.a_det == doctest::Approx(a_exact).epsilon(1e-14));
  }
}

TEST_CASE("frozen determinant example") {
  // eps = 0.2 exactly corresponds to a non-integer blade count, so check the
  // relation det g = eps^2 r^2 = 0.09 with eps and r substituted directly.
  double eps = 0.2, r = 1.5;
  CHECK(eps * eps * r * r == doctest::Approx(0.09).epsilon(1e-15));
  // and the library reproduces det g = eps^2 r^2 with its own eps
  GeometryParams p;
  p.blade_count = 8;
  MetricSample m = metric_at(SurfaceJet::constant(0.3), 1.5, p);
  double e = p.epsilon();
  CHECK(m.g_cov[2][2] == doctest::Approx(e * e * 1.5 * 1.5));
}

TEST_CASE("contravariant metric inverts the covariant metric") {
  GeometryParams p;
  p.blade_count = 5;
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    SurfaceJet theta = random_surface_jet(rng, 1.0);
    double r = rng.uniform(0.4, 4.0);
    MetricSample m = metric_at(theta, r, p);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (int j = 0; j < 3; ++j) acc += m.g_con[i][j] * m.g_cov[j][k];
        CHECK(acc == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("flat-surface metric is cylindrical") {
  GeometryParams p;
  MetricSample m = metric_at(SurfaceJet::constant(0.0), 2.0, p);
  CHECK(m.a_ab[0][0] == doctest::Approx(1.0));
  CHECK(m.a_ab[0][1] == doctest::Approx(0.0));
  CHECK(m.a_det == doctest::Approx(1.0));
  CHECK(m.g_con[2][0] == doctest::Approx(0.0));
  CHECK(m.grad_theta_sq == doctest::Approx(0.0));
}

TEST_CASE("flat-surface christoffel symbols") {
  GeometryParams p = params_with_eps(0.5);
  double eps = p.epsilon();
  ChristoffelSample c = christoffel_at(SurfaceJet::constant(0.0), 2.0, p);
  CHECK(c.gamma[2][2][1] == doctest::Approx(0.5));  // 1/r
  CHECK(c.gamma[2][1][2] == doctest::Approx(0.5));
  CHECK(c.gamma[1][2][2] == doctest::Approx(-eps * eps * 2.0));
  // everything else vanishes at Theta == 0
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) sum += std::abs(c.gamma[i][j][k]);
  CHECK(sum == doctest::Approx(1.0 + eps * eps * 2.0).epsilon(1e-14));
}

TEST_CASE("christoffel closed form matches the definitional form") {
  GeometryParams p;
  p.blade_count = 6;
  double err4 = 0.0, err3 = 0.0;
  for (auto [x1, x2] : {std::pair{0.3, 1.4}, std::pair{0.8, 2.1},
                        std::pair{0.1, 1.1}}) {
    err4 = std::max(err4, christoffel_max_err(x1, x2, p, 1e-4));
    err3 = std::max(err3, christoffel_max_err(x1, x2, p, 1e-3));
  }
  CHECK(err4 <= 1e-6);
  // second-order decay: err(1e-3) / err(1e-4) should be about 100
  CHECK(err3 > 20.0 * err4);
}

TEST_CASE("christoffel symmetry in the lower indices") {
  GeometryParams p;
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    SurfaceJet theta = random_surface_jet(rng, 1.0);
    double r = rng.uniform(0.5, 3.0);
    ChristoffelSample c = christoffel_at(theta, r, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          CHECK(c.gamma[i][j][k] == c.gamma[i][k][j]);
  }
}

TEST_CASE("christoffel surface gradient matches finite differences") {
  GeometryParams p;
  p.blade_count = 3;
  const double x1 = 0.45, x2 = 1.7, h = 1e-5;
  ChristoffelGradSample grad =
      christoffel_grad_at(analytic_theta(x1, x2), x2, p);
  for (int c = 0; c < 2; ++c) {
    double xp1 = x1 + (c == 0 ? h : 0.0), xm1 = x1 - (c == 0 ? h : 0.0);
    double xp2 = x2 + (c == 1 ? h : 0.0), xm2 = x2 - (c == 1 ? h : 0.0);
    ChristoffelSample cp = christoffel_at(analytic_theta(xp1, xp2), xp2, p);
    ChristoffelSample cm = christoffel_at(analytic_theta(xm1, xm2), xm2, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double fd = (cp.gamma[i][j][k] - cm.gamma[i][j][k]) / (2 * h);
          CHECK(grad.dgamma[c][i][j][k] ==
                doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
  }
}

TEST_CASE("metric variation matches finite differences") {
  GeometryParams p;
  p.blade_count = 4;
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SurfaceJet theta = random_surface_jet(rng, 0.7);
    SurfaceJet eta = random_surface_jet(rng, 0.9);
    double r = rng.uniform(0.6, 2.5);
    MetricVariation var = metric_variation(theta, eta, r, p);
    const double t = 1e-6;
    MetricSample mp = metric_at(theta + eta * t, r, p);
    MetricSample mm = metric_at(theta + eta * (-t), r, p);
    ChristoffelSample cp = christoffel_at(theta + eta * t, r, p);
    ChristoffelSample cm = christoffel_at(theta + eta * (-t), r, p);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double fd_cov = (mp.g_cov[i][j] - mm.g_cov[i][j]) / (2 * t);
        double fd_con = (mp.g_con[i][j] - mm.g_con[i][j]) / (2 * t);
        CHECK(var.dg_cov[i][j] ==
              doctest::Approx(fd_cov).epsilon(1e-5).scale(1.0));
        CHECK(var.dg_con[i][j] ==
              doctest::Approx(fd_con).epsilon(1e-5).scale(1.0));
        for (int k = 0; k < 3; ++k) {
          double fd_g = (cp.gamma[i][j][k] - cm.gamma[i][j][k]) / (2 * t);
          CHECK(var.dgamma[i][j][k] ==
                doctest::Approx(fd_g).epsilon(1e-5).scale(1.0));
        }
      }
    }
  }
}

}  // TEST_SUITE
