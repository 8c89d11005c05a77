#include <doctest.h>

#include <cmath>

#include "bladepass/fe_space.hpp"
#include "bladepass/rng.hpp"
#include "test_helpers.hpp"

using namespace bladepass;

namespace {

DomainSpec box() {
  DomainSpec d;
  d.z0 = 0.0;
  d.z1 = 1.0;
  d.r0 = 1.0;
  d.r1 = 2.0;
  d.n1 = 4;
  d.n2 = 4;
  return d;
}

FieldJet poly_field(double x1, double x2, double xi) {
  FieldJet a = FieldJet::coordinate(0, x1);
  FieldJet b = FieldJet::coordinate(1, x2);
  FieldJet c = FieldJet::coordinate(2, xi);
  return (1.0 + a + a * a) * (2.0 - b + b * b * 0.5) * (0.3 + c - c * c);
}

}  // namespace

TEST_SUITE("fe_space") {
  TEST_CASE("mesh counts, spacing, and boundary tags") {
    Mesh mesh(box(), 4);
    CHECK(mesh.cell_count() == 64);
    CHECK(mesh.spacing(0) == doctest::Approx(0.25));
    CHECK(mesh.spacing(1) == doctest::Approx(0.25));
    CHECK(mesh.spacing(2) == doctest::Approx(0.5));
    CHECK(mesh.lo(2) == -1.0);

    const auto patches = mesh.boundary_patches();
    CHECK(patches.size() == 6);
    int walls = 0, inflow = 0, outflow = 0;
    for (const auto& p : patches) {
      if (p.tag == FaceTag::wall) {
        ++walls;
        CHECK(p.axis != 0);  // walls live on the r and xi faces
      }
      if (p.tag == FaceTag::inflow) {
        ++inflow;
        CHECK(p.axis == 0);
        CHECK(p.side == 0);
      }
      if (p.tag == FaceTag::outflow) {
        ++outflow;
        CHECK(p.axis == 0);
        CHECK(p.side == 1);
      }
    }
    CHECK(walls == 4);
    CHECK(inflow == 1);
    CHECK(outflow == 1);

    CHECK(mesh.grid(2).count() == 729);  // 9^3 triquadratic nodes
    CHECK(mesh.grid(1).count() == 125);
    CHECK_THROWS(Mesh(box(), 1));
  }

  TEST_CASE("wall classification and dof maps") {
    Mesh mesh(box(), 4);
    FESpacePair sp(mesh);
    // Free scalar nodes: all of x1, interior of x2 and xi.
    CHECK(sp.free_count == 9 * 7 * 7);
    CHECK(sp.vel_dofs() == 3 * 9 * 7 * 7);
    CHECK(sp.pre_dofs() == 125);

    int listed = 0;
    for (int a = 0; a < sp.vnodes.m[0]; ++a)
      for (int b = 0; b < sp.vnodes.m[1]; ++b)
        for (int c = 0; c < sp.vnodes.m[2]; ++c) {
          const int n = sp.vnodes.index(a, b, c);
          const bool wall = sp.wall_node(a, b, c);
          CHECK((sp.free_of_node[n] < 0) == wall);
          if (!wall) {
            CHECK(sp.node_of_free[sp.free_of_node[n]] == n);
            ++listed;
          }
          for (int comp = 0; comp < 3; ++comp) {
            const int dof = sp.vdof(n, comp);
            if (wall)
              CHECK(dof == -1);
            else
              CHECK(dof == 3 * sp.free_of_node[n] + comp);
          }
        }
    CHECK(listed == sp.free_count);
  }

  TEST_CASE("reference shapes: nodal property and partition of unity") {
    double v[3], d[3], s[3];
    shape_q2(-1.0, v, d, s);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == 0.0);
    shape_q2(0.0, v, d, s);
    CHECK(v[1] == 1.0);
    shape_q2(1.0, v, d, s);
    CHECK(v[2] == 1.0);

    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
      const double z = rng.uniform(-1.0, 1.0);
      shape_q2(z, v, d, s);
      CHECK(v[0] + v[1] + v[2] == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(d[0] + d[1] + d[2] == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(s[0] + s[1] + s[2] == doctest::Approx(0.0).epsilon(1e-14));
      double v1[2], d1[2], s1[2];
      shape_q1(z, v1, d1, s1);
      CHECK(v1[0] + v1[1] == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(d1[0] + d1[1] == 0.0);
    }
  }

  TEST_CASE("cell table: weights and basis sums") {
    Mesh mesh(box(), 4);
    const CellBasisTable tab = make_cell_table(mesh, 3);
    CHECK(tab.points() == 27);
    double wsum = 0.0;
    for (int q = 0; q < tab.points(); ++q) {
      wsum += tab.weight[q];
      double vs = 0.0, gs[3] = {0, 0, 0}, ps = 0.0;
      for (int n = 0; n < 27; ++n) {
        vs += tab.q2_val[q][n];
        for (int ax = 0; ax < 3; ++ax) gs[ax] += tab.q2_grad[q][n][ax];
      }
      for (int n = 0; n < 8; ++n) ps += tab.q1_val[q][n];
      CHECK(vs == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(ps == doctest::Approx(1.0).epsilon(1e-13));
      for (int ax = 0; ax < 3; ++ax)
        CHECK(gs[ax] == doctest::Approx(0.0).epsilon(1e-12));
    }
    // Total weight equals the cell volume h1*h2*h3.
    CHECK(wsum == doctest::Approx(0.25 * 0.25 * 0.5).epsilon(1e-13));

    // Quadrature point physical coordinates live inside the right cell.
    const auto x = tab.point(mesh, 1, 2, 3, 0);
    CHECK(x[0] > 0.25);
    CHECK(x[0] < 0.50);
    CHECK(x[1] > 1.50);
    CHECK(x[1] < 1.75);
    CHECK(x[2] > 0.50);
    CHECK(x[2] < 1.00);
  }

  TEST_CASE("face table: pinned direction and area weights") {
    Mesh mesh(box(), 4);
    const FaceBasisTable ft = make_face_table(mesh, 0, 1, 3);
    CHECK(ft.points() == 9);
    double wsum = 0.0;
    for (int q = 0; q < ft.points(); ++q) wsum += ft.weight[q];
    CHECK(wsum == doctest::Approx(0.25 * 0.5).epsilon(1e-13));
    // On the high x1 face only local nodes with a = 2 can be active.
    for (int q = 0; q < ft.points(); ++q)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b <= 2; ++b)
          for (int c = 0; c <= 2; ++c)
            CHECK(ft.q2_val[q][(a * 3 + b) * 3 + c] == 0.0);
    const auto x = ft.point(mesh, 0, 0, 0);
    CHECK(x[0] == doctest::Approx(1.0));
  }

  TEST_CASE("triquadratic interpolation reproduces quadratic jets exactly") {
    Mesh mesh(box(), 4);
    const NodeGrid grid = mesh.grid(2);
    const Eigen::VectorXd nodal = interpolate_nodes(
        grid,
        [](double a, double b, double c) { return poly_field(a, b, c).v; });
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      const double x1 = rng.uniform(0.01, 0.99);
      const double x2 = rng.uniform(1.01, 1.99);
      const double xi = rng.uniform(-0.99, 0.99);
      const FieldJet got = scalar_jet(grid, nodal, x1, x2, xi);
      const FieldJet want = poly_field(x1, x2, xi);
      CHECK(got.v == doctest::Approx(want.v).epsilon(1e-12));
      for (int ax = 0; ax < 3; ++ax)
        CHECK(got.d[ax] == doctest::Approx(want.d[ax]).epsilon(1e-11));
      for (int k = 0; k < 6; ++k)
        CHECK(got.dd[k] == doctest::Approx(want.dd[k]).epsilon(1e-10));
    }
  }

  TEST_CASE("trilinear interpolation reproduces linear jets exactly") {
    Mesh mesh(box(), 4);
    const NodeGrid grid = mesh.grid(1);
    auto f = [](double a, double b, double c) {
      FieldJet x = FieldJet::coordinate(0, a);
      FieldJet y = FieldJet::coordinate(1, b);
      FieldJet z = FieldJet::coordinate(2, c);
      return (1.0 + 2.0 * x) * (y - 0.5) * (1.0 - z * 0.25);
    };
    const Eigen::VectorXd nodal = interpolate_nodes(
        grid, [&](double a, double b, double c) { return f(a, b, c).v; });
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const double x1 = rng.uniform(0.01, 0.99);
      const double x2 = rng.uniform(1.01, 1.99);
      const double xi = rng.uniform(-0.99, 0.99);
      const FieldJet got = scalar_jet(grid, nodal, x1, x2, xi);
      const FieldJet want = f(x1, x2, xi);
      CHECK(got.v == doctest::Approx(want.v).epsilon(1e-13));
      for (int ax = 0; ax < 3; ++ax)
        CHECK(got.d[ax] == doctest::Approx(want.d[ax]).epsilon(1e-12));
    }
  }

  TEST_CASE("velocity expand/restrict round trip") {
    Mesh mesh(box(), 2);
    FESpacePair sp(mesh);
    Rng rng(3);
    Eigen::VectorXd u(sp.vel_dofs());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
    const auto full = expand_velocity(sp, u);
    // Wall nodes are zero in the expansion.
    for (int a = 0; a < sp.vnodes.m[0]; ++a)
      for (int b = 0; b < sp.vnodes.m[1]; ++b)
        for (int c = 0; c < sp.vnodes.m[2]; ++c)
          if (sp.wall_node(a, b, c))
            for (int comp = 0; comp < 3; ++comp)
              CHECK(full[comp][sp.vnodes.index(a, b, c)] == 0.0);
    const Eigen::VectorXd back = restrict_velocity(sp, full);
    CHECK((back - u).norm() == 0.0);
  }
}
