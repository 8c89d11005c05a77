#include "bladepass/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bladepass {

Mesh::Mesh(const DomainSpec& d, int n3_cells) : dom(d), n3(n3_cells) {
  dom.validate();
  if (n3 < 2) throw std::invalid_argument("Mesh: n3 must be at least 2");
}

NodeGrid Mesh::grid(int deg) const {
  NodeGrid g;
  g.deg = deg;
  for (int ax = 0; ax < 3; ++ax) {
    g.m[ax] = deg * cells(ax) + 1;
    g.lo[ax] = lo(ax);
    g.h[ax] = spacing(ax);
  }
  return g;
}

std::array<BoundaryPatch, 6> Mesh::boundary_patches() const {
  return {{{0, 0, FaceTag::inflow},
           {0, 1, FaceTag::outflow},
           {1, 0, FaceTag::wall},
           {1, 1, FaceTag::wall},
           {2, 0, FaceTag::wall},
           {2, 1, FaceTag::wall}}};
}

FESpacePair::FESpacePair(const Mesh& m)
    : mesh(m), vnodes(m.grid(2)), pnodes(m.grid(1)) {
  free_of_node.assign(vnodes.count(), -1);
  node_of_free.reserve(vnodes.count());
  for (int a = 0; a < vnodes.m[0]; ++a)
    for (int b = 0; b < vnodes.m[1]; ++b)
      for (int c = 0; c < vnodes.m[2]; ++c) {
        if (wall_node(a, b, c)) continue;
        const int n = vnodes.index(a, b, c);
        free_of_node[n] = free_count++;
        node_of_free.push_back(n);
      }
}

void shape_q2(double z, double val[3], double der[3], double dd[3]) {
  val[0] = 0.5 * z * (z - 1.0);
  val[1] = (1.0 - z) * (1.0 + z);
  val[2] = 0.5 * z * (z + 1.0);
  der[0] = z - 0.5;
  der[1] = -2.0 * z;
  der[2] = z + 0.5;
  dd[0] = 1.0;
  dd[1] = -2.0;
  dd[2] = 1.0;
}

void shape_q1(double z, double val[2], double der[2], double dd[2]) {
  val[0] = 0.5 * (1.0 - z);
  val[1] = 0.5 * (1.0 + z);
  der[0] = -0.5;
  der[1] = 0.5;
  dd[0] = dd[1] = 0.0;
}

void cell_q2_nodes(const Mesh& mesh, int ci, int cj, int ck, int out[27]) {
  const NodeGrid g = mesh.grid(2);
  int k = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        out[k++] = g.index(2 * ci + a, 2 * cj + b, 2 * ck + c);
}

void cell_q1_nodes(const Mesh& mesh, int ci, int cj, int ck, int out[8]) {
  const NodeGrid g = mesh.grid(1);
  int k = 0;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b)
      for (int c = 0; c <= 1; ++c)
        out[k++] = g.index(ci + a, cj + b, ck + c);
}

std::array<double, 3> CellBasisTable::point(const Mesh& m, int ci, int cj,
                                            int ck, int q) const {
  const int cell[3] = {ci, cj, ck};
  std::array<double, 3> x;
  for (int ax = 0; ax < 3; ++ax) {
    const double h = m.spacing(ax);
    x[ax] = m.lo(ax) + h * cell[ax] + 0.5 * h * (rule.points[q][ax] + 1.0);
  }
  return x;
}

CellBasisTable make_cell_table(const Mesh& mesh, int order) {
  CellBasisTable t;
  t.rule = tensor_rule_3d(order);
  const double h[3] = {mesh.spacing(0), mesh.spacing(1), mesh.spacing(2)};
  t.jac = h[0] * h[1] * h[2] / 8.0;
  const int nq = t.points();
  t.weight.resize(nq);
  t.q2_val.resize(nq);
  t.q2_grad.resize(nq);
  t.q1_val.resize(nq);
  for (int q = 0; q < nq; ++q) {
    t.weight[q] = t.rule.weights[q] * t.jac;
    double v2[3][3], d2[3][3], s2[3][3];
    double v1[3][2], d1[3][2], s1[3][2];
    for (int ax = 0; ax < 3; ++ax) {
      shape_q2(t.rule.points[q][ax], v2[ax], d2[ax], s2[ax]);
      shape_q1(t.rule.points[q][ax], v1[ax], d1[ax], s1[ax]);
    }
    int n = 0;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b)
        for (int c = 0; c <= 2; ++c, ++n) {
          t.q2_val[q][n] = v2[0][a] * v2[1][b] * v2[2][c];
          t.q2_grad[q][n] = {d2[0][a] * v2[1][b] * v2[2][c] * (2.0 / h[0]),
                             v2[0][a] * d2[1][b] * v2[2][c] * (2.0 / h[1]),
                             v2[0][a] * v2[1][b] * d2[2][c] * (2.0 / h[2])};
        }
    n = 0;
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        for (int c = 0; c <= 1; ++c, ++n)
          t.q1_val[q][n] = v1[0][a] * v1[1][b] * v1[2][c];
  }
  return t;
}

std::array<double, 3> FaceBasisTable::point(const Mesh& m, int ca, int cb,
                                            int q) const {
  int run[2], nr = 0;
  for (int ax = 0; ax < 3; ++ax)
    if (ax != axis) run[nr++] = ax;
  const int cell[2] = {ca, cb};
  std::array<double, 3> x;
  x[axis] = side == 0 ? m.lo(axis) : m.lo(axis) + m.spacing(axis) * m.cells(axis);
  for (int j = 0; j < 2; ++j) {
    const int ax = run[j];
    const double h = m.spacing(ax);
    x[ax] = m.lo(ax) + h * cell[j] + 0.5 * h * (rule.points[q][j] + 1.0);
  }
  return x;
}

FaceBasisTable make_face_table(const Mesh& mesh, int axis, int side,
                               int order) {
  if (axis < 0 || axis > 2 || side < 0 || side > 1)
    throw std::invalid_argument("make_face_table: bad axis/side");
  FaceBasisTable t;
  t.axis = axis;
  t.side = side;
  t.rule = tensor_rule_2d(order);
  int run[2], nr = 0;
  for (int ax = 0; ax < 3; ++ax)
    if (ax != axis) run[nr++] = ax;
  const double h[3] = {mesh.spacing(0), mesh.spacing(1), mesh.spacing(2)};
  t.jac = h[run[0]] * h[run[1]] / 4.0;
  const double pin = side == 0 ? -1.0 : 1.0;
  const int nq = t.points();
  t.weight.resize(nq);
  t.q2_val.resize(nq);
  t.q2_grad.resize(nq);
  t.q1_val.resize(nq);
  for (int q = 0; q < nq; ++q) {
    t.weight[q] = t.rule.weights[q] * t.jac;
    double zeta[3];
    zeta[axis] = pin;
    zeta[run[0]] = t.rule.points[q][0];
    zeta[run[1]] = t.rule.points[q][1];
    double v2[3][3], d2[3][3], s2[3][3];
    double v1[3][2], d1[3][2], s1[3][2];
    for (int ax = 0; ax < 3; ++ax) {
      shape_q2(zeta[ax], v2[ax], d2[ax], s2[ax]);
      shape_q1(zeta[ax], v1[ax], d1[ax], s1[ax]);
    }
    int n = 0;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b)
        for (int c = 0; c <= 2; ++c, ++n) {
          t.q2_val[q][n] = v2[0][a] * v2[1][b] * v2[2][c];
          t.q2_grad[q][n] = {d2[0][a] * v2[1][b] * v2[2][c] * (2.0 / h[0]),
                             v2[0][a] * d2[1][b] * v2[2][c] * (2.0 / h[1]),
                             v2[0][a] * v2[1][b] * d2[2][c] * (2.0 / h[2])};
        }
    n = 0;
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        for (int c = 0; c <= 1; ++c, ++n)
          t.q1_val[q][n] = v1[0][a] * v1[1][b] * v1[2][c];
  }
  return t;
}

Eigen::VectorXd interpolate_nodes(
    const NodeGrid& grid,
    const std::function<double(double, double, double)>& f) {
  Eigen::VectorXd out(grid.count());
  for (int a = 0; a < grid.m[0]; ++a)
    for (int b = 0; b < grid.m[1]; ++b)
      for (int c = 0; c < grid.m[2]; ++c)
        out[grid.index(a, b, c)] =
            f(grid.coord(0, a), grid.coord(1, b), grid.coord(2, c));
  return out;
}

FieldJet scalar_jet(const NodeGrid& grid, const Eigen::VectorXd& nodal,
                    double x1, double x2, double xi) {
  if (nodal.size() != grid.count())
    throw std::invalid_argument("scalar_jet: coefficient size mismatch");
  const double x[3] = {x1, x2, xi};
  int cell[3];
  double zeta[3];
  for (int ax = 0; ax < 3; ++ax) {
    const int ncells = (grid.m[ax] - 1) / grid.deg;
    const double h = grid.h[ax];
    int c = static_cast<int>(std::floor((x[ax] - grid.lo[ax]) / h));
    c = std::clamp(c, 0, ncells - 1);
    cell[ax] = c;
    zeta[ax] = 2.0 * (x[ax] - grid.lo[ax] - c * h) / h - 1.0;
  }
  // Per-axis shape data scaled to physical derivatives.
  double val[3][3], der[3][3], sec[3][3];
  const int nn = grid.deg + 1;
  for (int ax = 0; ax < 3; ++ax) {
    if (grid.deg == 2)
      shape_q2(zeta[ax], val[ax], der[ax], sec[ax]);
    else
      shape_q1(zeta[ax], val[ax], der[ax], sec[ax]);
    const double s = 2.0 / grid.h[ax];
    for (int i = 0; i < nn; ++i) {
      der[ax][i] *= s;
      sec[ax][i] *= s * s;
    }
  }
  FieldJet j;
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b)
      for (int c = 0; c < nn; ++c) {
        const double coef = nodal[grid.index(grid.deg * cell[0] + a,
                                             grid.deg * cell[1] + b,
                                             grid.deg * cell[2] + c)];
        if (coef == 0.0) continue;
        const double f[3] = {val[0][a], val[1][b], val[2][c]};
        const double g[3] = {der[0][a], der[1][b], der[2][c]};
        const double s[3] = {sec[0][a], sec[1][b], sec[2][c]};
        j.v += coef * f[0] * f[1] * f[2];
        j.d[0] += coef * g[0] * f[1] * f[2];
        j.d[1] += coef * f[0] * g[1] * f[2];
        j.d[2] += coef * f[0] * f[1] * g[2];
        j.dd[0] += coef * s[0] * f[1] * f[2];
        j.dd[1] += coef * f[0] * s[1] * f[2];
        j.dd[2] += coef * f[0] * f[1] * s[2];
        j.dd[3] += coef * g[0] * g[1] * f[2];
        j.dd[4] += coef * g[0] * f[1] * g[2];
        j.dd[5] += coef * f[0] * g[1] * g[2];
      }
  return j;
}

std::array<Eigen::VectorXd, 3> expand_velocity(const FESpacePair& sp,
                                               const Eigen::VectorXd& u) {
  std::array<Eigen::VectorXd, 3> full;
  const int nn = sp.vnodes.count();
  for (int c = 0; c < 3; ++c) full[c] = Eigen::VectorXd::Zero(nn);
  for (int f = 0; f < sp.free_count; ++f) {
    const int node = sp.node_of_free[f];
    for (int c = 0; c < 3; ++c) full[c][node] = u[3 * f + c];
  }
  return full;
}

Eigen::VectorXd restrict_velocity(const FESpacePair& sp,
                                  const std::array<Eigen::VectorXd, 3>& full) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.vel_dofs());
  for (int f = 0; f < sp.free_count; ++f) {
    const int node = sp.node_of_free[f];
    for (int c = 0; c < 3; ++c) u[3 * f + c] = full[c][node];
  }
  return u;
}

}  // namespace bladepass
