#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bladepass/jets.hpp"
#include "bladepass/quadrature.hpp"
#include "bladepass/surface.hpp"

namespace bladepass {

// Structured tensor-product hexahedral mesh of the channel box
// Omega = D x [-1, 1], axis order (x1, x2, xi).  The surface resolution is
// taken from the domain spec so the blade spline grid and the mesh trace the
// same meridional lattice; xi gets its own cell count.
//
// Boundary tags: the hub/shroud faces (x2 = r0, r1) and the blade faces
// (xi = -1, 1) are walls with essential velocity conditions; the through-flow
// faces (x1 = z0, z1) carry natural traction data.
enum class FaceTag { wall, inflow, outflow };

struct BoundaryPatch {
  int axis;  // 0 = x1, 1 = x2, 2 = xi
  int side;  // 0 = low end, 1 = high end
  FaceTag tag;
};

// Tensor grid of nodes for one polynomial degree over a mesh.  Node spacing
// is h/deg along each axis; indices are lexicographic with xi fastest.
struct NodeGrid {
  int deg = 1;
  int m[3] = {0, 0, 0};       // nodes per direction
  double lo[3] = {0, 0, 0};   // box corner
  double h[3] = {0, 0, 0};    // cell spacing (not node spacing)

  int count() const { return m[0] * m[1] * m[2]; }
  int index(int a, int b, int c) const { return (a * m[1] + b) * m[2] + c; }
  double coord(int axis, int idx) const {
    return lo[axis] + h[axis] * idx / deg;
  }
};

struct Mesh {
  DomainSpec dom;
  int n3 = 2;

  Mesh(const DomainSpec& d, int n3_cells);

  int cells(int axis) const {
    return axis == 0 ? dom.n1 : axis == 1 ? dom.n2 : n3;
  }
  int cell_count() const { return dom.n1 * dom.n2 * n3; }
  double lo(int axis) const {
    return axis == 0 ? dom.z0 : axis == 1 ? dom.r0 : -1.0;
  }
  double spacing(int axis) const {
    return axis == 0 ? dom.h1() : axis == 1 ? dom.h2() : 2.0 / n3;
  }
  NodeGrid grid(int deg) const;
  std::array<BoundaryPatch, 6> boundary_patches() const;
};

// Taylor-Hood style pair on the structured mesh: continuous triquadratic
// velocity (three components, zero on the walls) and continuous trilinear
// pressure (unconstrained; the natural through-flow faces fix its level).
//
// Unknown layout: all free velocity dofs first (3 per free scalar node,
// component fastest), then the pressure nodes.
struct FESpacePair {
  Mesh mesh;
  NodeGrid vnodes;  // quadratic scalar grid
  NodeGrid pnodes;  // linear scalar grid
  std::vector<std::int32_t> free_of_node;  // scalar node -> free id, -1 = wall
  std::vector<std::int32_t> node_of_free;
  int free_count = 0;

  explicit FESpacePair(const Mesh& m);

  int vel_dofs() const { return 3 * free_count; }
  int pre_dofs() const { return pnodes.count(); }
  int total_dofs() const { return vel_dofs() + pre_dofs(); }
  // Global dof of (scalar node, component), or -1 on a wall.
  int vdof(int node, int comp) const {
    const std::int32_t f = free_of_node[node];
    return f < 0 ? -1 : 3 * f + comp;
  }
  bool wall_node(int /*a*/, int b, int c) const {
    return b == 0 || b == vnodes.m[1] - 1 || c == 0 || c == vnodes.m[2] - 1;
  }
};

// 1D reference shape functions on [-1, 1]; quadratic nodes at -1, 0, 1 and
// linear nodes at -1, 1.  Outputs: value, first and second derivative.
void shape_q2(double z, double val[3], double der[3], double dd[3]);
void shape_q1(double z, double val[2], double der[2], double dd[2]);

// Scalar node ids of one cell, lexicographic local ordering (x1 slowest,
// xi fastest), matching the basis tables below.
void cell_q2_nodes(const Mesh& mesh, int ci, int cj, int ck, int out[27]);
void cell_q1_nodes(const Mesh& mesh, int ci, int cj, int ck, int out[8]);

// Reference data shared by every cell of the uniform mesh: basis values and
// physical first derivatives at the tensor Gauss points, plus the physical
// quadrature weights (reference weight times the cell Jacobian).
struct CellBasisTable {
  QuadratureRule rule;
  double jac = 0.0;
  std::vector<double> weight;                              // [nq]
  std::vector<std::array<double, 27>> q2_val;              // [nq]
  std::vector<std::array<std::array<double, 3>, 27>> q2_grad;
  std::vector<std::array<double, 8>> q1_val;
  int points() const { return static_cast<int>(rule.points.size()); }
  // Physical coordinates of quadrature point q in cell (ci, cj, ck).
  std::array<double, 3> point(const Mesh& m, int ci, int cj, int ck,
                              int q) const;
};
CellBasisTable make_cell_table(const Mesh& mesh, int order);

// Same idea restricted to one boundary face of a cell: 2D Gauss points over
// the running axes, pinned reference coordinate on the chosen side.  The
// q2 arrays still cover all 27 nodes of the adjacent cell (most vanish).
struct FaceBasisTable {
  int axis = 0;
  int side = 0;
  QuadratureRule rule;       // 2D over the running axes, in increasing order
  double jac = 0.0;          // face area Jacobian
  std::vector<double> weight;
  std::vector<std::array<double, 27>> q2_val;
  std::vector<std::array<std::array<double, 3>, 27>> q2_grad;
  std::vector<std::array<double, 8>> q1_val;
  int points() const { return static_cast<int>(rule.points.size()); }
  // Physical coordinates of face point q for the cell with surface indices
  // (ca, cb) along the running axes (the pinned axis cell is implied).
  std::array<double, 3> point(const Mesh& m, int ca, int cb, int q) const;
};
FaceBasisTable make_face_table(const Mesh& mesh, int axis, int side,
                               int order);

// Nodal interpolation of a smooth callable f(x1, x2, xi).
Eigen::VectorXd interpolate_nodes(
    const NodeGrid& grid, const std::function<double(double, double, double)>& f);

// Value/gradient/Hessian of a nodal scalar field at an arbitrary point of
// the box (clamped into the nearest cell at the boundary).
FieldJet scalar_jet(const NodeGrid& grid, const Eigen::VectorXd& nodal,
                    double x1, double x2, double xi);

// Scatter the velocity part of a stacked solution vector into three full
// nodal arrays (walls zero), and the reverse restriction of full nodal data
// onto the free dofs.  The restriction simply drops wall values.
std::array<Eigen::VectorXd, 3> expand_velocity(const FESpacePair& sp,
                                               const Eigen::VectorXd& u);
Eigen::VectorXd restrict_velocity(const FESpacePair& sp,
                                  const std::array<Eigen::VectorXd, 3>& full);

}  // namespace bladepass
