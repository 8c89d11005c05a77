#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>

#include "bladepass/fe_space.hpp"
#include "bladepass/tensor_fields.hpp"

namespace bladepass {

using SparseMat = Eigen::SparseMatrix<double>;

struct AssemblyOptions {
  int order = 3;        // Gauss points per direction
  double lambda = 0.0;  // second viscosity passed to the stress contraction
};

// Viscous stiffness of a(w, v) on the free velocity dofs.  Filled on the
// upper triangle and mirrored, so the result is symmetric bitwise.
SparseMat assemble_viscous(const BladeSurface& surface, const FESpacePair& sp,
                           const GeometryParams& params,
                           const AssemblyOptions& opt = {});

// Coriolis coupling; antisymmetric by construction of the pointwise kernel.
SparseMat assemble_coriolis(const BladeSurface& surface, const FESpacePair& sp,
                            const GeometryParams& params,
                            const AssemblyOptions& opt = {});

// Convection linearized at the velocity carried in the leading vel_dofs()
// entries of u: rows test, cols trial, pairing b(u; trial, test).
SparseMat assemble_convection(const Eigen::VectorXd& u,
                              const BladeSurface& surface,
                              const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt = {});

// Pressure-velocity coupling (q, div w): rows pressure nodes, cols velocity
// dofs.  The divergence itself is surface-independent; the parameters enter
// only through the eps*r measure, kept identical to the saddle's B block.
SparseMat assemble_divergence(const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt = {});

// Gram matrix of the mesh-independent energy inner product ((w, v)) and the
// plain coordinate H1 seminorm Gram (Lebesgue measure, no metric weight).
SparseMat assemble_energy_gram(const BladeSurface& surface,
                               const FESpacePair& sp,
                               const GeometryParams& params,
                               const AssemblyOptions& opt = {});
SparseMat assemble_h1_gram(const FESpacePair& sp,
                           const AssemblyOptions& opt = {});

// Body force and traction data.  Components are covariant: the load pairs
// f_i v^i and t_i v^i against the sqrt(g) = eps*r measure; traction data on
// the through-flow faces must already carry the outward-side sign.
using VolumeForce = std::function<std::array<double, 3>(double, double, double)>;
using FaceTraction = std::function<std::array<double, 3>(double, double)>;

struct LoadData {
  const VolumeForce* body = nullptr;
  const FaceTraction* inflow = nullptr;   // x1 = z0 face, data(x2, xi)
  const FaceTraction* outflow = nullptr;  // x1 = z1 face
  bool centrifugal = true;  // add the rotating-frame body force om^2 r e_r
};

Eigen::VectorXd assemble_load(const LoadData& data, const BladeSurface& surface,
                              const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt = {});

// Which velocity-block forms enter the saddle operator.  convect_at carries
// the transport term alone (the Picard operator); linearize_at carries the
// full convection Jacobian, transport plus the reaction term that couples the
// trial values to the frozen field's gradient (the sensitivity operator).
// Setting both is a contract violation.
struct OperatorBlocks {
  bool viscous = true;
  bool coriolis = true;
  const Eigen::VectorXd* convect_at = nullptr;    // b(w; u, v) only
  const Eigen::VectorXd* linearize_at = nullptr;  // b(w; u, v) + b(u; w, v)
};

// Full mixed operator
//   [ A + C + N(u)   -B^T ]
//   [ B                0  ]
// over [velocity; pressure] unknowns, assembled in a single deterministic
// cell pass.
SparseMat assemble_saddle(const OperatorBlocks& blocks,
                          const BladeSurface& surface, const FESpacePair& sp,
                          const GeometryParams& params,
                          const AssemblyOptions& opt = {});

// Recompute the saddle values in place on the pattern primed by a previous
// assemble_saddle over the same space (any block combination): the stored
// pattern is block-complete, so refills never allocate.  Used by the Picard
// loop, where triplet buffers and an existing factorization must not
// coexist at peak.
void refill_saddle(SparseMat& S, const OperatorBlocks& blocks,
                   const BladeSurface& surface, const FESpacePair& sp,
                   const GeometryParams& params,
                   const AssemblyOptions& opt = {});

// Kinetic energy flux through a through-flow face (side 0 = inflow z0,
// side 1 = outflow z1): 1/2 int |w|_g^2 w^1 sqrt(g) over the face.
double kinetic_face_flux(const Eigen::VectorXd& u, int side,
                         const BladeSurface& surface, const FESpacePair& sp,
                         const GeometryParams& params,
                         const AssemblyOptions& opt = {});

}  // namespace bladepass
