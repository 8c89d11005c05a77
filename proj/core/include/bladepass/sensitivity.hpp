#pragma once

#include "bladepass/assembly.hpp"
#include "bladepass/flow_solver.hpp"
#include "bladepass/linear_solver.hpp"

namespace bladepass {

// Directional derivative of the discrete residual in the surface at frozen
// state: the momentum rows collect the surface variations of the viscous,
// Coriolis, and convection densities (metric, Christoffel, and strain-kernel
// terms contracted with eta and its derivatives); the constraint rows are
// identically zero because the divergence form carries no surface
// dependence, and the load vector pairs fixed covariant data against the
// surface-independent measure, so it contributes nothing either.
Eigen::VectorXd shape_rhs(const FlowState& state, const BladeSurface& theta,
                          const DirectionField& eta, const FESpacePair& sp,
                          const GeometryParams& params,
                          const AssemblyOptions& opt = {});

struct SensitivityState {
  Eigen::VectorXd w_hat;
  Eigen::VectorXd p_hat;
  double residual = 0.0;  // linear residual relative to the load norm
};

// Linearized solves about one converged state: the operator
//   [ A + C + DN(w)   -B^T ]
//   [ B                 0  ]
// is assembled and factorized once in the constructor; each direction then
// costs one shape_rhs assembly and one back-substitution.  solve() is const
// and touches no mutable state, so distinct directions may run concurrently.
// The referenced surface and space must outlive the solver.
class SensitivitySolver {
 public:
  SensitivitySolver(const FlowState& state, const BladeSurface& theta,
                    const FESpacePair& sp, const GeometryParams& params,
                    DirectBackend backend = DirectBackend::automatic,
                    const AssemblyOptions& opt = {});

  SensitivityState solve(const DirectionField& eta) const;

 private:
  const BladeSurface& theta_;
  const FESpacePair& sp_;
  GeometryParams params_;
  AssemblyOptions opt_;
  FlowState state_;
  SparseMat S_;
  SaddleFactorization fact_;
};

// One-shot convenience: factorize, solve a single direction, discard.
SensitivityState solve_sensitivity(const FlowState& state,
                                   const BladeSurface& theta,
                                   const DirectionField& eta,
                                   const FESpacePair& sp,
                                   const GeometryParams& params,
                                   DirectBackend backend = DirectBackend::automatic,
                                   const AssemblyOptions& opt = {});

}  // namespace bladepass
