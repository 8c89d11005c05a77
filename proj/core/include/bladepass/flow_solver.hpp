#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bladepass/assembly.hpp"
#include "bladepass/linear_solver.hpp"

namespace bladepass {

// Problem data for the stationary solve.  All components are covariant;
// empty functions mean "absent".  Traction data on the through-flow faces
// must carry the outward-side sign.
struct FlowData {
  VolumeForce body;
  FaceTraction inflow;   // x1 = z0 face, data(x2, xi)
  FaceTraction outflow;  // x1 = z1 face
  bool centrifugal = true;
};

// Constants of the discrete forms entering the small-data existence bound:
// the coercivity constant is computed by inverse iteration on the pencil
// (A_visc, mu G_1); the trilinear constant is a sampled estimate of the
// continuity modulus of b over H1-normalized triples.
struct FormConstants {
  double coercivity = 0.0;  // largest c with  u^T A u >= c mu |u|_1^2
  double trilinear = 0.0;   // sup |b(u, w, v)| / (|u|_1 |w|_1 |v|_1), sampled
};

// Record of the a-priori bound check: with the dual norm taken directly
// against |.|_1, small data means f_dual <= (c mu)^2 / (4 c1) and then
// |w|_1 <= (c mu / 2 c1) (1 - sqrt(1 - f_dual / threshold)).
struct AprioriBound {
  double f_dual = 0.0;
  double threshold = 0.0;
  double predicted_cap = 0.0;
  double w_h1 = 0.0;
  bool small_data = false;
  bool holds = false;
};

struct FlowState {
  Eigen::VectorXd w;  // free velocity coefficients
  Eigen::VectorXd p;  // pressure coefficients
  std::vector<double> picard_residuals;  // residual per iterate, [0] = start
  double energy_norm = 0.0;              // ((w,w))^{1/2}
  std::optional<AprioriBound> apriori;
};

struct SolverConfig {
  double picard_tol = 1e-10;  // relative algebraic residual target
  int max_iters = 30;
  double relaxation = 1.0;  // in (0, 1]; halved once on the first increase
  DirectBackend backend = DirectBackend::automatic;
  int quad_order = 3;
  bool check_apriori = false;
  const FormConstants* constants = nullptr;  // measured on demand when null
};

// Nonlinear-iteration failure (divergence or running out of iterations),
// carrying the residual history up to the failure.
class PicardError : public std::runtime_error {
 public:
  PicardError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// Picard (frozen-transport) iteration for the stationary rotating flow:
// each step solves the mixed system linearized at the previous velocity,
// with the convection operator refilled in place on a frozen pattern and
// the symbolic factorization reused.  The optional warm start supplies the
// initial velocity iterate (free dofs).
FlowState solve_stationary(const BladeSurface& theta, const FlowData& data,
                           const SolverConfig& cfg, const FESpacePair& sp,
                           const GeometryParams& params,
                           const Eigen::VectorXd* warm_start = nullptr);

// Pointwise strong-form residual of the momentum equations (contravariant
// components, rotation and centrifugal terms included) and the divergence,
// from second-order jets.  Used to manufacture forcing.
struct StrongSample {
  std::array<double, 3> momentum;
  double divergence;
};
StrongSample strong_residual(const std::array<FieldJet, 3>& w,
                             const FieldJet& p, const SurfaceJet& theta,
                             double r, const GeometryParams& params);

struct EnergyReport {
  double energy_norm = 0.0;  // ((w,w))^{1/2}
  double h1_seminorm = 0.0;  // coordinate H1 seminorm |w|_1
  double ratio = 0.0;        // energy_norm / h1_seminorm, 0 when w = 0
};
EnergyReport energy_report(const FlowState& state, const BladeSurface& theta,
                           const FESpacePair& sp, const GeometryParams& params,
                           const AssemblyOptions& opt = {});

FormConstants measure_form_constants(const BladeSurface& theta,
                                     const FESpacePair& sp,
                                     const GeometryParams& params,
                                     int samples = 24,
                                     std::uint64_t seed = 1234,
                                     const AssemblyOptions& opt = {});

// Evaluate the small-data bound for a computed velocity against the load
// vector restricted to the velocity dofs.
AprioriBound check_apriori(const Eigen::VectorXd& w,
                           const Eigen::VectorXd& f_velocity,
                           const FormConstants& constants,
                           const BladeSurface& theta, const FESpacePair& sp,
                           const GeometryParams& params,
                           const AssemblyOptions& opt = {});

}  // namespace bladepass
