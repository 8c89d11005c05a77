#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bladepass/flow_solver.hpp"
#include "bladepass/sensitivity.hpp"
#include "bladepass/spline.hpp"

namespace bladepass {

// Design objectives over a converged flow state: the channel dissipation
// (quadratic in the strain) and the rate of work the rotating blade does on
// the fluid, read off the two blade-face tractions.
struct ObjectiveReport {
  double dissipation = 0.0;
  double impeller_work = 0.0;
  Eigen::VectorXd dissipation_cell;  // one entry per mesh cell
  Eigen::VectorXd work_cell;         // one entry per meridional cell
};

double dissipation_objective(const FlowState& state, const BladeSurface& theta,
                             const FESpacePair& sp,
                             const GeometryParams& params,
                             const AssemblyOptions& opt = {});
double impeller_work(const FlowState& state, const BladeSurface& theta,
                     const FESpacePair& sp, const GeometryParams& params,
                     const AssemblyOptions& opt = {});
ObjectiveReport evaluate_objectives(const FlowState& state,
                                    const BladeSurface& theta,
                                    const FESpacePair& sp,
                                    const GeometryParams& params,
                                    const AssemblyOptions& opt = {});

enum class ObjectiveModel { dissipation = 1, impeller_work = 2 };

// Strong-form coefficient fields of the work objective's stationarity
// condition, sampled on the design grid.  The grouping follows the shape
//   -(laplace_coeff * lap(Theta) + hess_coeff^{l,n} Theta_{nl})
//   + grad_quad_coeff^{n,m} Theta_n Theta_m + grad_coeff^l Theta_l + zero_coeff
// where zero_coeff excludes the state-response part, which couples to the
// test direction through the linearized flow and cannot be a fixed field.
struct WorkElCoefficients {
  Eigen::VectorXd laplace_coeff;    // vanishes with the blade-face velocity
  Eigen::MatrixXd hess_coeff;       // 4 cols, (l, n) row-major
  Eigen::MatrixXd grad_quad_coeff;  // 4 cols, (n, m) row-major
  Eigen::MatrixXd grad_coeff;       // 2 cols
  Eigen::VectorXd zero_coeff;
};

// Shape-gradient context for one objective at a fixed converged state: owns
// the factorized linearized operator (so many directions share one numeric
// factorization) and the direction-independent coefficient tables of the
// surface derivative.
//
// Two evaluation routes are exposed on purpose.  pairing() contracts the
// coefficients at quadrature points and resolves the direction's own flow
// response; it is the exact derivative of the discrete reduced objective and
// is what finite differences must reproduce.  pairing_projected() replaces
// the coefficients by their bicubic nodal projections, which is the form the
// strong-residual assemblies below integrate by parts exactly; the two
// routes agree up to projection error only.
//
// theta and sp must outlive the field.
class GradientField {
 public:
  GradientField(ObjectiveModel model, const FlowState& state,
                const BladeSurface& theta, const FESpacePair& sp,
                const GeometryParams& params,
                DirectBackend backend = DirectBackend::automatic,
                const AssemblyOptions& opt = {});
  ~GradientField();
  GradientField(GradientField&&) noexcept;
  GradientField& operator=(GradientField&&) noexcept;

  ObjectiveModel model() const;

  // Linearized flow response for a direction (shared factorization).
  SensitivityState sensitivity(const DirectionField& eta) const;

  // Full shape derivative along eta.
  double pairing(const DirectionField& eta) const;

  // State-response part of the pairing for an already computed response.
  double response_term(const SensitivityState& response) const;

  // Projected-coefficient variant.  For the dissipation model the response
  // enters as a frozen density built from *frozen (required); for the work
  // model the response term is added exactly as in pairing() when *frozen is
  // supplied and omitted when it is null.
  double pairing_projected(const DirectionField& eta,
                           const SensitivityState* frozen = nullptr) const;

  // Pairings against every interior design basis function.
  Eigen::VectorXd basis_pairings(const ThetaBasis& basis) const;

  // Inspection tables, one row per design-grid node.
  // Coefficients of eta_l and eta_{ls} in the surface derivative; the
  // curvature block is stored (l, s) row-major.
  const Eigen::MatrixXd& slope_coeff() const;
  const Eigen::MatrixXd& curvature_coeff() const;

  // Dissipation model extras: xi-integrated velocity moments
  //   w_moments:      int w^i w^j dxi, packed 00, 11, 22, 01, 02, 12
  //   w_grad_moments: int w^s d_l w^j dxi, column (s * 3 + j) * 2 + l
  // and the fourth-order stiffness 2 mu r^3 w_moments(a, s) delta_{b l}.
  const Eigen::MatrixXd& w_moments() const;
  const Eigen::MatrixXd& w_grad_moments() const;
  double stiffness(int node, int a, int b, int l, int s) const;

  // Work model extras: blade-face trace aggregates (mean of the two faces
  // and half their (+1) minus (-1) jump), and the grading of slope_coeff in
  // powers of the surface gradient: columns are the gradient-free part (2),
  // the linear part (l * 2 + n, 4), the quadratic part ((l * 2 + n) * 2 + m,
  // 8) and the cubic-and-curvature remainder (2).
  const Eigen::VectorXd& p_mean() const;
  const Eigen::VectorXd& p_jump() const;
  const Eigen::MatrixXd& w_mean() const;
  const Eigen::MatrixXd& w_jump() const;
  const Eigen::MatrixXd& slope_parts() const;

  // Strong-form coefficients of the work model (throws for dissipation).
  WorkElCoefficients el_coefficients() const;

 private:
  friend Eigen::VectorXd el_residual_dissipation(const GradientField&,
                                                 const SensitivityState&,
                                                 const ThetaBasis&);
  friend Eigen::VectorXd el_residual_work(const GradientField&,
                                          const ThetaBasis&);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper over GradientField.
double objective_gradient_pairing(ObjectiveModel model, const FlowState& state,
                                  const BladeSurface& theta,
                                  const DirectionField& eta,
                                  const FESpacePair& sp,
                                  const GeometryParams& params,
                                  DirectBackend backend =
                                      DirectBackend::automatic,
                                  const AssemblyOptions& opt = {});

// Weak residuals of the stationarity conditions against the interior design
// basis (the entries are coefficients of the cardinal test functions, so
// they read as a nodal residual field on the interior of D).  Both assemble
// the strong form with derivatives moved onto the projected coefficient
// fields, which pairing_projected undoes by exact integration by parts.
//
// The dissipation residual freezes the state response at the supplied
// solution, turning the response density into an ordinary field; the work
// residual resolves the response per test direction on the shared
// factorization.
Eigen::VectorXd el_residual_dissipation(const GradientField& field,
                                        const SensitivityState& response,
                                        const ThetaBasis& basis);
Eigen::VectorXd el_residual_work(const GradientField& field,
                                 const ThetaBasis& basis);

struct OptimizerConfig {
  ObjectiveModel model = ObjectiveModel::dissipation;
  int max_steps = 20;
  double step0 = 1.0;          // initial trial scale for the descent step
  double armijo_c = 1e-4;      // sufficient-decrease fraction, in (0, 1)
  double backtrack = 0.5;      // trial-scale shrink factor, in (0, 1)
  int max_backtracks = 20;
  double grad_tol = 1e-8;      // stop when the gradient norm drops below
  double k1_bound = 1.0;       // admissible sup |grad Theta|
  SolverConfig flow;           // nonlinear solve controls for every iterate

  void validate() const;  // throws std::invalid_argument
};

struct OptStep {
  double objective = 0.0;
  double grad_norm = 0.0;    // L2(D) norm of the Riesz representative
  double step_length = 0.0;  // accepted increment scale, 0 for the seed row
  bool projected = false;    // admissibility projection was active
  std::vector<double> theta_nodal;
};

struct OptimizationTrace {
  std::vector<OptStep> steps;
  bool failed = false;    // a trial flow solve diverged mid-run
  std::string failure;    // diagnostic when failed
};

// Stall: no admissible trial achieved sufficient decrease.  Carries the
// trace accumulated up to the stall for diagnosis.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, OptimizationTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const OptimizationTrace& trace() const { return trace_; }

 private:
  OptimizationTrace trace_;
};

// Projected gradient descent on the blade surface: at each iterate the
// gradient pairings over the interior basis are lifted to an L2(D) Riesz
// representative, the step is Armijo-backtracked on the re-solved objective,
// and trial surfaces violating sup |grad Theta| <= k1_bound are pulled back
// by scaling the whole increment (largest admissible fraction, by bisection,
// so an active projection lands on the bound).  The flow solve failing on a
// trial ends the run with the failure marker set; running out of admissible
// trials throws OptimizationError.
OptimizationTrace optimize(const BladeSurface& theta0, const FlowData& data,
                           const OptimizerConfig& cfg, const FESpacePair& sp,
                           const GeometryParams& params);

}  // namespace bladepass
