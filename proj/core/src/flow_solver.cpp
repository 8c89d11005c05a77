#include "bladepass/flow_solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "bladepass/rng.hpp"

namespace bladepass {

namespace {

LoadData wire_loads(const FlowData& data) {
  LoadData ld;
  ld.centrifugal = data.centrifugal;
  if (data.body) ld.body = &data.body;
  if (data.inflow) ld.inflow = &data.inflow;
  if (data.outflow) ld.outflow = &data.outflow;
  return ld;
}

}  // namespace

FlowState solve_stationary(const BladeSurface& theta, const FlowData& data,
                           const SolverConfig& cfg, const FESpacePair& sp,
                           const GeometryParams& params,
                           const Eigen::VectorXd* warm_start) {
  if (!(cfg.picard_tol > 0.0))
    throw std::invalid_argument("solve_stationary: picard_tol must be > 0");
  if (cfg.max_iters < 1)
    throw std::invalid_argument("solve_stationary: max_iters must be >= 1");
  if (!(cfg.relaxation > 0.0) || cfg.relaxation > 1.0)
    throw std::invalid_argument("solve_stationary: relaxation not in (0,1]");

  AssemblyOptions opt;
  opt.order = cfg.quad_order;
  const int nv = sp.vel_dofs();
  const int np = sp.pre_dofs();

  const LoadData ld = wire_loads(data);
  const Eigen::VectorXd rhs = assemble_load(ld, theta, sp, params, opt);
  const double fnorm = rhs.norm();
  const double scale = fnorm > 0.0 ? fnorm : 1.0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(sp.total_dofs());
  if (warm_start) {
    if (warm_start->size() != nv)
      throw std::invalid_argument("solve_stationary: warm start size mismatch");
    x.head(nv) = *warm_start;
  }
  Eigen::VectorXd wk = x.head(nv);

  OperatorBlocks blocks;
  blocks.convect_at = &wk;
  SparseMat S = assemble_saddle(blocks, theta, sp, params, opt);
  S.makeCompressed();

  std::vector<double> history;
  double resid = (S * x - rhs).norm() / scale;
  history.push_back(resid);

  if (resid > cfg.picard_tol) {
    SaddleFactorization fact(cfg.backend);
    fact.analyze(S);
    double tau = cfg.relaxation;
    bool halved = false;
    int rising = 0;
    for (int it = 0; it < cfg.max_iters && resid > cfg.picard_tol; ++it) {
      if (!fact.factorize(S))
        throw std::runtime_error(
            "solve_stationary: singular saddle-point operator (numeric "
            "factorization failed)");
      const Eigen::VectorXd xs = fact.solve(rhs);
      x = (1.0 - tau) * x + tau * xs;
      wk = x.head(nv);
      refill_saddle(S, blocks, theta, sp, params, opt);
      resid = (S * x - rhs).norm() / scale;
      if (!(resid < history.back())) {
        ++rising;
        if (!halved) {
          tau *= 0.5;
          halved = true;
        }
        if (rising >= 5) {
          history.push_back(resid);
          throw PicardError(
              "solve_stationary: Picard iteration diverged (residual grew "
              "over 5 consecutive iterations)",
              history);
        }
      } else {
        rising = 0;
      }
      history.push_back(resid);
    }
    if (resid > cfg.picard_tol)
      throw PicardError(
          "solve_stationary: Picard iteration did not reach tolerance within "
          "max_iters",
          history);
  }

  FlowState state;
  state.w = x.head(nv);
  state.p = x.tail(np);
  state.picard_residuals = std::move(history);
  const SparseMat Ge = assemble_energy_gram(theta, sp, params, opt);
  state.energy_norm = std::sqrt(std::max(0.0, state.w.dot(Ge * state.w)));

  if (cfg.check_apriori) {
    FormConstants fc;
    if (cfg.constants)
      fc = *cfg.constants;
    else
      fc = measure_form_constants(theta, sp, params, 24, 1234, opt);
    state.apriori =
        check_apriori(state.w, rhs.head(nv), fc, theta, sp, params, opt);
  }
  return state;
}

StrongSample strong_residual(const std::array<FieldJet, 3>& w,
                             const FieldJet& p, const SurfaceJet& theta,
                             double r, const GeometryParams& params) {
  StrongSample out;
  out.momentum = strong_momentum_residual(w, p, theta, r, params);
  out.divergence = w[0].d[0] + w[1].d[1] + w[1].v / r + w[2].d[2];
  return out;
}

EnergyReport energy_report(const FlowState& state, const BladeSurface& theta,
                           const FESpacePair& sp, const GeometryParams& params,
                           const AssemblyOptions& opt) {
  EnergyReport rep;
  const SparseMat Ge = assemble_energy_gram(theta, sp, params, opt);
  const SparseMat G1 = assemble_h1_gram(sp, opt);
  rep.energy_norm = std::sqrt(std::max(0.0, state.w.dot(Ge * state.w)));
  rep.h1_seminorm = std::sqrt(std::max(0.0, state.w.dot(G1 * state.w)));
  rep.ratio = rep.h1_seminorm > 0.0 ? rep.energy_norm / rep.h1_seminorm : 0.0;
  return rep;
}

FormConstants measure_form_constants(const BladeSurface& theta,
                                     const FESpacePair& sp,
                                     const GeometryParams& params,
                                     int samples, std::uint64_t seed,
                                     const AssemblyOptions& opt) {
  FormConstants out;
  const SparseMat A = assemble_viscous(theta, sp, params, opt);
  const SparseMat G1 = assemble_h1_gram(sp, opt);

  Eigen::SimplicialLDLT<SparseMat> a_solver(A);
  if (a_solver.info() != Eigen::Success)
    throw std::runtime_error(
        "measure_form_constants: viscous factorization failed");

  // Inverse iteration on A^{-1} G_1 converges to the reciprocal of the
  // smallest eigenvalue of the pencil (A, G_1), i.e. the sharpest constant
  // in  u^T A u >= lambda |u|_1^2; the Rayleigh quotient supplies a cheap
  // stopping rule.
  Rng rng(seed);
  Eigen::VectorXd v(sp.vel_dofs());
  for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  double rq = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd y = a_solver.solve(G1 * v);
    y /= y.norm();
    const double next = y.dot(A * y) / y.dot(G1 * y);
    v = y;
    if (it > 3 && std::abs(next - rq) <= 1e-10 * std::abs(next)) {
      rq = next;
      break;
    }
    rq = next;
  }
  out.coercivity = rq / params.mu;

  // Sampled continuity modulus of the trilinear form: for each random
  // transport field u with |u|_1 = 1, the sup over (w, v) is the operator
  // norm of G^{-1/2} N(u) G^{-1/2}, estimated by power iteration on the
  // G_1-self-adjoint operator G^{-1} N^T G^{-1} N.
  Eigen::SimplicialLDLT<SparseMat> g_solver(G1);
  if (g_solver.info() != Eigen::Success)
    throw std::runtime_error(
        "measure_form_constants: gram factorization failed");
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(sp.vel_dofs());
    for (int i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
    u /= std::sqrt(u.dot(G1 * u));
    const SparseMat N = assemble_convection(u, theta, sp, params, opt);
    Eigen::VectorXd z(sp.vel_dofs());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform(-1.0, 1.0);
    z /= std::sqrt(z.dot(G1 * z));
    for (int it = 0; it < 12; ++it) {
      z = g_solver.solve(N.transpose() * g_solver.solve(N * z));
      z /= std::sqrt(z.dot(G1 * z));
    }
    const Eigen::VectorXd nz = N * z;
    const double opn = std::sqrt(std::max(0.0, nz.dot(g_solver.solve(nz))));
    best = std::max(best, opn);
  }
  out.trilinear = best;
  return out;
}

AprioriBound check_apriori(const Eigen::VectorXd& w,
                           const Eigen::VectorXd& f_velocity,
                           const FormConstants& constants,
                           const BladeSurface& theta, const FESpacePair& sp,
                           const GeometryParams& params,
                           const AssemblyOptions& opt) {
  (void)theta;
  (void)params;
  AprioriBound out;
  const SparseMat G1 = assemble_h1_gram(sp, opt);
  Eigen::SimplicialLDLT<SparseMat> g_solver(G1);
  if (g_solver.info() != Eigen::Success)
    throw std::runtime_error("check_apriori: gram factorization failed");
  out.f_dual =
      std::sqrt(std::max(0.0, f_velocity.dot(g_solver.solve(f_velocity))));
  out.w_h1 = std::sqrt(std::max(0.0, w.dot(G1 * w)));
  const double cmu = constants.coercivity * params.mu;
  const double c1 = constants.trilinear;
  out.threshold = c1 > 0.0 ? cmu * cmu / (4.0 * c1) : 0.0;
  out.small_data = c1 > 0.0 && out.f_dual <= out.threshold;
  if (out.small_data) {
    const double sigma = out.f_dual / out.threshold;
    out.predicted_cap = (cmu / (2.0 * c1)) * (1.0 - std::sqrt(1.0 - sigma));
    out.holds = out.w_h1 <= out.predicted_cap * (1.0 + 1e-8);
  }
  return out;
}

}  // namespace bladepass
