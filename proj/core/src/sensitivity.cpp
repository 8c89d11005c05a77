#include "bladepass/sensitivity.hpp"

#include <stdexcept>

namespace bladepass {

namespace {

// pack(de) for the frozen-velocity strain variation along eta:
// de = e_l[l] eta_l + e_ls[l][s] eta_ls.
std::array<double, 6> strain_variation6(const StrainShapeDerivSample& sd,
                                        const SurfaceJet& eta) {
  const double eg[2] = {eta.d1, eta.d2};
  double de[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int l = 0; l < 2; ++l) {
        acc += sd.e_l[l][i][j] * eg[l];
        for (int s = 0; s < 2; ++s)
          acc += sd.e_ls[l][s][i][j] * eta.hess(l, s);
      }
      de[i][j] = acc;
    }
  return sym_to6(de);
}

}  // namespace

Eigen::VectorXd shape_rhs(const FlowState& state, const BladeSurface& theta,
                          const DirectionField& eta, const FESpacePair& sp,
                          const GeometryParams& params,
                          const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const double eps = params.epsilon();
  const auto full = expand_velocity(sp, state.w.head(sp.vel_dofs()));
  Eigen::VectorXd R = Eigen::VectorXd::Zero(sp.total_dofs());

  int nodes[27];
  double wloc[27][3];
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        for (int n = 0; n < 27; ++n)
          for (int c = 0; c < 3; ++c) wloc[n][c] = full[c][nodes[n]];
        for (int q = 0; q < tab.points(); ++q) {
          const auto x = tab.point(mesh, ci, cj, ck, q);
          const double r = x[1];
          const SurfaceJet th = theta.jet(x[0], x[1]);
          const SurfaceJet ej = eta.jet(x[0], x[1]);
          const double wq = tab.weight[q] * eps * r;
          const auto& val = tab.q2_val[q];
          const auto& grad = tab.q2_grad[q];

          VelocityJet wj;
          for (int i = 0; i < 3; ++i) {
            wj.w[i] = 0.0;
            for (int ax = 0; ax < 3; ++ax) wj.dw[i][ax] = 0.0;
          }
          for (int n = 0; n < 27; ++n)
            for (int i = 0; i < 3; ++i) {
              wj.w[i] += wloc[n][i] * val[n];
              for (int ax = 0; ax < 3; ++ax)
                wj.dw[i][ax] += wloc[n][i] * grad[n][ax];
            }

          const MetricSample m = metric_at(th, r, params);
          const MetricVariation var = metric_variation(th, ej, r, params);
          const StrainSample sw = strain_rate(wj, th, r, params);
          const StrainShapeDerivSample sdw =
              strain_shape_derivs(wj, th, r, params);
          const VelocityGradientSample gw = covariant_gradient(wj, th, r, params);

          const Eigen::Matrix<double, 6, 6> S =
              stress_matrix(m, params.mu, opt.lambda);
          const Eigen::Matrix<double, 6, 6> Sv =
              stress_matrix_variation(m, var, params.mu, opt.lambda);
          const Vec6 pw(sym_to6(sw.e).data());
          const Vec6 pwd(strain_variation6(sdw, ej).data());
          // Row vectors against the test strain: the moving-coefficient part
          // and the moving-trial-strain part of the viscous variation.
          const Vec6 visc_row = Sv.transpose() * pw + S.transpose() * pwd;
          const Vec6 test_row = S * pw;  // pairs the moving test strain

          for (int n = 0; n < 27; ++n)
            for (int c = 0; c < 3; ++c) {
              const int dof = sp.vdof(nodes[n], c);
              if (dof < 0) continue;
              VelocityJet vj;
              vj.w[c] = val[n];
              for (int ax = 0; ax < 3; ++ax) vj.dw[c][ax] = grad[n][ax];
              const StrainSample sv = strain_rate(vj, th, r, params);
              const StrainShapeDerivSample sdv =
                  strain_shape_derivs(vj, th, r, params);
              const Vec6 pv(sym_to6(sv.e).data());
              const Vec6 pvd(strain_variation6(sdv, ej).data());

              double density = visc_row.dot(pv) + test_row.dot(pvd);
              double v3[3] = {0.0, 0.0, 0.0};
              v3[c] = val[n];
              density += coriolis_density_variation(wj.w, v3, ej, r, params);
              density +=
                  convection_density_variation(wj.w, wj.w, gw, v3, m, var);
              R[dof] += wq * density;
            }
        }
      }
  return R;
}

SensitivitySolver::SensitivitySolver(const FlowState& state,
                                     const BladeSurface& theta,
                                     const FESpacePair& sp,
                                     const GeometryParams& params,
                                     DirectBackend backend,
                                     const AssemblyOptions& opt)
    : theta_(theta),
      sp_(sp),
      params_(params),
      opt_(opt),
      state_(state),
      fact_(backend) {
  OperatorBlocks blocks;
  blocks.linearize_at = &state_.w;
  S_ = assemble_saddle(blocks, theta_, sp_, params_, opt_);
  S_.makeCompressed();
  fact_.analyze(S_);
  if (!fact_.factorize(S_))
    throw std::runtime_error(
        "sensitivity: linearized operator is singular; the base flow sits at "
        "or near a bifurcation point");
}

SensitivityState SensitivitySolver::solve(const DirectionField& eta) const {
  const Eigen::VectorXd rhs = -shape_rhs(state_, theta_, eta, sp_, params_, opt_);
  const Eigen::VectorXd x = fact_.solve(rhs);
  SensitivityState out;
  out.w_hat = x.head(sp_.vel_dofs());
  out.p_hat = x.tail(sp_.pre_dofs());
  const double scale = rhs.norm();
  out.residual = scale > 0.0 ? (S_ * x - rhs).norm() / scale : 0.0;
  return out;
}

SensitivityState solve_sensitivity(const FlowState& state,
                                   const BladeSurface& theta,
                                   const DirectionField& eta,
                                   const FESpacePair& sp,
                                   const GeometryParams& params,
                                   DirectBackend backend,
                                   const AssemblyOptions& opt) {
  SensitivitySolver solver(state, theta, sp, params, backend, opt);
  return solver.solve(eta);
}

}  // namespace bladepass
