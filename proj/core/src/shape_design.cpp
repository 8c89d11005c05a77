#include "bladepass/shape_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "bladepass/assembly.hpp"
#include "bladepass/geometry.hpp"
#include "bladepass/quadrature.hpp"
#include "bladepass/tensor_fields.hpp"

namespace bladepass {

namespace {

SurfaceJet unit_slope(int l) {
  SurfaceJet j;
  (l == 0 ? j.d1 : j.d2) = 1.0;
  return j;
}

// 2D Gauss lattice over the meridional cells, physical weights.
struct SurfacePoint {
  double x1, x2, wq;
};

std::vector<SurfacePoint> surface_quadrature(const DomainSpec& dom, int order) {
  const GaussRule g = gauss_rule(order);
  const double h1 = dom.h1(), h2 = dom.h2();
  std::vector<SurfacePoint> pts;
  pts.reserve(static_cast<std::size_t>(dom.n1) * dom.n2 * order * order);
  for (int ci = 0; ci < dom.n1; ++ci)
    for (int cj = 0; cj < dom.n2; ++cj)
      for (int qa = 0; qa < order; ++qa)
        for (int qb = 0; qb < order; ++qb)
          pts.push_back({dom.node1(ci) + 0.5 * h1 * (1.0 + g.points[qa]),
                         dom.node2(cj) + 0.5 * h2 * (1.0 + g.points[qb]),
                         0.25 * h1 * h2 * g.weights[qa] * g.weights[qb]});
  return pts;
}

SurfaceSpline project_nodal(const DomainSpec& dom,
                            const std::vector<double>& values) {
  return SurfaceSpline(dom.z0, dom.z1, dom.r0, dom.r1, dom.n1, dom.n2, values,
                       SurfaceSpline::EdgeSlopes::zero(dom.n1, dom.n2));
}

VelocityJet line_jet(const FESpacePair& sp,
                     const std::array<Eigen::VectorXd, 3>& full, double x1,
                     double x2, double xi) {
  std::array<FieldJet, 3> f = {scalar_jet(sp.vnodes, full[0], x1, x2, xi),
                               scalar_jet(sp.vnodes, full[1], x1, x2, xi),
                               scalar_jet(sp.vnodes, full[2], x1, x2, xi)};
  return VelocityJet::from_fields(f);
}

// ---------------------------------------------------------------------------
// dissipation model: xi-line data at one meridional point
// ---------------------------------------------------------------------------

// Everything the dissipation pairing needs at one surface point: velocity
// moments, the xi-integrated slope coefficient (metric variation plus strain
// shift, extracted against unit slope jets), and the curvature coefficient in
// moment form.  slope/curve carry the eps*r measure.
struct DissipationPoint {
  double wm[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double wgm[2][3][2] = {{{0, 0}, {0, 0}, {0, 0}}, {{0, 0}, {0, 0}, {0, 0}}};
  double slope[2] = {0, 0};
  double curve[2][2] = {{0, 0}, {0, 0}};
};

DissipationPoint dissipation_point(const FESpacePair& sp,
                                   const std::array<Eigen::VectorXd, 3>& wfull,
                                   const SurfaceJet& th, double x1, double x2,
                                   const GeometryParams& params,
                                   const AssemblyOptions& opt) {
  const double r = x2, eps = params.epsilon(), mu = params.mu;
  const MetricSample m = metric_at(th, r, params);
  const MetricVariation uvar[2] = {
      metric_variation(th, unit_slope(0), r, params),
      metric_variation(th, unit_slope(1), r, params)};
  const GaussRule g = gauss_rule(opt.order);
  const double h3 = sp.mesh.spacing(2);

  DissipationPoint out;
  for (int ck = 0; ck < sp.mesh.n3; ++ck) {
    const double lo = -1.0 + h3 * ck;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double xi = lo + 0.5 * h3 * (1.0 + g.points[q]);
      const double lw = 0.5 * h3 * g.weights[q];
      const VelocityJet wj = line_jet(sp, wfull, x1, x2, xi);
      const StrainSample st = strain_rate(wj, th, r, params);
      const StrainShapeDerivSample sd = strain_shape_derivs(wj, th, r, params);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.wm[i][j] += lw * wj.w[i] * wj.w[j];
      for (int s = 0; s < 2; ++s)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 2; ++l)
            out.wgm[s][j][l] += lw * wj.w[s] * wj.dw[j][l];
      for (int l = 0; l < 2; ++l)
        out.slope[l] +=
            lw * (viscous_contract_variation(st.e, st.e, m, uvar[l], mu) +
                  2.0 * viscous_contract(sd.e_l[l], st.e, m, mu));
    }
  }

  // Curvature coefficient reduced to moments: the xi-direction strain terms
  // telescope against the zero face traces, leaving first-moment terms plus
  // the second moments against the surface curvature.
  const std::array<double, 2> tg = th.grad();
  for (int l = 0; l < 2; ++l)
    for (int s = 0; s < 2; ++s) {
      double c = eps * out.wgm[s][2][l];
      for (int n = 0; n < 2; ++n)
        c += out.wgm[s][n][l] * tg[n] + out.wm[n][s] * th.hess(n, l);
      out.curve[l][s] = 2.0 * mu * r * r * c;
    }

  const double measure = eps * r;
  for (int l = 0; l < 2; ++l) {
    out.slope[l] *= measure;
    for (int s = 0; s < 2; ++s) out.curve[l][s] *= measure;
  }
  return out;
}

// xi-integral of twice the viscous cross pairing of two states, with the
// eps*r measure: the frozen response density of the dissipation model.
double dissipation_cross_density(const FESpacePair& sp,
                                 const std::array<Eigen::VectorXd, 3>& wfull,
                                 const std::array<Eigen::VectorXd, 3>& vfull,
                                 const SurfaceJet& th, double x1, double x2,
                                 const GeometryParams& params,
                                 const AssemblyOptions& opt) {
  const double r = x2;
  const MetricSample m = metric_at(th, r, params);
  const GaussRule g = gauss_rule(opt.order);
  const double h3 = sp.mesh.spacing(2);
  double acc = 0.0;
  for (int ck = 0; ck < sp.mesh.n3; ++ck) {
    const double lo = -1.0 + h3 * ck;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double xi = lo + 0.5 * h3 * (1.0 + g.points[q]);
      const double lw = 0.5 * h3 * g.weights[q];
      const StrainSample sw =
          strain_rate(line_jet(sp, wfull, x1, x2, xi), th, r, params);
      const StrainSample sv =
          strain_rate(line_jet(sp, vfull, x1, x2, xi), th, r, params);
      acc += lw * 2.0 * viscous_contract(sv.e, sw.e, m, params.mu);
    }
  }
  return acc * params.epsilon() * r;
}

// ---------------------------------------------------------------------------
// work model: blade-face trace data at one meridional point
// ---------------------------------------------------------------------------

struct FaceTraceJets {
  VelocityJet w;
  double p = 0.0;
};

// Coefficient data of the work pairing at one surface point, built from the
// two face traces.  slope/curve are the full integrand weights of eta_l and
// eta_{ls}; parts grades slope in powers of the surface gradient (constant,
// linear, quadratic, remainder); resp_* weight the response traces.
struct WorkPoint {
  double slope[2] = {0, 0};
  double curve[2][2] = {{0, 0}, {0, 0}};
  double parts[16] = {0};
  double p_mean = 0.0, p_jump = 0.0;
  double w_mean[3] = {0, 0, 0}, w_jump[3] = {0, 0, 0};
  double resp_p = 0.0;
  double resp_e3[2] = {0, 0};
  double resp_e33 = 0.0;
};

WorkPoint work_point(const FaceTraceJets& hi, const FaceTraceJets& lo,
                     const SurfaceJet& th, double x2,
                     const GeometryParams& params) {
  const double r = x2, eps = params.epsilon(), mu = params.mu;
  const double om = params.omega;
  const std::array<double, 2> tg = th.grad();
  const double gsq = tg[0] * tg[0] + tg[1] * tg[1];
  const double a = 1.0 + r * r * gsq;
  const double ier = 1.0 / (eps * r);
  const double c4 = 4.0 * mu * om / eps;  // common weight om*r * 4mu/(eps*r)

  const StrainSample sth = strain_rate(hi.w, th, r, params);
  const StrainSample stl = strain_rate(lo.w, th, r, params);
  const StrainShapeDerivSample sdh = strain_shape_derivs(hi.w, th, r, params);
  const StrainShapeDerivSample sdl = strain_shape_derivs(lo.w, th, r, params);
  const auto jump = [](double p, double m) { return 0.5 * (p - m); };

  // Jumps of the xi-row strain entries and of their slope/curvature shifts.
  double t3[3], tl[2][3], tls[2][2][3];
  for (int j = 0; j < 3; ++j) {
    t3[j] = jump(sth.e[2][j], stl.e[2][j]);
    for (int l = 0; l < 2; ++l) {
      tl[l][j] = jump(sdh.e_l[l][2][j], sdl.e_l[l][2][j]);
      for (int s = 0; s < 2; ++s)
        tls[l][s][j] = jump(sdh.e_ls[l][s][2][j], sdl.e_ls[l][s][2][j]);
    }
  }

  WorkPoint out;
  for (int l = 0; l < 2; ++l) {
    double v = r * t3[l] - 2.0 * r * r * tg[l] * ier * t3[2] - a * ier * tl[l][2];
    for (int n = 0; n < 2; ++n) v += r * tg[n] * tl[l][n];
    out.slope[l] = c4 * v;
    for (int s = 0; s < 2; ++s) {
      double c = -a * ier * tls[l][s][2];
      for (int n = 0; n < 2; ++n) c += r * tg[n] * tls[l][s][n];
      out.curve[l][s] = c4 * c;
    }
  }

  // Grading of slope in powers of the surface gradient, from the jumps of
  // the strain kernels (the xi-row kernels carry no hidden gradient):
  // constant + linear + quadratic + (cubic and curvature-trace) remainder.
  double f3[3], pl[2][3], pls[2][2][3], es[3];
  for (int j = 0; j < 3; ++j) {
    f3[j] = jump(sth.phi[2][j], stl.phi[2][j]);
    es[j] = jump(sth.e_star[2][j], stl.e_star[2][j]);
    for (int n = 0; n < 2; ++n) {
      pl[n][j] = jump(sth.psi_l[n][2][j], stl.psi_l[n][2][j]);
      for (int m2 = 0; m2 < 2; ++m2)
        pls[n][m2][j] = jump(sth.psi_ls[n][m2][2][j], stl.psi_ls[n][m2][2][j]);
    }
  }
  for (int l = 0; l < 2; ++l) {
    out.parts[l] = c4 * (r * f3[l] - ier * pl[l][2]);
    for (int n = 0; n < 2; ++n) {
      double v = r * (pl[n][l] + pl[l][n]) - ier * (pls[l][n][2] + pls[n][l][2]);
      if (l == n) v -= 2.0 * r * r * ier * f3[2];
      out.parts[2 + l * 2 + n] = c4 * v;
      for (int m2 = 0; m2 < 2; ++m2) {
        double q = r * (pls[n][m2][l] + pls[l][n][m2] + pls[n][l][m2]);
        if (m2 == l) q -= 2.0 * r * r * ier * pl[n][2];
        if (n == m2) q -= r * r * ier * pl[l][2];
        out.parts[6 + (l * 2 + n) * 2 + m2] = c4 * q;
      }
    }
    double rem = r * es[l];
    double quad = es[2];
    for (int n = 0; n < 2; ++n)
      for (int m2 = 0; m2 < 2; ++m2) quad += pls[n][m2][2] * tg[n] * tg[m2];
    rem -= 2.0 * r * r * tg[l] * ier * quad;
    double lin = 0.0;
    for (int n = 0; n < 2; ++n) lin += (pls[l][n][2] + pls[n][l][2]) * tg[n];
    rem -= r * r * gsq * ier * lin;
    out.parts[14 + l] = c4 * rem;
  }

  out.p_mean = 0.5 * (hi.p + lo.p);
  out.p_jump = jump(hi.p, lo.p);
  for (int i = 0; i < 3; ++i) {
    out.w_mean[i] = 0.5 * (hi.w.w[i] + lo.w.w[i]);
    out.w_jump[i] = jump(hi.w.w[i], lo.w.w[i]);
  }
  out.resp_p = 2.0 * om * r;
  for (int l = 0; l < 2; ++l) out.resp_e3[l] = c4 * r * tg[l];
  out.resp_e33 = -c4 * a * ier;
  return out;
}

void require_incompressible(const AssemblyOptions& opt) {
  if (opt.lambda != 0.0)
    throw std::invalid_argument(
        "shape derivatives are derived for zero second viscosity");
}

}  // namespace

// ---------------------------------------------------------------------------
// objectives
// ---------------------------------------------------------------------------

namespace {

double dissipation_total(const FlowState& state, const BladeSurface& theta,
                         const FESpacePair& sp, const GeometryParams& params,
                         const AssemblyOptions& opt, Eigen::VectorXd* cells) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const std::array<Eigen::VectorXd, 3> wfull = expand_velocity(sp, state.w);
  if (cells) cells->setZero(mesh.cell_count());

  double total = 0.0;
  int cell = 0;
  int ids[27];
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck, ++cell) {
        cell_q2_nodes(mesh, ci, cj, ck, ids);
        double wloc[3][27];
        for (int c = 0; c < 3; ++c)
          for (int n = 0; n < 27; ++n) wloc[c][n] = wfull[c][ids[n]];
        double acc = 0.0;
        for (int q = 0; q < tab.points(); ++q) {
          VelocityJet wj;
          for (int c = 0; c < 3; ++c)
            for (int n = 0; n < 27; ++n) {
              wj.w[c] += tab.q2_val[q][n] * wloc[c][n];
              for (int d = 0; d < 3; ++d)
                wj.dw[c][d] += tab.q2_grad[q][n][d] * wloc[c][n];
            }
          const std::array<double, 3> x = tab.point(mesh, ci, cj, ck, q);
          const SurfaceJet th = theta.jet(x[0], x[1]);
          const MetricSample m = metric_at(th, x[1], params);
          const StrainSample st = strain_rate(wj, th, x[1], params);
          acc += tab.weight[q] * m.sqrt_g *
                 viscous_contract(st.e, st.e, m, params.mu, opt.lambda);
        }
        total += acc;
        if (cells) (*cells)[cell] = acc;
      }
  return total;
}

double work_total(const FlowState& state, const BladeSurface& theta,
                  const FESpacePair& sp, const GeometryParams& params,
                  const AssemblyOptions& opt, Eigen::VectorXd* cells) {
  require_incompressible(opt);
  const Mesh& mesh = sp.mesh;
  const std::array<Eigen::VectorXd, 3> wfull = expand_velocity(sp, state.w);
  if (cells) cells->setZero(mesh.dom.n1 * mesh.dom.n2);

  double total = 0.0;
  int ids[27], pids[8];
  for (int side = 0; side < 2; ++side) {
    const FaceBasisTable ft = make_face_table(mesh, 2, side, opt.order);
    const int ck = side == 0 ? 0 : mesh.n3 - 1;
    const double sgn = side == 0 ? -1.0 : 1.0;
    for (int ci = 0; ci < mesh.dom.n1; ++ci)
      for (int cj = 0; cj < mesh.dom.n2; ++cj) {
        cell_q2_nodes(mesh, ci, cj, ck, ids);
        cell_q1_nodes(mesh, ci, cj, ck, pids);
        double wloc[3][27], ploc[8];
        for (int c = 0; c < 3; ++c)
          for (int n = 0; n < 27; ++n) wloc[c][n] = wfull[c][ids[n]];
        for (int n = 0; n < 8; ++n) ploc[n] = state.p[pids[n]];
        double acc = 0.0;
        for (int q = 0; q < ft.points(); ++q) {
          VelocityJet wj;
          double p = 0.0;
          for (int c = 0; c < 3; ++c)
            for (int n = 0; n < 27; ++n) {
              wj.w[c] += ft.q2_val[q][n] * wloc[c][n];
              for (int d = 0; d < 3; ++d)
                wj.dw[c][d] += ft.q2_grad[q][n][d] * wloc[c][n];
            }
          for (int n = 0; n < 8; ++n) p += ft.q1_val[q][n] * ploc[n];
          const std::array<double, 3> x = ft.point(mesh, ci, cj, q);
          const double r = x[1];
          const SurfaceJet th = theta.jet(x[0], r);
          const std::array<double, 2> tg = th.grad();
          const double a = 1.0 + r * r * (tg[0] * tg[0] + tg[1] * tg[1]);
          const double ier = 1.0 / (params.epsilon() * r);
          const StrainSample st = strain_rate(wj, th, r, params);
          double v = p;
          v += 2.0 * params.mu * ier *
               (r * (tg[0] * st.e[2][0] + tg[1] * st.e[2][1]) -
                a * ier * st.e[2][2]);
          acc += ft.weight[q] * sgn * params.omega * r * v;
        }
        total += acc;
        if (cells) (*cells)[ci * mesh.dom.n2 + cj] += acc;
      }
  }
  return total;
}

}  // namespace

double dissipation_objective(const FlowState& state, const BladeSurface& theta,
                             const FESpacePair& sp,
                             const GeometryParams& params,
                             const AssemblyOptions& opt) {
  return dissipation_total(state, theta, sp, params, opt, nullptr);
}

double impeller_work(const FlowState& state, const BladeSurface& theta,
                     const FESpacePair& sp, const GeometryParams& params,
                     const AssemblyOptions& opt) {
  return work_total(state, theta, sp, params, opt, nullptr);
}

ObjectiveReport evaluate_objectives(const FlowState& state,
                                    const BladeSurface& theta,
                                    const FESpacePair& sp,
                                    const GeometryParams& params,
                                    const AssemblyOptions& opt) {
  ObjectiveReport rep;
  rep.dissipation =
      dissipation_total(state, theta, sp, params, opt, &rep.dissipation_cell);
  rep.impeller_work = work_total(state, theta, sp, params, opt, &rep.work_cell);
  return rep;
}

// ---------------------------------------------------------------------------
// GradientField
// ---------------------------------------------------------------------------

struct GradientField::Impl {
  ObjectiveModel model;
  const BladeSurface& theta;
  const FESpacePair& sp;
  GeometryParams params;
  AssemblyOptions opt;
  SensitivitySolver solver;
  std::array<Eigen::VectorXd, 3> wfull;
  Eigen::VectorXd pres;

  // pairing quadrature: direction-independent coefficients per surface point
  struct QP {
    double x1, x2, wq;
    double slope[2];
    double curve[2][2];
    // work model response weights
    double resp_p = 0.0, resp_e3[2] = {0, 0}, resp_e33 = 0.0;
    SurfaceJet th;
  };
  std::vector<QP> qps;

  Eigen::VectorXd response_weights;  // dissipation: 2 A_visc w

  // nodal tables
  Eigen::MatrixXd slope_tab, curve_tab;
  Eigen::MatrixXd wm_tab, wgm_tab;
  Eigen::VectorXd pmean_tab, pjump_tab;
  Eigen::MatrixXd wmean_tab, wjump_tab, parts_tab;

  // bicubic projections of the total coefficient fields
  std::vector<SurfaceSpline> proj_slope;  // 2
  std::vector<SurfaceSpline> proj_curve;  // 4, (l, s) row-major, symmetrized

  Impl(ObjectiveModel mdl, const FlowState& state, const BladeSurface& th,
       const FESpacePair& space, const GeometryParams& prm,
       DirectBackend backend, const AssemblyOptions& options)
      : model(mdl),
        theta(th),
        sp(space),
        params(prm),
        opt(options),
        solver(state, th, space, prm, backend, options),
        wfull(expand_velocity(space, state.w)),
        pres(state.p) {
    require_incompressible(opt);
    params.validate();
    if (model == ObjectiveModel::dissipation)
      build_dissipation(state);
    else
      build_work();
    project_totals();
  }

  void build_dissipation(const FlowState& state) {
    response_weights =
        2.0 * (assemble_viscous(theta, sp, params, opt) * state.w);

    const std::vector<SurfacePoint> pts =
        surface_quadrature(sp.mesh.dom, opt.order);
    qps.reserve(pts.size());
    for (const SurfacePoint& p : pts) {
      QP qp;
      qp.x1 = p.x1;
      qp.x2 = p.x2;
      qp.wq = p.wq;
      qp.th = theta.jet(p.x1, p.x2);
      const DissipationPoint d =
          dissipation_point(sp, wfull, qp.th, p.x1, p.x2, params, opt);
      for (int l = 0; l < 2; ++l) {
        qp.slope[l] = d.slope[l];
        for (int s = 0; s < 2; ++s) qp.curve[l][s] = d.curve[l][s];
      }
      qps.push_back(qp);
    }

    const DomainSpec& dom = sp.mesh.dom;
    const int nn = dom.node_count();
    slope_tab.setZero(nn, 2);
    curve_tab.setZero(nn, 4);
    wm_tab.setZero(nn, 6);
    wgm_tab.setZero(nn, 12);
    static constexpr int kPack[6][2] = {{0, 0}, {1, 1}, {2, 2},
                                        {0, 1}, {0, 2}, {1, 2}};
    for (int i1 = 0; i1 <= dom.n1; ++i1)
      for (int i2 = 0; i2 <= dom.n2; ++i2) {
        const int node = dom.node_index(i1, i2);
        const double x1 = dom.node1(i1), x2 = dom.node2(i2);
        const SurfaceJet th = theta.jet(x1, x2);
        const DissipationPoint d =
            dissipation_point(sp, wfull, th, x1, x2, params, opt);
        for (int l = 0; l < 2; ++l) {
          slope_tab(node, l) = d.slope[l];
          for (int s = 0; s < 2; ++s)
            curve_tab(node, l * 2 + s) = d.curve[l][s];
        }
        for (int k = 0; k < 6; ++k)
          wm_tab(node, k) = d.wm[kPack[k][0]][kPack[k][1]];
        for (int s = 0; s < 2; ++s)
          for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 2; ++l)
              wgm_tab(node, (s * 3 + j) * 2 + l) = d.wgm[s][j][l];
      }
  }

  // Face traces of a nodal field triple plus pressure at one face table point.
  void build_work() {
    const Mesh& mesh = sp.mesh;
    const DomainSpec& dom = mesh.dom;
    const FaceBasisTable flo = make_face_table(mesh, 2, 0, opt.order);
    const FaceBasisTable fhi = make_face_table(mesh, 2, 1, opt.order);
    int ids_lo[27], ids_hi[27], pids_lo[8], pids_hi[8];

    for (int ci = 0; ci < dom.n1; ++ci)
      for (int cj = 0; cj < dom.n2; ++cj) {
        cell_q2_nodes(mesh, ci, cj, 0, ids_lo);
        cell_q2_nodes(mesh, ci, cj, mesh.n3 - 1, ids_hi);
        cell_q1_nodes(mesh, ci, cj, 0, pids_lo);
        cell_q1_nodes(mesh, ci, cj, mesh.n3 - 1, pids_hi);
        for (int q = 0; q < flo.points(); ++q) {
          FaceTraceJets lo, hi;
          for (int c = 0; c < 3; ++c)
            for (int n = 0; n < 27; ++n) {
              lo.w.w[c] += flo.q2_val[q][n] * wfull[c][ids_lo[n]];
              hi.w.w[c] += fhi.q2_val[q][n] * wfull[c][ids_hi[n]];
              for (int d = 0; d < 3; ++d) {
                lo.w.dw[c][d] += flo.q2_grad[q][n][d] * wfull[c][ids_lo[n]];
                hi.w.dw[c][d] += fhi.q2_grad[q][n][d] * wfull[c][ids_hi[n]];
              }
            }
          for (int n = 0; n < 8; ++n) {
            lo.p += flo.q1_val[q][n] * pres[pids_lo[n]];
            hi.p += fhi.q1_val[q][n] * pres[pids_hi[n]];
          }
          const std::array<double, 3> x = flo.point(mesh, ci, cj, q);
          QP qp;
          qp.x1 = x[0];
          qp.x2 = x[1];
          qp.wq = flo.weight[q];
          qp.th = theta.jet(x[0], x[1]);
          const WorkPoint wp = work_point(hi, lo, qp.th, x[1], params);
          for (int l = 0; l < 2; ++l) {
            qp.slope[l] = wp.slope[l];
            qp.resp_e3[l] = wp.resp_e3[l];
            for (int s = 0; s < 2; ++s) qp.curve[l][s] = wp.curve[l][s];
          }
          qp.resp_p = wp.resp_p;
          qp.resp_e33 = wp.resp_e33;
          qps.push_back(qp);
        }
      }

    const int nn = dom.node_count();
    slope_tab.setZero(nn, 2);
    curve_tab.setZero(nn, 4);
    pmean_tab.setZero(nn);
    pjump_tab.setZero(nn);
    wmean_tab.setZero(nn, 3);
    wjump_tab.setZero(nn, 3);
    parts_tab.setZero(nn, 16);
    for (int i1 = 0; i1 <= dom.n1; ++i1)
      for (int i2 = 0; i2 <= dom.n2; ++i2) {
        const int node = dom.node_index(i1, i2);
        const double x1 = dom.node1(i1), x2 = dom.node2(i2);
        const SurfaceJet th = theta.jet(x1, x2);
        const WorkPoint wp = work_point(face_trace(wfull, pres, x1, x2, 1),
                                        face_trace(wfull, pres, x1, x2, -1),
                                        th, x2, params);
        for (int l = 0; l < 2; ++l) {
          slope_tab(node, l) = wp.slope[l];
          for (int s = 0; s < 2; ++s)
            curve_tab(node, l * 2 + s) = wp.curve[l][s];
        }
        pmean_tab(node) = wp.p_mean;
        pjump_tab(node) = wp.p_jump;
        for (int i = 0; i < 3; ++i) {
          wmean_tab(node, i) = wp.w_mean[i];
          wjump_tab(node, i) = wp.w_jump[i];
        }
        for (int k = 0; k < 16; ++k) parts_tab(node, k) = wp.parts[k];
      }
  }

  FaceTraceJets face_trace(const std::array<Eigen::VectorXd, 3>& vel,
                           const Eigen::VectorXd& pfield, double x1, double x2,
                           int side) const {
    const double xi = side > 0 ? 1.0 : -1.0;
    FaceTraceJets out;
    out.w = line_jet(sp, vel, x1, x2, xi);
    out.p = scalar_jet(sp.pnodes, pfield, x1, x2, xi).v;
    return out;
  }

  void project_totals() {
    const DomainSpec& dom = sp.mesh.dom;
    std::vector<double> vals(dom.node_count());
    for (int l = 0; l < 2; ++l) {
      for (int n = 0; n < dom.node_count(); ++n) vals[n] = slope_tab(n, l);
      proj_slope.push_back(project_nodal(dom, vals));
    }
    for (int l = 0; l < 2; ++l)
      for (int s = 0; s < 2; ++s) {
        for (int n = 0; n < dom.node_count(); ++n)
          vals[n] =
              0.5 * (curve_tab(n, l * 2 + s) + curve_tab(n, s * 2 + l));
        proj_curve.push_back(project_nodal(dom, vals));
      }
  }

  double explicit_pairing(const DirectionField& eta) const {
    double acc = 0.0;
    for (const QP& qp : qps) {
      const SurfaceJet ej = eta.jet(qp.x1, qp.x2);
      const std::array<double, 2> eg = ej.grad();
      double v = 0.0;
      for (int l = 0; l < 2; ++l) {
        v += qp.slope[l] * eg[l];
        for (int s = 0; s < 2; ++s) v += qp.curve[l][s] * ej.hess(l, s);
      }
      acc += qp.wq * v;
    }
    return acc;
  }

  double response(const SensitivityState& hat) const {
    if (model == ObjectiveModel::dissipation)
      return response_weights.dot(hat.w_hat);
    const std::array<Eigen::VectorXd, 3> vfull = expand_velocity(sp, hat.w_hat);
    double acc = 0.0;
    for (const QP& qp : qps) {
      const FaceTraceJets hi = face_trace(vfull, hat.p_hat, qp.x1, qp.x2, 1);
      const FaceTraceJets lo = face_trace(vfull, hat.p_hat, qp.x1, qp.x2, -1);
      const StrainSample sh = strain_rate(hi.w, qp.th, qp.x2, params);
      const StrainSample sl = strain_rate(lo.w, qp.th, qp.x2, params);
      double v = qp.resp_p * 0.5 * (hi.p - lo.p);
      for (int l = 0; l < 2; ++l)
        v += qp.resp_e3[l] * 0.5 * (sh.e[2][l] - sl.e[2][l]);
      v += qp.resp_e33 * 0.5 * (sh.e[2][2] - sl.e[2][2]);
      acc += qp.wq * v;
    }
    return acc;
  }

  int projection_order() const { return std::max(opt.order, 4); }

  // Strong-form contraction of the projected coefficient fields at one
  // point: second derivatives on the curvature projections, first on the
  // slope ones.
  double strong_value(double x1, double x2) const {
    double v = 0.0;
    for (int l = 0; l < 2; ++l) {
      v -= proj_slope[l].jet(x1, x2).grad()[l];
      for (int s = 0; s < 2; ++s)
        v += proj_curve[l * 2 + s].jet(x1, x2).hess(l, s);
    }
    return v;
  }

  // Frozen response density of the dissipation model, projected: the
  // xi-integrated cross dissipation of the state with the supplied response.
  SurfaceSpline response_density(const SensitivityState& hat) const {
    const DomainSpec& dom = sp.mesh.dom;
    const std::array<Eigen::VectorXd, 3> vfull = expand_velocity(sp, hat.w_hat);
    std::vector<double> vals(dom.node_count());
    for (int i1 = 0; i1 <= dom.n1; ++i1)
      for (int i2 = 0; i2 <= dom.n2; ++i2) {
        const double x1 = dom.node1(i1), x2 = dom.node2(i2);
        vals[dom.node_index(i1, i2)] = dissipation_cross_density(
            sp, wfull, vfull, theta.jet(x1, x2), x1, x2, params, opt);
      }
    return project_nodal(dom, vals);
  }
};

GradientField::GradientField(ObjectiveModel model, const FlowState& state,
                             const BladeSurface& theta, const FESpacePair& sp,
                             const GeometryParams& params,
                             DirectBackend backend, const AssemblyOptions& opt)
    : impl_(std::make_unique<Impl>(model, state, theta, sp, params, backend,
                                   opt)) {}

GradientField::~GradientField() = default;
GradientField::GradientField(GradientField&&) noexcept = default;
GradientField& GradientField::operator=(GradientField&&) noexcept = default;

ObjectiveModel GradientField::model() const { return impl_->model; }

SensitivityState GradientField::sensitivity(const DirectionField& eta) const {
  return impl_->solver.solve(eta);
}

double GradientField::pairing(const DirectionField& eta) const {
  return impl_->response(impl_->solver.solve(eta)) +
         impl_->explicit_pairing(eta);
}

double GradientField::response_term(const SensitivityState& response) const {
  return impl_->response(response);
}

double GradientField::pairing_projected(const DirectionField& eta,
                                        const SensitivityState* frozen) const {
  const Impl& im = *impl_;
  if (im.model == ObjectiveModel::dissipation && frozen == nullptr)
    throw std::invalid_argument(
        "the dissipation model needs a frozen response density");
  std::unique_ptr<SurfaceSpline> density;
  if (im.model == ObjectiveModel::dissipation)
    density = std::make_unique<SurfaceSpline>(im.response_density(*frozen));

  double acc = 0.0;
  for (const SurfacePoint& p :
       surface_quadrature(im.sp.mesh.dom, im.projection_order())) {
    const SurfaceJet ej = eta.jet(p.x1, p.x2);
    const std::array<double, 2> eg = ej.grad();
    double v = 0.0;
    for (int l = 0; l < 2; ++l) {
      v += im.proj_slope[l].value(p.x1, p.x2) * eg[l];
      for (int s = 0; s < 2; ++s)
        v += im.proj_curve[l * 2 + s].value(p.x1, p.x2) * ej.hess(l, s);
    }
    if (density) v += density->value(p.x1, p.x2) * ej.v;
    acc += p.wq * v;
  }
  if (im.model == ObjectiveModel::impeller_work && frozen != nullptr)
    acc += im.response(*frozen);
  return acc;
}

Eigen::VectorXd GradientField::basis_pairings(const ThetaBasis& basis) const {
  Eigen::VectorXd out(basis.count());
  std::vector<double> coeffs(basis.count(), 0.0);
  for (int k = 0; k < basis.count(); ++k) {
    coeffs[k] = 1.0;
    out[k] = pairing(basis.direction(coeffs));
    coeffs[k] = 0.0;
  }
  return out;
}

const Eigen::MatrixXd& GradientField::slope_coeff() const {
  return impl_->slope_tab;
}
const Eigen::MatrixXd& GradientField::curvature_coeff() const {
  return impl_->curve_tab;
}

namespace {
void require_model(const GradientField& f, ObjectiveModel want,
                   const char* what) {
  if (f.model() != want)
    throw std::invalid_argument(std::string(what) +
                                " is not available for this objective");
}
}  // namespace

const Eigen::MatrixXd& GradientField::w_moments() const {
  require_model(*this, ObjectiveModel::dissipation, "w_moments");
  return impl_->wm_tab;
}
const Eigen::MatrixXd& GradientField::w_grad_moments() const {
  require_model(*this, ObjectiveModel::dissipation, "w_grad_moments");
  return impl_->wgm_tab;
}

double GradientField::stiffness(int node, int a, int b, int l, int s) const {
  require_model(*this, ObjectiveModel::dissipation, "stiffness");
  if (a < 0 || a > 2 || s < 0 || s > 2 || b < 0 || b > 2 || l < 0 || l > 2)
    throw std::invalid_argument("stiffness index out of range");
  if (b != l) return 0.0;
  static constexpr int kCol[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  const DomainSpec& dom = impl_->sp.mesh.dom;
  const double r = dom.node2(node % (dom.n2 + 1));
  return 2.0 * impl_->params.mu * r * r * r *
         impl_->wm_tab(node, kCol[a][s]);
}

const Eigen::VectorXd& GradientField::p_mean() const {
  require_model(*this, ObjectiveModel::impeller_work, "p_mean");
  return impl_->pmean_tab;
}
const Eigen::VectorXd& GradientField::p_jump() const {
  require_model(*this, ObjectiveModel::impeller_work, "p_jump");
  return impl_->pjump_tab;
}
const Eigen::MatrixXd& GradientField::w_mean() const {
  require_model(*this, ObjectiveModel::impeller_work, "w_mean");
  return impl_->wmean_tab;
}
const Eigen::MatrixXd& GradientField::w_jump() const {
  require_model(*this, ObjectiveModel::impeller_work, "w_jump");
  return impl_->wjump_tab;
}
const Eigen::MatrixXd& GradientField::slope_parts() const {
  require_model(*this, ObjectiveModel::impeller_work, "slope_parts");
  return impl_->parts_tab;
}

WorkElCoefficients GradientField::el_coefficients() const {
  require_model(*this, ObjectiveModel::impeller_work, "el_coefficients");
  const Impl& im = *impl_;
  const DomainSpec& dom = im.sp.mesh.dom;
  const int nn = dom.node_count();

  // Projections of the graded slope components, for their derivatives.
  std::vector<SurfaceSpline> part_proj;
  std::vector<double> vals(nn);
  for (int k = 0; k < 16; ++k) {
    for (int n = 0; n < nn; ++n) vals[n] = im.parts_tab(n, k);
    part_proj.push_back(project_nodal(dom, vals));
  }

  WorkElCoefficients out;
  out.laplace_coeff.setZero(nn);
  out.hess_coeff.setZero(nn, 4);
  out.grad_quad_coeff.setZero(nn, 4);
  out.grad_coeff.setZero(nn, 2);
  out.zero_coeff.setZero(nn);
  for (int i1 = 0; i1 <= dom.n1; ++i1)
    for (int i2 = 0; i2 <= dom.n2; ++i2) {
      const int node = dom.node_index(i1, i2);
      const double x1 = dom.node1(i1), x2 = dom.node2(i2);
      const SurfaceJet th = im.theta.jet(x1, x2);
      const std::array<double, 2> tg = th.grad();

      // coefficient of the curvature entries in the strong form, at frozen
      // component fields
      for (int l = 0; l < 2; ++l)
        for (int n = 0; n < 2; ++n) {
          double v = im.parts_tab(node, 2 + l * 2 + n);
          for (int m2 = 0; m2 < 2; ++m2)
            v += (im.parts_tab(node, 6 + (l * 2 + n) * 2 + m2) +
                  im.parts_tab(node, 6 + (l * 2 + m2) * 2 + n)) *
                 tg[m2];
          out.hess_coeff(node, l * 2 + n) = v;
        }

      for (int n = 0; n < 2; ++n) {
        double g = 0.0;
        for (int l = 0; l < 2; ++l) {
          const SurfaceJet j = part_proj[2 + l * 2 + n].jet(x1, x2);
          g -= j.grad()[l];
        }
        out.grad_coeff(node, n) = g;
        for (int m2 = 0; m2 < 2; ++m2) {
          double q = 0.0;
          for (int l = 0; l < 2; ++l)
            q -= part_proj[6 + (l * 2 + n) * 2 + m2].jet(x1, x2).grad()[l];
          out.grad_quad_coeff(node, n * 2 + m2) = q;
        }
      }

      double z = 0.0;
      for (int l = 0; l < 2; ++l) {
        z -= part_proj[l].jet(x1, x2).grad()[l];
        z -= part_proj[14 + l].jet(x1, x2).grad()[l];
        for (int s = 0; s < 2; ++s)
          z += im.proj_curve[l * 2 + s].jet(x1, x2).hess(l, s);
      }
      out.zero_coeff(node) = z;

      // isotropic curvature weight sourced by the face-velocity jump;
      // identically zero for conforming no-slip states
      out.laplace_coeff(node) =
          2.0 * im.params.mu * im.params.omega * x2 * x2 * x2 *
          (im.wjump_tab(node, 0) + im.wjump_tab(node, 1));
    }
  return out;
}

double objective_gradient_pairing(ObjectiveModel model, const FlowState& state,
                                  const BladeSurface& theta,
                                  const DirectionField& eta,
                                  const FESpacePair& sp,
                                  const GeometryParams& params,
                                  DirectBackend backend,
                                  const AssemblyOptions& opt) {
  return GradientField(model, state, theta, sp, params, backend, opt)
      .pairing(eta);
}

// ---------------------------------------------------------------------------
// stationarity residuals
// ---------------------------------------------------------------------------

Eigen::VectorXd el_residual_dissipation(const GradientField& field,
                                        const SensitivityState& response,
                                        const ThetaBasis& basis) {
  require_model(field, ObjectiveModel::dissipation, "el_residual_dissipation");
  const GradientField::Impl& im = *field.impl_;
  const SurfaceSpline density = im.response_density(response);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.count());
  std::vector<SurfaceJet> bj;
  for (const SurfacePoint& p :
       surface_quadrature(im.sp.mesh.dom, im.projection_order())) {
    const double strong =
        im.strong_value(p.x1, p.x2) + density.value(p.x1, p.x2);
    basis.jets_at(p.x1, p.x2, bj);
    for (int k = 0; k < basis.count(); ++k)
      out[k] += p.wq * strong * bj[k].v;
  }
  return out;
}

Eigen::VectorXd el_residual_work(const GradientField& field,
                                 const ThetaBasis& basis) {
  require_model(field, ObjectiveModel::impeller_work, "el_residual_work");
  const GradientField::Impl& im = *field.impl_;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.count());
  std::vector<SurfaceJet> bj;
  for (const SurfacePoint& p :
       surface_quadrature(im.sp.mesh.dom, im.projection_order())) {
    const double strong = im.strong_value(p.x1, p.x2);
    basis.jets_at(p.x1, p.x2, bj);
    for (int k = 0; k < basis.count(); ++k)
      out[k] += p.wq * strong * bj[k].v;
  }
  std::vector<double> coeffs(basis.count(), 0.0);
  for (int k = 0; k < basis.count(); ++k) {
    coeffs[k] = 1.0;
    out[k] += im.response(im.solver.solve(basis.direction(coeffs)));
    coeffs[k] = 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// optimizer
// ---------------------------------------------------------------------------

void OptimizerConfig::validate() const {
  if (model != ObjectiveModel::dissipation &&
      model != ObjectiveModel::impeller_work)
    throw std::invalid_argument("unknown objective model");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (max_backtracks < 1)
    throw std::invalid_argument("max_backtracks must be >= 1");
  if (!(step0 > 0.0)) throw std::invalid_argument("step0 must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("armijo_c must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("backtrack must lie in (0, 1)");
  if (!(grad_tol >= 0.0))
    throw std::invalid_argument("grad_tol must be non-negative");
  if (!(k1_bound > 0.0))
    throw std::invalid_argument("k1_bound must be positive");
}

namespace {

double objective_of(ObjectiveModel model, const FlowState& state,
                    const BladeSurface& theta, const FESpacePair& sp,
                    const GeometryParams& params, const AssemblyOptions& opt) {
  return model == ObjectiveModel::dissipation
             ? dissipation_objective(state, theta, sp, params, opt)
             : impeller_work(state, theta, sp, params, opt);
}

Eigen::MatrixXd basis_mass(const ThetaBasis& basis) {
  const int n = basis.count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::vector<SurfaceJet> bj;
  for (const SurfacePoint& p : surface_quadrature(basis.domain(), 4)) {
    basis.jets_at(p.x1, p.x2, bj);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) += p.wq * bj[i].v * bj[j].v;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
  return m;
}

// Largest fraction of the increment keeping the slope bound, by bisection on
// a bracket whose low end is feasible; lands on the bound to ~2^-60.
double feasible_fraction(const BladeSurface& theta, const DirectionField& d,
                         double s, double k1) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (theta.perturbed(d, mid * s).grad_sup() <= k1 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

OptimizationTrace optimize(const BladeSurface& theta0, const FlowData& data,
                           const OptimizerConfig& cfg, const FESpacePair& sp,
                           const GeometryParams& params) {
  cfg.validate();
  params.validate();
  if (!theta0.admissible(cfg.k1_bound))
    throw std::invalid_argument("initial surface violates the slope bound");

  AssemblyOptions opt;
  opt.order = cfg.flow.quad_order;
  const ThetaBasis basis(theta0.domain());
  const Eigen::LLT<Eigen::MatrixXd> mass(basis_mass(basis));

  BladeSurface theta = theta0;
  FlowState state = solve_stationary(theta, data, cfg.flow, sp, params);
  double obj = objective_of(cfg.model, state, theta, sp, params, opt);

  OptimizationTrace tr;
  tr.steps.push_back({obj, 0.0, 0.0, false, theta.nodal()});

  for (int step = 0; step < cfg.max_steps; ++step) {
    const GradientField field(cfg.model, state, theta, sp, params,
                              cfg.flow.backend, opt);
    const Eigen::VectorXd g = field.basis_pairings(basis);
    const Eigen::VectorXd riesz = mass.solve(g);
    const double gsq = std::max(0.0, g.dot(riesz));
    tr.steps.back().grad_norm = std::sqrt(gsq);
    if (tr.steps.back().grad_norm <= cfg.grad_tol) return tr;

    std::vector<double> down(riesz.size());
    for (int i = 0; i < riesz.size(); ++i) down[i] = -riesz[i];
    const DirectionField dir = basis.direction(down);

    bool accepted = false;
    double s = cfg.step0;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt, s *= cfg.backtrack) {
      double rho = 1.0;
      bool projected = false;
      BladeSurface trial = theta.perturbed(dir, s);
      if (trial.grad_sup() > cfg.k1_bound) {
        projected = true;
        rho = feasible_fraction(theta, dir, s, cfg.k1_bound);
        if (!(rho * s > 0.0)) continue;
        trial = theta.perturbed(dir, rho * s);
      }
      FlowState tstate;
      try {
        tstate = solve_stationary(trial, data, cfg.flow, sp, params, &state.w);
      } catch (const PicardError& err) {
        tr.failed = true;
        std::ostringstream msg;
        msg << "flow solve diverged on a trial surface at step "
            << (step + 1) << ": " << err.what();
        tr.failure = msg.str();
        return tr;
      }
      const double tobj =
          objective_of(cfg.model, tstate, trial, sp, params, opt);
      if (tobj <= obj - cfg.armijo_c * rho * s * gsq) {
        theta = trial;
        state = std::move(tstate);
        obj = tobj;
        tr.steps.push_back({obj, 0.0, rho * s, projected, theta.nodal()});
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw OptimizationError(
          "line search stalled: no admissible trial achieved sufficient "
          "decrease",
          tr);
  }

  // complete the record for the final iterate
  const GradientField field(cfg.model, state, theta, sp, params,
                            cfg.flow.backend, opt);
  const Eigen::VectorXd g = field.basis_pairings(basis);
  const Eigen::VectorXd riesz = mass.solve(g);
  tr.steps.back().grad_norm = std::sqrt(std::max(0.0, g.dot(riesz)));
  return tr;
}

}  // namespace bladepass
