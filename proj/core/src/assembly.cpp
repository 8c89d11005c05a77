#include "bladepass/assembly.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace bladepass {

namespace {

using Triplet = Eigen::Triplet<double>;

// Sum of the enabled velocity-block kernels for one cell, as an 81x81 local
// matrix over (node, component) pairs with component fastest.  Rows are test
// functions, columns trial functions.
struct VelocityKernel {
  bool viscous = false;
  bool coriolis = false;
  bool convection = false;
  bool reaction = false;  // add b(u; w, v) alongside the transport term
  double lambda = 0.0;
};

void accumulate_velocity_block(Eigen::MatrixXd& M, const CellBasisTable& tab,
                               const Mesh& mesh, int ci, int cj, int ck,
                               const BladeSurface& surface,
                               const GeometryParams& params,
                               const VelocityKernel& kern,
                               const double wloc[27][3], Eigen::MatrixXd& E,
                               Eigen::MatrixXd& T) {
  const double eps = params.epsilon();
  for (int q = 0; q < tab.points(); ++q) {
    const auto x = tab.point(mesh, ci, cj, ck, q);
    const double r = x[1];
    const SurfaceJet th = surface.jet(x[0], x[1]);
    const double wq = tab.weight[q] * eps * r;  // sqrt(g) measure included
    const auto& val = tab.q2_val[q];
    const auto& grad = tab.q2_grad[q];

    if (kern.viscous) {
      const MetricSample m = metric_at(th, r, params);
      const Eigen::Matrix<double, 6, 6> S =
          stress_matrix(m, params.mu, kern.lambda);
      for (int n = 0; n < 27; ++n)
        for (int c = 0; c < 3; ++c) {
          VelocityJet wj;
          wj.w[c] = val[n];
          for (int ax = 0; ax < 3; ++ax) wj.dw[c][ax] = grad[n][ax];
          const StrainSample s = strain_rate(wj, th, r, params);
          const auto p = sym_to6(s.e);
          for (int k = 0; k < 6; ++k) E(k, 3 * n + c) = p[k];
        }
      T.noalias() = S * E;
      M.noalias() += wq * (E.transpose() * T);
    }

    if (kern.coriolis) {
      // Pointwise coupling w-component i -> v-component j.  The Theta_2
      // contributions of the radial velocity and of Pi cancel exactly, so
      // only four entries survive and the 3x3 coupling is antisymmetric by
      // construction.
      const double k2 = 2.0 * r * params.omega;
      const double c10 = k2 * th.d1;   // w^2 couples v^1
      const double c21 = k2 * eps;     // w^xi couples v^2 and vice versa
      double m3[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
      m3[1][0] = c10;
      m3[0][1] = -c10;
      m3[2][1] = -c21;
      m3[1][2] = c21;
      for (int mn = 0; mn < 27; ++mn) {
        if (val[mn] == 0.0) continue;
        for (int nn = 0; nn < 27; ++nn) {
          // Grouped so the (mn, nn) and (nn, mn) factors agree bitwise and
          // the assembled matrix is antisymmetric exactly, not just to
          // rounding.
          const double s = wq * (val[mn] * val[nn]);
          M(3 * mn + 0, 3 * nn + 1) += s * m3[1][0];
          M(3 * mn + 1, 3 * nn + 0) += s * m3[0][1];
          M(3 * mn + 1, 3 * nn + 2) += s * m3[2][1];
          M(3 * mn + 2, 3 * nn + 1) += s * m3[1][2];
        }
      }
    }

    if (kern.convection) {
      const MetricSample m = metric_at(th, r, params);
      double wv[3] = {0, 0, 0};
      for (int n = 0; n < 27; ++n)
        for (int i = 0; i < 3; ++i) wv[i] += wloc[n][i] * val[n];
      if (kern.reaction) {
        // Reaction half of the Jacobian: the trial enters through its values
        // only, transporting the frozen field's covariant gradient.
        VelocityJet wj;
        for (int i = 0; i < 3; ++i) {
          wj.w[i] = wv[i];
          for (int ax = 0; ax < 3; ++ax) {
            double acc = 0.0;
            for (int n = 0; n < 27; ++n) acc += wloc[n][i] * grad[n][ax];
            wj.dw[i][ax] = acc;
          }
        }
        const VelocityGradientSample gw = covariant_gradient(wj, th, r, params);
        for (int c = 0; c < 3; ++c) {
          double y[3];
          for (int j = 0; j < 3; ++j)
            y[j] = wq * (m.g_cov[0][j] * gw.nabla[c][0] +
                         m.g_cov[1][j] * gw.nabla[c][1] +
                         m.g_cov[2][j] * gw.nabla[c][2]);
          for (int n = 0; n < 27; ++n) {
            if (val[n] == 0.0) continue;
            for (int mn = 0; mn < 27; ++mn) {
              const double s = val[mn] * val[n];
              M(3 * mn + 0, 3 * n + c) += s * y[0];
              M(3 * mn + 1, 3 * n + c) += s * y[1];
              M(3 * mn + 2, 3 * n + c) += s * y[2];
            }
          }
        }
      }
      for (int n = 0; n < 27; ++n)
        for (int c = 0; c < 3; ++c) {
          VelocityJet uj;
          uj.w[c] = val[n];
          for (int ax = 0; ax < 3; ++ax) uj.dw[c][ax] = grad[n][ax];
          const VelocityGradientSample gu =
              covariant_gradient(uj, th, r, params);
          double z[3];
          for (int k = 0; k < 3; ++k)
            z[k] = wv[0] * gu.nabla[0][k] + wv[1] * gu.nabla[1][k] +
                   wv[2] * gu.nabla[2][k];
          double y[3];
          for (int j = 0; j < 3; ++j)
            y[j] = wq * (m.g_cov[0][j] * z[0] + m.g_cov[1][j] * z[1] +
                         m.g_cov[2][j] * z[2]);
          for (int mn = 0; mn < 27; ++mn) {
            const double vm = val[mn];
            if (vm == 0.0) continue;
            M(3 * mn + 0, 3 * n + c) += vm * y[0];
            M(3 * mn + 1, 3 * n + c) += vm * y[1];
            M(3 * mn + 2, 3 * n + c) += vm * y[2];
          }
        }
    }
  }
}

void gather_local_velocity(const std::array<Eigen::VectorXd, 3>& full,
                           const int nodes[27], double out[27][3]) {
  for (int n = 0; n < 27; ++n)
    for (int c = 0; c < 3; ++c) out[n][c] = full[c][nodes[n]];
}

void scatter_velocity_block(const Eigen::MatrixXd& M, const FESpacePair& sp,
                            const int nodes[27], std::vector<Triplet>& trips) {
  int gdof[81];
  for (int n = 0; n < 27; ++n)
    for (int c = 0; c < 3; ++c) gdof[3 * n + c] = sp.vdof(nodes[n], c);
  for (int i = 0; i < 81; ++i) {
    if (gdof[i] < 0) continue;
    for (int j = 0; j < 81; ++j) {
      if (gdof[j] < 0) continue;
      const double v = M(i, j);
      if (v != 0.0) trips.emplace_back(gdof[i], gdof[j], v);
    }
  }
}

SparseMat assemble_velocity_form(const BladeSurface& surface,
                                 const FESpacePair& sp,
                                 const GeometryParams& params,
                                 const AssemblyOptions& opt,
                                 const VelocityKernel& kern,
                                 const Eigen::VectorXd* conv_state,
                                 bool mirror) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  std::array<Eigen::VectorXd, 3> full;
  if (kern.convection)
    full = expand_velocity(sp, conv_state->head(sp.vel_dofs()));

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.cell_count()) * 81 * 81);
  Eigen::MatrixXd M(81, 81), E(6, 81), T(6, 81);
  int nodes[27];
  double wloc[27][3] = {};
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        if (kern.convection) gather_local_velocity(full, nodes, wloc);
        M.setZero();
        accumulate_velocity_block(M, tab, mesh, ci, cj, ck, surface, params,
                                  kern, wloc, E, T);
        if (mirror)
          for (int i = 0; i < 81; ++i)
            for (int j = i + 1; j < 81; ++j) M(j, i) = M(i, j);
        scatter_velocity_block(M, sp, nodes, trips);
      }
  SparseMat A(sp.vel_dofs(), sp.vel_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

}  // namespace

SparseMat assemble_viscous(const BladeSurface& surface, const FESpacePair& sp,
                           const GeometryParams& params,
                           const AssemblyOptions& opt) {
  VelocityKernel k;
  k.viscous = true;
  k.lambda = opt.lambda;
  return assemble_velocity_form(surface, sp, params, opt, k, nullptr, true);
}

SparseMat assemble_coriolis(const BladeSurface& surface, const FESpacePair& sp,
                            const GeometryParams& params,
                            const AssemblyOptions& opt) {
  VelocityKernel k;
  k.coriolis = true;
  return assemble_velocity_form(surface, sp, params, opt, k, nullptr, false);
}

SparseMat assemble_convection(const Eigen::VectorXd& u,
                              const BladeSurface& surface,
                              const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt) {
  VelocityKernel k;
  k.convection = true;
  return assemble_velocity_form(surface, sp, params, opt, k, &u, false);
}

SparseMat assemble_divergence(const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const double eps = params.epsilon();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.cell_count()) * 8 * 81);
  int vnodes[27], pnodes_[8];
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, vnodes);
        cell_q1_nodes(mesh, ci, cj, ck, pnodes_);
        for (int q = 0; q < tab.points(); ++q) {
          const auto x = tab.point(mesh, ci, cj, ck, q);
          const double r = x[1];
          const double wq = tab.weight[q] * eps * r;
          const auto& val = tab.q2_val[q];
          const auto& grad = tab.q2_grad[q];
          const auto& pv = tab.q1_val[q];
          for (int n = 0; n < 27; ++n)
            for (int c = 0; c < 3; ++c) {
              const int col = sp.vdof(vnodes[n], c);
              if (col < 0) continue;
              const double dv =
                  grad[n][c] + (c == 1 ? val[n] / r : 0.0);
              if (dv == 0.0) continue;
              for (int pm = 0; pm < 8; ++pm)
                trips.emplace_back(pnodes_[pm], col, wq * pv[pm] * dv);
            }
        }
      }
  SparseMat B(sp.pre_dofs(), sp.vel_dofs());
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

SparseMat assemble_energy_gram(const BladeSurface& surface,
                               const FESpacePair& sp,
                               const GeometryParams& params,
                               const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const double eps = params.epsilon();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.cell_count()) * 81 * 81);
  Eigen::MatrixXd M(81, 81), E(6, 81);
  int nodes[27];
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        M.setZero();
        for (int q = 0; q < tab.points(); ++q) {
          const auto x = tab.point(mesh, ci, cj, ck, q);
          const double r = x[1];
          const SurfaceJet th = surface.jet(x[0], x[1]);
          const double wq = tab.weight[q] * eps * r;
          const auto& val = tab.q2_val[q];
          const auto& grad = tab.q2_grad[q];
          for (int n = 0; n < 27; ++n)
            for (int c = 0; c < 3; ++c) {
              VelocityJet wj;
              wj.w[c] = val[n];
              for (int ax = 0; ax < 3; ++ax) wj.dw[c][ax] = grad[n][ax];
              const StrainSample s = strain_rate(wj, th, r, params);
              const auto p = sym_to6(s.phi);
              for (int k = 0; k < 6; ++k) E(k, 3 * n + c) = p[k];
            }
          // Diagonal weights of the phi-only inner product in the packed
          // order (11, 22, 33, 12, 13, 23): off-diagonal pairs count twice,
          // mixed and axial slots carry their (eps r) powers.
          const double ir2 = 1.0 / ((eps * r) * (eps * r));
          const double mu2 = 2.0 * params.mu;
          Eigen::Matrix<double, 6, 1> D;
          D << mu2, mu2, mu2 * ir2 * ir2, 2.0 * mu2, 2.0 * mu2 * ir2,
              2.0 * mu2 * ir2;
          M.noalias() += wq * (E.transpose() * D.asDiagonal() * E);
        }
        for (int i = 0; i < 81; ++i)
          for (int j = i + 1; j < 81; ++j) M(j, i) = M(i, j);
        scatter_velocity_block(M, sp, nodes, trips);
      }
  SparseMat G(sp.vel_dofs(), sp.vel_dofs());
  G.setFromTriplets(trips.begin(), trips.end());
  return G;
}

SparseMat assemble_h1_gram(const FESpacePair& sp, const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.cell_count()) * 27 * 27 * 3);
  int nodes[27];
  Eigen::MatrixXd Ms(27, 27);
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        Ms.setZero();
        for (int q = 0; q < tab.points(); ++q) {
          const auto& grad = tab.q2_grad[q];
          const double wq = tab.weight[q];
          for (int m = 0; m < 27; ++m)
            for (int n = m; n < 27; ++n) {
              const double g = wq * (grad[m][0] * grad[n][0] +
                                     grad[m][1] * grad[n][1] +
                                     grad[m][2] * grad[n][2]);
              Ms(m, n) += g;
            }
        }
        for (int m = 0; m < 27; ++m)
          for (int n = m; n < 27; ++n) Ms(n, m) = Ms(m, n);
        for (int m = 0; m < 27; ++m)
          for (int n = 0; n < 27; ++n) {
            const double v = Ms(m, n);
            if (v == 0.0) continue;
            for (int c = 0; c < 3; ++c) {
              const int gi = sp.vdof(nodes[m], c);
              const int gj = sp.vdof(nodes[n], c);
              if (gi >= 0 && gj >= 0) trips.emplace_back(gi, gj, v);
            }
          }
      }
  SparseMat G(sp.vel_dofs(), sp.vel_dofs());
  G.setFromTriplets(trips.begin(), trips.end());
  return G;
}

Eigen::VectorXd assemble_load(const LoadData& data,
                              const BladeSurface& /*surface*/,
                              const FESpacePair& sp,
                              const GeometryParams& params,
                              const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const double eps = params.epsilon();
  const double om2 = params.omega * params.omega;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(sp.total_dofs());
  int nodes[27];
  const bool has_volume = data.body != nullptr || data.centrifugal;
  if (has_volume)
    for (int ci = 0; ci < mesh.cells(0); ++ci)
      for (int cj = 0; cj < mesh.cells(1); ++cj)
        for (int ck = 0; ck < mesh.cells(2); ++ck) {
          cell_q2_nodes(mesh, ci, cj, ck, nodes);
          for (int q = 0; q < tab.points(); ++q) {
            const auto x = tab.point(mesh, ci, cj, ck, q);
            const double r = x[1];
            const double wq = tab.weight[q] * eps * r;
            std::array<double, 3> f = {0.0, 0.0, 0.0};
            if (data.body) f = (*data.body)(x[0], x[1], x[2]);
            if (data.centrifugal) f[1] += om2 * r;
            const auto& val = tab.q2_val[q];
            for (int n = 0; n < 27; ++n)
              for (int c = 0; c < 3; ++c) {
                const int dof = sp.vdof(nodes[n], c);
                if (dof >= 0) F[dof] += wq * val[n] * f[c];
              }
          }
        }
  const FaceTraction* tr[2] = {data.inflow, data.outflow};
  for (int side = 0; side < 2; ++side) {
    if (!tr[side]) continue;
    const FaceBasisTable ft = make_face_table(mesh, 0, side, opt.order);
    const int ci = side == 0 ? 0 : mesh.cells(0) - 1;
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        for (int q = 0; q < ft.points(); ++q) {
          const auto x = ft.point(mesh, cj, ck, q);
          const double r = x[1];
          const double wq = ft.weight[q] * eps * r;
          const auto t = (*tr[side])(x[1], x[2]);
          const auto& val = ft.q2_val[q];
          for (int n = 0; n < 27; ++n) {
            if (val[n] == 0.0) continue;
            for (int c = 0; c < 3; ++c) {
              const int dof = sp.vdof(nodes[n], c);
              if (dof >= 0) F[dof] += wq * val[n] * t[c];
            }
          }
        }
      }
  }
  return F;
}

namespace {

struct TripletSink {
  std::vector<Triplet>& trips;
  void add(int row, int col, double v) { trips.emplace_back(row, col, v); }
};

// Accumulates into an already-built pattern; coeffRef never inserts as long
// as the matrix was primed by assemble_saddle on the same space.
struct RefillSink {
  SparseMat& S;
  void add(int row, int col, double v) { S.coeffRef(row, col) += v; }
};

template <class Sink>
void saddle_pass(Sink&& sink, const OperatorBlocks& blocks,
                 const BladeSurface& surface, const FESpacePair& sp,
                 const GeometryParams& params, const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const CellBasisTable tab = make_cell_table(mesh, opt.order);
  const double eps = params.epsilon();
  const int nv = sp.vel_dofs();

  if (blocks.convect_at && blocks.linearize_at)
    throw std::invalid_argument(
        "saddle blocks: convect_at and linearize_at are mutually exclusive");
  const Eigen::VectorXd* frozen =
      blocks.linearize_at ? blocks.linearize_at : blocks.convect_at;
  VelocityKernel kern;
  kern.viscous = blocks.viscous;
  kern.coriolis = blocks.coriolis;
  kern.convection = frozen != nullptr;
  kern.reaction = blocks.linearize_at != nullptr;
  kern.lambda = opt.lambda;
  std::array<Eigen::VectorXd, 3> full;
  if (kern.convection) full = expand_velocity(sp, frozen->head(sp.vel_dofs()));

  Eigen::MatrixXd M(81, 81), E(6, 81), T(6, 81);
  int nodes[27], pnodes_[8], gdof[81];
  double wloc[27][3] = {};
  for (int ci = 0; ci < mesh.cells(0); ++ci)
    for (int cj = 0; cj < mesh.cells(1); ++cj)
      for (int ck = 0; ck < mesh.cells(2); ++ck) {
        cell_q2_nodes(mesh, ci, cj, ck, nodes);
        cell_q1_nodes(mesh, ci, cj, ck, pnodes_);
        if (kern.convection) gather_local_velocity(full, nodes, wloc);
        M.setZero();
        accumulate_velocity_block(M, tab, mesh, ci, cj, ck, surface, params,
                                  kern, wloc, E, T);
        for (int n = 0; n < 27; ++n)
          for (int c = 0; c < 3; ++c) gdof[3 * n + c] = sp.vdof(nodes[n], c);
        // Structural zeros are kept so the stored pattern is the full 3x3
        // node-pair coupling regardless of which forms are enabled; value
        // refills can then never need an insertion.
        for (int i = 0; i < 81; ++i) {
          if (gdof[i] < 0) continue;
          for (int j = 0; j < 81; ++j)
            if (gdof[j] >= 0) sink.add(gdof[i], gdof[j], M(i, j));
        }
        // Divergence coupling with the same eps*r measure as the momentum
        // rows: B in the constraint rows, -B^T in the momentum rows.
        for (int q = 0; q < tab.points(); ++q) {
          const auto x = tab.point(mesh, ci, cj, ck, q);
          const double r = x[1];
          const double wq = tab.weight[q] * eps * r;
          const auto& val = tab.q2_val[q];
          const auto& grad = tab.q2_grad[q];
          const auto& pv = tab.q1_val[q];
          for (int n = 0; n < 27; ++n)
            for (int c = 0; c < 3; ++c) {
              const int col = sp.vdof(nodes[n], c);
              if (col < 0) continue;
              const double dv = grad[n][c] + (c == 1 ? val[n] / r : 0.0);
              if (dv == 0.0) continue;
              for (int pm = 0; pm < 8; ++pm) {
                const double v = wq * pv[pm] * dv;
                sink.add(nv + pnodes_[pm], col, v);
                sink.add(col, nv + pnodes_[pm], -v);
              }
            }
        }
      }
}

}  // namespace

SparseMat assemble_saddle(const OperatorBlocks& blocks,
                          const BladeSurface& surface, const FESpacePair& sp,
                          const GeometryParams& params,
                          const AssemblyOptions& opt) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(sp.mesh.cell_count()) *
                (81 * 81 + 2 * 8 * 81));
  TripletSink sink{trips};
  saddle_pass(sink, blocks, surface, sp, params, opt);
  SparseMat S(sp.total_dofs(), sp.total_dofs());
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

void refill_saddle(SparseMat& S, const OperatorBlocks& blocks,
                   const BladeSurface& surface, const FESpacePair& sp,
                   const GeometryParams& params, const AssemblyOptions& opt) {
  if (S.rows() != sp.total_dofs() || S.cols() != sp.total_dofs())
    throw std::invalid_argument("refill_saddle: operator size mismatch");
  if (!S.isCompressed()) S.makeCompressed();
  const Eigen::Index nnz = S.nonZeros();
  std::fill(S.valuePtr(), S.valuePtr() + nnz, 0.0);
  RefillSink sink{S};
  saddle_pass(sink, blocks, surface, sp, params, opt);
  if (S.nonZeros() != nnz)
    throw std::logic_error(
        "refill_saddle: pattern grew; prime the operator with assemble_saddle "
        "on the same space");
}

double kinetic_face_flux(const Eigen::VectorXd& u, int side,
                         const BladeSurface& surface, const FESpacePair& sp,
                         const GeometryParams& params,
                         const AssemblyOptions& opt) {
  const Mesh& mesh = sp.mesh;
  const FaceBasisTable ft = make_face_table(mesh, 0, side, opt.order);
  const auto full = expand_velocity(sp, u.head(sp.vel_dofs()));
  const double eps = params.epsilon();
  const int ci = side == 0 ? 0 : mesh.cells(0) - 1;
  int nodes[27];
  double flux = 0.0;
  for (int cj = 0; cj < mesh.cells(1); ++cj)
    for (int ck = 0; ck < mesh.cells(2); ++ck) {
      cell_q2_nodes(mesh, ci, cj, ck, nodes);
      for (int q = 0; q < ft.points(); ++q) {
        const auto x = ft.point(mesh, cj, ck, q);
        const double r = x[1];
        const SurfaceJet th = surface.jet(x[0], x[1]);
        const MetricSample m = metric_at(th, r, params);
        double wv[3] = {0, 0, 0};
        for (int n = 0; n < 27; ++n) {
          const double v = ft.q2_val[q][n];
          if (v == 0.0) continue;
          for (int c = 0; c < 3; ++c) wv[c] += full[c][nodes[n]] * v;
        }
        double norm2 = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) norm2 += m.g_cov[i][j] * wv[i] * wv[j];
        flux += ft.weight[q] * 0.5 * norm2 * wv[0] * eps * r;
      }
    }
  return flux;
}

}  // namespace bladepass
