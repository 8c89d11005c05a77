#include "bladepass/tensor_fields.hpp"

#include <stdexcept>

namespace bladepass {

namespace {

inline double kd(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

VelocityGradientSample covariant_gradient(const VelocityJet& w,
                                          const SurfaceJet& theta, double r,
                                          const GeometryParams& params) {
  if (!(r > 0.0))
    throw std::domain_error("covariant_gradient: r must be positive");
  double eps = params.epsilon();
  double T[2] = {theta.d1, theta.d2};

  VelocityGradientSample g;
  g.pi = eps * w.w[2] + w.w[0] * T[0] + w.w[1] * T[1];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b)
      g.nabla[a][b] = w.dw[b][a] - r * kd(b, 1) * T[a] * g.pi;
    // a_{2 alpha} couples the xi-component derivative back to the surface
    double a2 = kd(a, 1) + r * r * T[1] * T[a];
    g.nabla[a][2] = w.dw[2][a] + w.w[1] * T[a] / (eps * r) +
                    (w.w[0] * theta.hess(a, 0) + w.w[1] * theta.hess(a, 1)) /
                        eps +
                    a2 * g.pi / (eps * r);
  }
  for (int a = 0; a < 2; ++a)
    g.nabla[2][a] = w.dw[a][2] - eps * r * kd(a, 1) * g.pi;
  g.nabla[2][2] = w.dw[2][2] + w.w[1] / r + r * T[1] * g.pi;

  // The trace collapses to a surface-independent expression.
  g.div = w.dw[0][0] + w.dw[1][1] + w.w[1] / r + w.dw[2][2];
  return g;
}

StrainSample strain_rate(const VelocityJet& w, const SurfaceJet& theta,
                         double r, const GeometryParams& params) {
  if (!(r > 0.0)) throw std::domain_error("strain_rate: r must be positive");
  double eps = params.epsilon();
  double r2 = r * r, er2 = eps * r2;
  double T[2] = {theta.d1, theta.d2};

  StrainSample s = {};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b)
      s.phi[a][b] = 0.5 * (w.dw[a][b] + w.dw[b][a]);
    s.phi[2][a] = s.phi[a][2] =
        0.5 * (w.dw[a][2] + eps * eps * r2 * w.dw[2][a]);
  }
  s.phi[2][2] = eps * eps * r2 * (w.dw[2][2] + w.w[1] / r);

  for (int l = 0; l < 2; ++l) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b)
        s.psi_l[l][a][b] =
            0.5 * er2 * (w.dw[2][a] * kd(l, b) + w.dw[2][b] * kd(l, a));
      s.psi_l[l][2][a] = s.psi_l[l][a][2] =
          0.5 * er2 *
          (w.dw[l][a] + kd(l, a) * (w.dw[2][2] + 2.0 * w.w[1] / r));
    }
    s.psi_l[l][2][2] = er2 * w.dw[l][2];
  }

  for (int l = 0; l < 2; ++l) {
    for (int sg = 0; sg < 2; ++sg) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b)
          s.psi_ls[l][sg][a][b] =
              0.5 * r2 *
              (w.dw[l][a] * kd(b, sg) + w.dw[l][b] * kd(sg, a) +
               2.0 / r * w.w[1] * kd(a, l) * kd(sg, b));
        s.psi_ls[l][sg][2][a] = s.psi_ls[l][sg][a][2] =
            0.5 * r2 * w.dw[l][2] * kd(a, sg);
      }
      s.psi_ls[l][sg][2][2] = 0.0;
    }
  }

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double acc = 0.0;
      for (int sg = 0; sg < 2; ++sg)
        acc += w.w[sg] *
               (T[a] * theta.hess(sg, b) + T[b] * theta.hess(sg, a));
      s.e_star[a][b] = 0.5 * r2 * acc;
    }
    double acc = 0.0;
    for (int sg = 0; sg < 2; ++sg) acc += w.w[sg] * theta.hess(sg, a);
    s.e_star[2][a] = s.e_star[a][2] = 0.5 * er2 * acc;
  }
  s.e_star[2][2] = 0.0;

  // Only the (lambda,sigma)-symmetric part of psi_ls enters the tensor, so
  // sum the upper triangle and mirror to keep e bitwise symmetric.
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      double acc = s.phi[i][j] + s.e_star[i][j];
      for (int l = 0; l < 2; ++l) {
        acc += s.psi_l[l][i][j] * T[l];
        for (int sg = 0; sg < 2; ++sg)
          acc += s.psi_ls[l][sg][i][j] * T[l] * T[sg];
      }
      s.e[i][j] = s.e[j][i] = acc;
    }
  }
  return s;
}

StrainShapeDerivSample strain_shape_derivs(const VelocityJet& w,
                                           const SurfaceJet& theta, double r,
                                           const GeometryParams& params) {
  double eps = params.epsilon();
  double r2 = r * r;
  double T[2] = {theta.d1, theta.d2};
  StrainSample s = strain_rate(w, theta, r, params);

  StrainShapeDerivSample d = {};
  for (int l = 0; l < 2; ++l) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        double acc = s.psi_l[l][a][b];
        for (int sg = 0; sg < 2; ++sg)
          acc += (s.psi_ls[l][sg][a][b] + s.psi_ls[sg][l][a][b]) * T[sg];
        for (int sg = 0; sg < 2; ++sg)
          acc += 0.5 * r2 * w.w[sg] *
                 (kd(a, l) * theta.hess(sg, b) + kd(b, l) * theta.hess(a, sg));
        d.e_l[l][a][b] = acc;
      }
      double acc = s.psi_l[l][2][a];
      for (int nu = 0; nu < 2; ++nu)
        acc += (s.psi_ls[nu][l][2][a] + s.psi_ls[l][nu][2][a]) * T[nu];
      d.e_l[l][2][a] = d.e_l[l][a][2] = acc;
    }
    d.e_l[l][2][2] = s.psi_l[l][2][2];
  }

  for (int l = 0; l < 2; ++l) {
    for (int sg = 0; sg < 2; ++sg) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b)
          d.e_ls[l][sg][a][b] =
              0.5 * r2 * w.w[sg] * (T[a] * kd(b, l) + T[b] * kd(a, l));
        d.e_ls[l][sg][2][a] = d.e_ls[l][sg][a][2] =
            0.5 * eps * r2 * w.w[sg] * kd(a, l);
      }
      d.e_ls[l][sg][2][2] = 0.0;
    }
  }
  return d;
}

double viscous_contract(const double e[3][3], const double f[3][3],
                        const MetricSample& m, double mu, double lambda) {
  double eu[3][3];
  double tr_e = 0.0, tr_f = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          acc += m.g_con[i][k] * e[k][l] * m.g_con[l][j];
      eu[i][j] = acc;
      tr_e += m.g_con[i][j] * e[i][j];
      tr_f += m.g_con[i][j] * f[i][j];
    }
  }
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += eu[i][j] * f[i][j];
  return lambda * tr_e * tr_f + 2.0 * mu * acc;
}

double viscous_contract_variation(const double e[3][3], const double f[3][3],
                                  const MetricSample& m,
                                  const MetricVariation& var, double mu,
                                  double lambda) {
  double tr_e = 0.0, tr_f = 0.0, dtr_e = 0.0, dtr_f = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      tr_e += m.g_con[i][j] * e[i][j];
      tr_f += m.g_con[i][j] * f[i][j];
      dtr_e += var.dg_con[i][j] * e[i][j];
      dtr_f += var.dg_con[i][j] * f[i][j];
    }
  }
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          acc += (var.dg_con[i][k] * m.g_con[l][j] +
                  m.g_con[i][k] * var.dg_con[l][j]) *
                 e[k][l] * f[i][j];
  return lambda * (dtr_e * tr_f + tr_e * dtr_f) + 2.0 * mu * acc;
}

double dissipation_density(const VelocityJet& w, const SurfaceJet& theta,
                           double r, const GeometryParams& params) {
  StrainSample s = strain_rate(w, theta, r, params);
  MetricSample m = metric_at(theta, r, params);
  return viscous_contract(s.e, s.e, m, params.mu, 0.0);
}

std::array<double, 6> sym_to6(const double e[3][3]) {
  return {e[0][0], e[1][1], e[2][2], e[0][1], e[0][2], e[1][2]};
}

namespace {

constexpr int kPairI[6] = {0, 1, 2, 0, 0, 1};
constexpr int kPairJ[6] = {0, 1, 2, 1, 2, 2};

void unit_sym(int p, double out[3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = 0.0;
  out[kPairI[p]][kPairJ[p]] = 1.0;
  out[kPairJ[p]][kPairI[p]] = 1.0;
}

}  // namespace

Eigen::Matrix<double, 6, 6> stress_matrix(const MetricSample& m, double mu,
                                          double lambda) {
  Eigen::Matrix<double, 6, 6> s;
  double bp[3][3], bq[3][3];
  for (int p = 0; p < 6; ++p) {
    unit_sym(p, bp);
    for (int q = p; q < 6; ++q) {
      unit_sym(q, bq);
      s(p, q) = s(q, p) = viscous_contract(bp, bq, m, mu, lambda);
    }
  }
  return s;
}

Eigen::Matrix<double, 6, 6> stress_matrix_variation(const MetricSample& m,
                                                    const MetricVariation& var,
                                                    double mu, double lambda) {
  Eigen::Matrix<double, 6, 6> s;
  double bp[3][3], bq[3][3];
  for (int p = 0; p < 6; ++p) {
    unit_sym(p, bp);
    for (int q = p; q < 6; ++q) {
      unit_sym(q, bq);
      s(p, q) = s(q, p) = viscous_contract_variation(bp, bq, m, var, mu, lambda);
    }
  }
  return s;
}

double energy_density(const StrainSample& a, const StrainSample& b, double r,
                      double eps, double mu) {
  double w2 = 1.0 / ((r * eps) * (r * eps));
  double surf = 0.0, mixed = 0.0;
  for (int al = 0; al < 2; ++al) {
    for (int be = 0; be < 2; ++be) surf += a.phi[al][be] * b.phi[al][be];
    mixed += a.phi[2][al] * b.phi[2][al];
  }
  return 2.0 * mu *
         (surf + 2.0 * w2 * mixed + w2 * w2 * a.phi[2][2] * b.phi[2][2]);
}

double coriolis_density(const double w[3], const double v[3],
                        const SurfaceJet& theta, double r,
                        const GeometryParams& params) {
  double eps = params.epsilon();
  double pi = eps * w[2] + w[0] * theta.d1 + w[1] * theta.d2;
  return 2.0 * r * params.omega *
         (w[1] * theta.d1 * v[0] + (w[1] * theta.d2 - pi) * v[1] +
          eps * w[1] * v[2]);
}

double coriolis_density_variation(const double w[3], const double v[3],
                                  const SurfaceJet& eta, double r,
                                  const GeometryParams& params) {
  return 2.0 * r * params.omega *
         (w[1] * (eta.d1 * v[0] + eta.d2 * v[1]) -
          (w[0] * eta.d1 + w[1] * eta.d2) * v[1]);
}

double convection_density(const double w[3], const VelocityGradientSample& gu,
                          const double v[3], const MetricSample& m) {
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    double conv_k = 0.0;
    for (int j = 0; j < 3; ++j) conv_k += w[j] * gu.nabla[j][k];
    for (int mm = 0; mm < 3; ++mm) acc += m.g_cov[k][mm] * conv_k * v[mm];
  }
  return acc;
}

double convection_density_variation(const double w[3], const double u[3],
                                    const VelocityGradientSample& gu,
                                    const double v[3], const MetricSample& m,
                                    const MetricVariation& var) {
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    double conv_k = 0.0, dconv_k = 0.0;
    for (int j = 0; j < 3; ++j) {
      conv_k += w[j] * gu.nabla[j][k];
      for (int l = 0; l < 3; ++l)
        dconv_k += w[j] * var.dgamma[k][j][l] * u[l];
    }
    for (int mm = 0; mm < 3; ++mm)
      acc += var.dg_cov[k][mm] * conv_k * v[mm] +
             m.g_cov[k][mm] * dconv_k * v[mm];
  }
  return acc;
}

std::array<double, 3> centrifugal_contravariant(const SurfaceJet& theta,
                                                double r,
                                                const GeometryParams& params) {
  double om2r = params.omega * params.omega * r;
  return {0.0, om2r, -om2r * theta.d2 / params.epsilon()};
}

std::array<double, 3> coriolis_contravariant(const double w[3],
                                             const SurfaceJet& theta, double r,
                                             const GeometryParams& params) {
  double eps = params.epsilon();
  double pi = eps * w[2] + w[0] * theta.d1 + w[1] * theta.d2;
  double cov[3] = {2.0 * r * params.omega * w[1] * theta.d1,
                   2.0 * r * params.omega * (w[1] * theta.d2 - pi),
                   2.0 * r * params.omega * eps * w[1]};
  MetricSample m = metric_at(theta, r, params);
  std::array<double, 3> out = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m.g_con[i][j] * cov[j];
  return out;
}

std::array<double, 3> strong_momentum_residual(const std::array<FieldJet, 3>& w,
                                               const FieldJet& p,
                                               const SurfaceJet& theta,
                                               double r,
                                               const GeometryParams& params) {
  MetricSample m = metric_at(theta, r, params);
  ChristoffelSample ch = christoffel_at(theta, r, params);
  ChristoffelGradSample dch = christoffel_grad_at(theta, r, params);
  VelocityJet v1 = VelocityJet::from_fields(w);
  VelocityGradientSample grad = covariant_gradient(v1, theta, r, params);

  // d_j (nabla_k w^i); the Christoffel symbols carry no xi dependence.
  double dnab[3][3][3];
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        double acc = w[i].hess(j, k);
        for (int l = 0; l < 3; ++l) {
          if (j < 2) acc += dch.dgamma[j][i][k][l] * v1.w[l];
          acc += ch.gamma[i][k][l] * w[l].d[j];
        }
        dnab[j][k][i] = acc;
      }
    }
  }

  std::array<double, 3> lap = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        double term = dnab[j][k][i];
        for (int l = 0; l < 3; ++l)
          term += ch.gamma[i][j][l] * grad.nabla[k][l] -
                  ch.gamma[l][j][k] * grad.nabla[l][i];
        acc += m.g_con[j][k] * term;
      }
    }
    lap[i] = acc;
  }

  double ddiv[3];
  for (int j = 0; j < 3; ++j)
    ddiv[j] = w[0].hess(j, 0) + w[1].hess(j, 1) + w[2].hess(j, 2) +
              w[1].d[j] / r - (j == 1 ? v1.w[1] / (r * r) : 0.0);

  std::array<double, 3> cor = coriolis_contravariant(v1.w, theta, r, params);
  std::array<double, 3> cf = centrifugal_contravariant(theta, r, params);

  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    double conv = 0.0;
    for (int j = 0; j < 3; ++j) conv += v1.w[j] * grad.nabla[j][i];
    double gradp = 0.0, graddiv = 0.0;
    for (int j = 0; j < 3; ++j) {
      gradp += m.g_con[i][j] * p.d[j];
      graddiv += m.g_con[i][j] * ddiv[j];
    }
    out[i] =
        conv + cor[i] - cf[i] + gradp - params.mu * (lap[i] + graddiv);
  }
  return out;
}

}  // namespace bladepass
