#include "bladepass/geometry.hpp"

#include <stdexcept>

namespace bladepass {

std::array<double, 3> surface_point(const BladeSurface& surface, double x1,
                                    double x2, double xi,
                                    const GeometryParams& params) {
  if (!surface.domain().contains(x1, x2))
    throw std::domain_error("surface_point: (x1,x2) outside D");
  if (xi < -1.0 || xi > 1.0)
    throw std::domain_error("surface_point: |xi| > 1");
  double theta = params.epsilon() * xi + surface.value(x1, x2);
  return {x2, theta, x1};
}

MetricSample metric_at(const SurfaceJet& theta, double r,
                       const GeometryParams& params) {
  if (!(r > 0.0)) throw std::domain_error("metric_at: r must be positive");
  double eps = params.epsilon();
  double T[2] = {theta.d1, theta.d2};
  double r2 = r * r;

  MetricSample m;
  m.grad_theta_sq = T[0] * T[0] + T[1] * T[1];
  m.a_det = 1.0 + r2 * m.grad_theta_sq;
  for (int a = 0; a < 2; ++a)
    for (int b = a; b < 2; ++b)
      m.a_ab[a][b] = m.a_ab[b][a] = (a == b ? 1.0 : 0.0) + r2 * T[a] * T[b];

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m.g_cov[a][b] = m.a_ab[a][b];
    m.g_cov[2][a] = m.g_cov[a][2] = eps * r2 * T[a];
  }
  m.g_cov[2][2] = eps * eps * r2;

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m.g_con[a][b] = (a == b ? 1.0 : 0.0);
    m.g_con[2][a] = m.g_con[a][2] = -T[a] / eps;
  }
  m.g_con[2][2] = m.a_det / (eps * eps * r2);

  m.sqrt_g = eps * r;
  return m;
}

MetricSample metric_at(const BladeSurface& surface, double x1, double x2,
                       const GeometryParams& params) {
  if (!surface.domain().contains(x1, x2))
    throw std::domain_error("metric_at: (x1,x2) outside D");
  return metric_at(surface.jet(x1, x2), x2, params);
}

ChristoffelSample christoffel_at(const SurfaceJet& theta, double r,
                                 const GeometryParams& params) {
  if (!(r > 0.0))
    throw std::domain_error("christoffel_at: r must be positive");
  double eps = params.epsilon();
  double T[2] = {theta.d1, theta.d2};

  // Lower-index pairs are filled on the upper triangle and mirrored so the
  // symmetry of the connection holds bitwise, not just to rounding.
  ChristoffelSample c = {};
  for (int a = 0; a < 2; ++a) {
    double radial = (a == 1) ? 1.0 : 0.0;  // delta_{a, x^2 direction}
    for (int b = 0; b < 2; ++b) {
      for (int d = b; d < 2; ++d)
        c.gamma[a][b][d] = c.gamma[a][d][b] = -r * radial * T[b] * T[d];
      c.gamma[a][2][b] = c.gamma[a][b][2] = -eps * r * radial * T[b];
    }
    c.gamma[a][2][2] = -eps * eps * r * radial;
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      double da = (a == 1) ? 1.0 : 0.0, db = (b == 1) ? 1.0 : 0.0;
      c.gamma[2][a][b] = c.gamma[2][b][a] =
          ((da * T[b] + db * T[a]) / r + theta.hess(a, b) +
           r * T[1] * T[a] * T[b]) /
          eps;
    }
    double da = (a == 1) ? 1.0 : 0.0;
    c.gamma[2][2][a] = c.gamma[2][a][2] = da / r + r * T[1] * T[a];
  }
  c.gamma[2][2][2] = eps * r * T[1];
  return c;
}

ChristoffelSample christoffel_at(const BladeSurface& surface, double x1,
                                 double x2, const GeometryParams& params) {
  if (!surface.domain().contains(x1, x2))
    throw std::domain_error("christoffel_at: (x1,x2) outside D");
  return christoffel_at(surface.jet(x1, x2), x2, params);
}

ChristoffelGradSample christoffel_grad_at(const SurfaceJet& theta, double r,
                                          const GeometryParams& params) {
  if (!(r > 0.0))
    throw std::domain_error("christoffel_grad_at: r must be positive");
  double eps = params.epsilon();
  double T[2] = {theta.d1, theta.d2};
  double H[2][2] = {{theta.d11, theta.d12}, {theta.d12, theta.d22}};

  ChristoffelGradSample g = {};
  for (int cc = 0; cc < 2; ++cc) {
    double dr = (cc == 1) ? 1.0 : 0.0;  // d r / d x^c
    auto& d = g.dgamma[cc];
    for (int a = 0; a < 2; ++a) {
      double radial = (a == 1) ? 1.0 : 0.0;
      for (int b = 0; b < 2; ++b) {
        for (int e = b; e < 2; ++e)
          d[a][b][e] = d[a][e][b] =
              -radial * (dr * T[b] * T[e] +
                         r * (H[b][cc] * T[e] + T[b] * H[e][cc]));
        d[a][2][b] = d[a][b][2] = -eps * radial * (dr * T[b] + r * H[b][cc]);
      }
      d[a][2][2] = -eps * eps * radial * dr;
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = a; b < 2; ++b) {
        double da = (a == 1) ? 1.0 : 0.0, db = (b == 1) ? 1.0 : 0.0;
        d[2][a][b] = d[2][b][a] =
            (-dr / (r * r) * (da * T[b] + db * T[a]) +
             (da * H[b][cc] + db * H[a][cc]) / r + theta.third(a, b, cc) +
             dr * T[1] * T[a] * T[b] +
             r * (H[1][cc] * T[a] * T[b] + T[1] * H[a][cc] * T[b] +
                  T[1] * T[a] * H[b][cc])) /
            eps;
      }
      double da = (a == 1) ? 1.0 : 0.0;
      d[2][2][a] = d[2][a][2] = -dr * da / (r * r) + dr * T[1] * T[a] +
                                r * (H[1][cc] * T[a] + T[1] * H[a][cc]);
    }
    d[2][2][2] = eps * (dr * T[1] + r * H[1][cc]);
  }
  return g;
}

MetricVariation metric_variation(const SurfaceJet& theta,
                                 const SurfaceJet& eta, double r,
                                 const GeometryParams& params) {
  if (!(r > 0.0))
    throw std::domain_error("metric_variation: r must be positive");
  double eps = params.epsilon();
  double r2 = r * r;
  double T[2] = {theta.d1, theta.d2};
  double E[2] = {eta.d1, eta.d2};
  double EH[2][2] = {{eta.d11, eta.d12}, {eta.d12, eta.d22}};

  MetricVariation v = {};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b)
      v.dg_cov[a][b] = r2 * (E[a] * T[b] + T[a] * E[b]);
    v.dg_cov[2][a] = v.dg_cov[a][2] = eps * r2 * E[a];
  }

  for (int a = 0; a < 2; ++a) v.dg_con[2][a] = v.dg_con[a][2] = -E[a] / eps;
  v.dg_con[2][2] = 2.0 * (T[0] * E[0] + T[1] * E[1]) / (eps * eps);

  for (int a = 0; a < 2; ++a) {
    double radial = (a == 1) ? 1.0 : 0.0;
    for (int b = 0; b < 2; ++b) {
      for (int d = b; d < 2; ++d)
        v.dgamma[a][b][d] = v.dgamma[a][d][b] =
            -r * radial * (E[b] * T[d] + T[b] * E[d]);
      v.dgamma[a][2][b] = v.dgamma[a][b][2] = -eps * r * radial * E[b];
    }
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      double da = (a == 1) ? 1.0 : 0.0, db = (b == 1) ? 1.0 : 0.0;
      v.dgamma[2][a][b] = v.dgamma[2][b][a] =
          ((da * E[b] + db * E[a]) / r + EH[a][b] +
           r * (E[1] * T[a] * T[b] + T[1] * E[a] * T[b] + T[1] * T[a] * E[b])) /
          eps;
    }
    v.dgamma[2][2][a] = v.dgamma[2][a][2] = r * (E[1] * T[a] + T[1] * E[a]);
  }
  v.dgamma[2][2][2] = eps * r * E[1];
  return v;
}

}  // namespace bladepass
