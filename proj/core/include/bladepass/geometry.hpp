#pragma once

#include <array>

#include "bladepass/surface.hpp"

namespace bladepass {

// Index convention everywhere: 0,1 are the meridional directions x^1, x^2
// (so "the x^2 direction" is index 1) and 2 is the blade-normal coordinate xi.

struct MetricSample {
  double a_ab[2][2];      // surface metric
  double a_det;           // 1 + r^2 |grad Theta|^2
  double g_cov[3][3];
  double g_con[3][3];
  double sqrt_g;          // = eps * r, independent of Theta
  double grad_theta_sq;
};

struct ChristoffelSample {
  double gamma[3][3][3];  // gamma[i][j][k], symmetric in (j,k)
};

// Meridional derivatives of the Christoffel symbols; the xi-derivative
// vanishes identically because nothing depends on xi.
struct ChristoffelGradSample {
  double dgamma[2][3][3][3];  // dgamma[c][i][j][k] = d_c gamma[i][j][k]
};

// Directional first variations at frozen Theta along a direction jet eta;
// all entries are linear in (eta_a, eta_ab).
struct MetricVariation {
  double dg_cov[3][3];
  double dg_con[3][3];
  double dgamma[3][3][3];
};

// (r, theta, z) of the point (x1, x2, xi); throws std::domain_error outside D.
std::array<double, 3> surface_point(const BladeSurface& surface, double x1,
                                    double x2, double xi,
                                    const GeometryParams& params);

MetricSample metric_at(const SurfaceJet& theta, double r,
                       const GeometryParams& params);
MetricSample metric_at(const BladeSurface& surface, double x1, double x2,
                       const GeometryParams& params);

ChristoffelSample christoffel_at(const SurfaceJet& theta, double r,
                                 const GeometryParams& params);
ChristoffelSample christoffel_at(const BladeSurface& surface, double x1,
                                 double x2, const GeometryParams& params);

ChristoffelGradSample christoffel_grad_at(const SurfaceJet& theta, double r,
                                          const GeometryParams& params);

MetricVariation metric_variation(const SurfaceJet& theta,
                                 const SurfaceJet& eta, double r,
                                 const GeometryParams& params);

}  // namespace bladepass
