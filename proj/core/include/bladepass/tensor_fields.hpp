#pragma once

#include <Eigen/Dense>
#include <array>

#include "bladepass/geometry.hpp"
#include "bladepass/jets.hpp"

namespace bladepass {

// Pointwise velocity data: contravariant components and their first partials,
// dw[i][c] = d w^i / d x^c (c = 2 is the xi direction).
struct VelocityJet {
  double w[3] = {0, 0, 0};
  double dw[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static VelocityJet from_fields(const std::array<FieldJet, 3>& f) {
    VelocityJet v;
    for (int i = 0; i < 3; ++i) {
      v.w[i] = f[i].v;
      for (int c = 0; c < 3; ++c) v.dw[i][c] = f[i].d[c];
    }
    return v;
  }
};

struct VelocityGradientSample {
  double nabla[3][3];  // nabla[i][j] = (covariant derivative)_i w^j
  double div;
  double pi;           // eps w^3 + w^beta Theta_beta
};

struct StrainSample {
  double e[3][3];
  double phi[3][3];
  double psi_l[2][3][3];
  double psi_ls[2][2][3][3];
  double e_star[3][3];
};

// Frozen-velocity derivatives of the strain with respect to the surface
// slope and curvature entries.
struct StrainShapeDerivSample {
  double e_l[2][3][3];
  double e_ls[2][2][3][3];
};

VelocityGradientSample covariant_gradient(const VelocityJet& w,
                                          const SurfaceJet& theta, double r,
                                          const GeometryParams& params);

StrainSample strain_rate(const VelocityJet& w, const SurfaceJet& theta,
                         double r, const GeometryParams& params);

StrainShapeDerivSample strain_shape_derivs(const VelocityJet& w,
                                           const SurfaceJet& theta, double r,
                                           const GeometryParams& params);

// Full fourth-order viscous contraction of two symmetric tensors.  lambda
// defaults to zero (incompressible mode); pass -2mu/3 for the compressible
// Stokes relation.
double viscous_contract(const double e[3][3], const double f[3][3],
                        const MetricSample& m, double mu, double lambda = 0.0);

// Directional derivative of viscous_contract in the surface, at frozen e, f.
double viscous_contract_variation(const double e[3][3], const double f[3][3],
                                  const MetricSample& m,
                                  const MetricVariation& var, double mu,
                                  double lambda = 0.0);

double dissipation_density(const VelocityJet& w, const SurfaceJet& theta,
                           double r, const GeometryParams& params);

// Symmetric 3x3 <-> 6-vector packing (order 11, 22, 33, 12, 13, 23).
std::array<double, 6> sym_to6(const double e[3][3]);

// 6x6 matrix S with pack(e)^T S pack(f) = viscous_contract(e, f).
Eigen::Matrix<double, 6, 6> stress_matrix(const MetricSample& m, double mu,
                                          double lambda = 0.0);
Eigen::Matrix<double, 6, 6> stress_matrix_variation(const MetricSample& m,
                                                    const MetricVariation& var,
                                                    double mu,
                                                    double lambda = 0.0);

// Integrand of the mesh-independent energy inner product ((w,v)) (without
// the eps*r measure): the phi-parts only, with r,eps weights.
double energy_density(const StrainSample& a, const StrainSample& b, double r,
                      double eps, double mu);

// Coriolis pairing integrand (without the eps*r measure).
double coriolis_density(const double w[3], const double v[3],
                        const SurfaceJet& theta, double r,
                        const GeometryParams& params);
// Its directional derivative in the surface along eta, frozen w, v.
double coriolis_density_variation(const double w[3], const double v[3],
                                  const SurfaceJet& eta, double r,
                                  const GeometryParams& params);

// Convection pairing integrand g_{km} (w^j nabla_j u^k) v^m (no measure).
double convection_density(const double w[3], const VelocityGradientSample& gu,
                          const double v[3], const MetricSample& m);
// Directional derivative at frozen w, u, v: the metric and the Christoffel
// part of nabla u both move.
double convection_density_variation(const double w[3], const double u[3],
                                    const VelocityGradientSample& gu,
                                    const double v[3], const MetricSample& m,
                                    const MetricVariation& var);

// Contravariant centrifugal body force (0, om^2 r, -om^2 r Theta_2 / eps).
std::array<double, 3> centrifugal_contravariant(const SurfaceJet& theta,
                                                double r,
                                                const GeometryParams& params);

// Contravariant Coriolis term: metric-raised covariant components
// 2 r om (w^2 Theta_1, w^2 Theta_2 - Pi, eps w^2).
std::array<double, 3> coriolis_contravariant(const double w[3],
                                             const SurfaceJet& theta, double r,
                                             const GeometryParams& params);

// Contravariant components of the stationary momentum operator
//   w . grad w + coriolis - centrifugal + grad p - mu (lap w + grad div w)
// evaluated from second-order jets of (w, p).
std::array<double, 3> strong_momentum_residual(const std::array<FieldJet, 3>& w,
                                               const FieldJet& p,
                                               const SurfaceJet& theta,
                                               double r,
                                               const GeometryParams& params);

}  // namespace bladepass
