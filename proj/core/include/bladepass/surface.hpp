#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bladepass/expression.hpp"
#include "bladepass/jets.hpp"
#include "bladepass/rng.hpp"
#include "bladepass/spline.hpp"

namespace bladepass {

// Meridional rectangle D = [z0,z1] x [r0,r1] with its design grid.
struct DomainSpec {
  double z0 = 0.0, z1 = 1.0;
  double r0 = 1.0, r1 = 2.0;
  int n1 = 4, n2 = 4;  // cells per direction

  void validate() const;  // throws std::invalid_argument on bad data
  bool contains(double x1, double x2) const {
    return x1 >= z0 && x1 <= z1 && x2 >= r0 && x2 <= r1;
  }
  double h1() const { return (z1 - z0) / n1; }
  double h2() const { return (r1 - r0) / n2; }
  double node1(int i) const { return z0 + h1() * i; }
  double node2(int j) const { return r0 + h2() * j; }
  int node_count() const { return (n1 + 1) * (n2 + 1); }
  int node_index(int i1, int i2) const { return i1 * (n2 + 1) + i2; }
};

// Passage constants. epsilon is derived from the blade count so the relation
// eps = pi/N can never drift.
struct GeometryParams {
  int blade_count = 4;
  double omega = 1.0;
  double mu = 1.0;

  double epsilon() const { return std::numbers::pi / blade_count; }
  void validate() const;
};

class DirectionField;

// Blade surface Theta on D: nodal values with a clamped bicubic interpolant,
// so Theta_a and Theta_ab (and the third partials the strong operators need)
// exist everywhere.  Boundary data: the nodal trace on the edge of the grid
// and the normal-slope trace used by the clamp.
class BladeSurface {
 public:
  BladeSurface(const DomainSpec& dom, std::vector<double> nodal,
               SurfaceSpline::EdgeSlopes slopes);

  static BladeSurface zero(const DomainSpec& dom);
  // Samples values and edge slopes from an analytic shape.
  static BladeSurface from_expression(const DomainSpec& dom,
                                      const Expression& expr);

  SurfaceJet jet(double x1, double x2) const { return spline_.jet(x1, x2); }
  double value(double x1, double x2) const { return spline_.value(x1, x2); }

  const DomainSpec& domain() const { return dom_; }
  const std::vector<double>& nodal() const { return nodal_; }
  const SurfaceSpline::EdgeSlopes& edge_slopes() const { return slopes_; }

  // sup |grad Theta| over an oversampled grid (the interpolant is smooth, so
  // a dense sample is an adequate sup estimate for the admissibility gate).
  double grad_sup(int oversample = 4) const;
  bool admissible(double k1_bound, int oversample = 4) const {
    return grad_sup(oversample) <= k1_bound;
  }

  // Theta + t * eta; interpolation is linear in the data, so the result's
  // interpolant is exactly spline(Theta) + t * spline(eta).
  BladeSurface perturbed(const DirectionField& eta, double t) const;

 private:
  DomainSpec dom_;
  std::vector<double> nodal_;
  SurfaceSpline::EdgeSlopes slopes_;
  SurfaceSpline spline_;
};

// Shape-perturbation direction: zero value and zero normal slope on the
// boundary of D, interior nodal values free.
class DirectionField {
 public:
  DirectionField(const DomainSpec& dom, std::vector<double> nodal);

  // Uniform interior nodal values in [-amplitude, amplitude].
  static DirectionField random(const DomainSpec& dom, Rng& rng,
                               double amplitude);
  // Samples an expression at interior nodes (boundary ring forced to zero).
  static DirectionField from_expression(const DomainSpec& dom,
                                        const Expression& expr);
  static DirectionField zero(const DomainSpec& dom);

  SurfaceJet jet(double x1, double x2) const { return spline_.jet(x1, x2); }
  const DomainSpec& domain() const { return dom_; }
  const std::vector<double>& nodal() const { return nodal_; }

 private:
  DomainSpec dom_;
  std::vector<double> nodal_;
  SurfaceSpline spline_;
};

// Cardinal interior design basis: chi_k is the clamped-spline interpolant of
// the k-th interior nodal indicator (zero boundary values and slopes).  The
// tensor structure makes each chi a product of two 1D cardinals, which keeps
// whole-basis evaluation cheap despite the global support of spline cardinal
// functions.
class ThetaBasis {
 public:
  explicit ThetaBasis(const DomainSpec& dom);

  int count() const { return (dom_.n1 - 1) * (dom_.n2 - 1); }
  // interior node (i1 in 1..n1-1, i2 in 1..n2-1) -> flat basis index
  int index(int i1, int i2) const { return (i1 - 1) * (dom_.n2 - 1) + (i2 - 1); }

  SurfaceJet jet(int k, double x1, double x2) const;

  // Evaluates all basis jets at once via the 1D factor evaluations.
  void jets_at(double x1, double x2, std::vector<SurfaceJet>& out) const;

  // The direction with interior nodal values = coeffs (cardinal property).
  DirectionField direction(const std::vector<double>& coeffs) const;

  const DomainSpec& domain() const { return dom_; }

 private:
  DomainSpec dom_;
  std::vector<Spline1> card1_;  // one per interior x1 node
  std::vector<Spline1> card2_;  // one per interior x2 node
};

}  // namespace bladepass
