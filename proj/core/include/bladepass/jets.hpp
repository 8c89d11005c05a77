#pragma once

#include <array>
#include <cmath>

namespace bladepass {

// Scalar jet of a surface field on the meridional domain D: value plus all
// partial derivatives up to third order in (x1, x2).  Third order is needed
// because the strong momentum operator differentiates Christoffel symbols,
// which already contain second derivatives of the surface.
//
// The type doubles as a forward-mode AD scalar: seed coordinates with
// SurfaceJet::coordinate and evaluate any smooth composite expression.
struct SurfaceJet {
  double v = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
  double d111 = 0.0, d112 = 0.0, d122 = 0.0, d222 = 0.0;

  static SurfaceJet constant(double c) {
    SurfaceJet j;
    j.v = c;
    return j;
  }
  // axis: 0 -> x1, 1 -> x2
  static SurfaceJet coordinate(int axis, double x) {
    SurfaceJet j;
    j.v = x;
    (axis == 0 ? j.d1 : j.d2) = 1.0;
    return j;
  }

  // First/second derivatives as small arrays, indexed by axis.
  std::array<double, 2> grad() const { return {d1, d2}; }
  double hess(int a, int b) const {
    return (a == 0) ? (b == 0 ? d11 : d12) : (b == 0 ? d12 : d22);
  }
  double third(int a, int b, int c) const {
    const int s = a + b + c;  // symmetric: only the multiset matters
    return s == 0 ? d111 : s == 1 ? d112 : s == 2 ? d122 : d222;
  }
};

SurfaceJet operator+(const SurfaceJet& f, const SurfaceJet& g);
SurfaceJet operator-(const SurfaceJet& f, const SurfaceJet& g);
SurfaceJet operator-(const SurfaceJet& f);
SurfaceJet operator*(const SurfaceJet& f, const SurfaceJet& g);
SurfaceJet operator/(const SurfaceJet& f, const SurfaceJet& g);
SurfaceJet operator+(const SurfaceJet& f, double c);
SurfaceJet operator+(double c, const SurfaceJet& g);
SurfaceJet operator-(const SurfaceJet& f, double c);
SurfaceJet operator-(double c, const SurfaceJet& g);
SurfaceJet operator*(const SurfaceJet& f, double c);
SurfaceJet operator*(double c, const SurfaceJet& g);
SurfaceJet operator/(const SurfaceJet& f, double c);
SurfaceJet operator/(double c, const SurfaceJet& g);

SurfaceJet sin(const SurfaceJet& g);
SurfaceJet cos(const SurfaceJet& g);
SurfaceJet tan(const SurfaceJet& g);
SurfaceJet exp(const SurfaceJet& g);
SurfaceJet log(const SurfaceJet& g);
SurfaceJet sqrt(const SurfaceJet& g);
SurfaceJet pow(const SurfaceJet& g, double c);
SurfaceJet pow(const SurfaceJet& g, const SurfaceJet& c);

// Scalar jet of a flow field on the computational box (x1, x2, xi): value,
// gradient, and symmetric Hessian.  Axis order is (x1, x2, xi).
struct FieldJet {
  double v = 0.0;
  std::array<double, 3> d{0.0, 0.0, 0.0};
  // Unique second derivatives: 11, 22, 33, 12, 13, 23.
  std::array<double, 6> dd{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

  static int pair_index(int a, int b) {
    if (a == b) return a;
    const int lo = a < b ? a : b, hi = a < b ? b : a;
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }
  double hess(int a, int b) const { return dd[pair_index(a, b)]; }
  double& hess_ref(int a, int b) { return dd[pair_index(a, b)]; }

  static FieldJet constant(double c) {
    FieldJet j;
    j.v = c;
    return j;
  }
  static FieldJet coordinate(int axis, double x) {
    FieldJet j;
    j.v = x;
    j.d[axis] = 1.0;
    return j;
  }
};

FieldJet operator+(const FieldJet& f, const FieldJet& g);
FieldJet operator-(const FieldJet& f, const FieldJet& g);
FieldJet operator-(const FieldJet& f);
FieldJet operator*(const FieldJet& f, const FieldJet& g);
FieldJet operator/(const FieldJet& f, const FieldJet& g);
FieldJet operator+(const FieldJet& f, double c);
FieldJet operator+(double c, const FieldJet& g);
FieldJet operator-(const FieldJet& f, double c);
FieldJet operator-(double c, const FieldJet& g);
FieldJet operator*(const FieldJet& f, double c);
FieldJet operator*(double c, const FieldJet& g);
FieldJet operator/(const FieldJet& f, double c);
FieldJet operator/(double c, const FieldJet& g);

FieldJet sin(const FieldJet& g);
FieldJet cos(const FieldJet& g);
FieldJet tan(const FieldJet& g);
FieldJet exp(const FieldJet& g);
FieldJet log(const FieldJet& g);
FieldJet sqrt(const FieldJet& g);
FieldJet pow(const FieldJet& g, double c);
FieldJet pow(const FieldJet& g, const FieldJet& c);

}  // namespace bladepass
