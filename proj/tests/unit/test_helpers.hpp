#pragma once

#include <cmath>

#include "bladepass/jets.hpp"
#include "bladepass/rng.hpp"

namespace bladepass::testing {

inline SurfaceJet random_surface_jet(Rng& rng, double scale) {
  SurfaceJet j;
  j.v = rng.uniform(-scale, scale);
  j.d1 = rng.uniform(-scale, scale);
  j.d2 = rng.uniform(-scale, scale);
  j.d11 = rng.uniform(-scale, scale);
  j.d12 = rng.uniform(-scale, scale);
  j.d22 = rng.uniform(-scale, scale);
  j.d111 = rng.uniform(-scale, scale);
  j.d112 = rng.uniform(-scale, scale);
  j.d122 = rng.uniform(-scale, scale);
  j.d222 = rng.uniform(-scale, scale);
  return j;
}

// An analytic test surface with nonvanishing derivatives of every order.
inline SurfaceJet analytic_theta(double x1, double x2) {
  SurfaceJet a = SurfaceJet::coordinate(0, x1);
  SurfaceJet b = SurfaceJet::coordinate(1, x2);
  return sin(a * b) * 0.2 + cos(a - b * 0.5) * 0.15 + a * b * 0.1;
}

inline FieldJet analytic_field(double x1, double x2, double xi, int which) {
  FieldJet a = FieldJet::coordinate(0, x1);
  FieldJet b = FieldJet::coordinate(1, x2);
  FieldJet c = FieldJet::coordinate(2, xi);
  switch (which % 3) {
    case 0:
      return sin(a * b) * 0.4 + c * c * b + exp(c * 0.3) * 0.2;
    case 1:
      return cos(b + c) * a + b * b * 0.1;
    default:
      return exp(a * 0.2 - c * 0.1) + a * c * b * 0.3;
  }
}

}  // namespace bladepass::testing
