#include "bladepass/jets.hpp"

namespace bladepass {

SurfaceJet operator+(const SurfaceJet& f, const SurfaceJet& g) {
  SurfaceJet h;
  h.v = f.v + g.v;
  h.d1 = f.d1 + g.d1;
  h.d2 = f.d2 + g.d2;
  h.d11 = f.d11 + g.d11;
  h.d12 = f.d12 + g.d12;
  h.d22 = f.d22 + g.d22;
  h.d111 = f.d111 + g.d111;
  h.d112 = f.d112 + g.d112;
  h.d122 = f.d122 + g.d122;
  h.d222 = f.d222 + g.d222;
  return h;
}

SurfaceJet operator-(const SurfaceJet& f, const SurfaceJet& g) {
  SurfaceJet h;
  h.v = f.v - g.v;
  h.d1 = f.d1 - g.d1;
  h.d2 = f.d2 - g.d2;
  h.d11 = f.d11 - g.d11;
  h.d12 = f.d12 - g.d12;
  h.d22 = f.d22 - g.d22;
  h.d111 = f.d111 - g.d111;
  h.d112 = f.d112 - g.d112;
  h.d122 = f.d122 - g.d122;
  h.d222 = f.d222 - g.d222;
  return h;
}

SurfaceJet operator-(const SurfaceJet& f) {
  return SurfaceJet::constant(0.0) - f;
}

SurfaceJet operator*(const SurfaceJet& f, const SurfaceJet& g) {
  SurfaceJet h;
  h.v = f.v * g.v;
  h.d1 = f.d1 * g.v + f.v * g.d1;
  h.d2 = f.d2 * g.v + f.v * g.d2;
  h.d11 = f.d11 * g.v + 2.0 * f.d1 * g.d1 + f.v * g.d11;
  h.d12 = f.d12 * g.v + f.d1 * g.d2 + f.d2 * g.d1 + f.v * g.d12;
  h.d22 = f.d22 * g.v + 2.0 * f.d2 * g.d2 + f.v * g.d22;
  h.d111 = f.d111 * g.v + 3.0 * f.d11 * g.d1 + 3.0 * f.d1 * g.d11 +
           f.v * g.d111;
  h.d112 = f.d112 * g.v + f.d11 * g.d2 + 2.0 * f.d12 * g.d1 +
           2.0 * f.d1 * g.d12 + f.d2 * g.d11 + f.v * g.d112;
  h.d122 = f.d122 * g.v + f.d22 * g.d1 + 2.0 * f.d12 * g.d2 +
           2.0 * f.d2 * g.d12 + f.d1 * g.d22 + f.v * g.d122;
  h.d222 = f.d222 * g.v + 3.0 * f.d22 * g.d2 + 3.0 * f.d2 * g.d22 +
           f.v * g.d222;
  return h;
}

namespace {

// h = phi(g) by the chain rule, given phi and its first three derivatives
// evaluated at g.v.
SurfaceJet compose(const SurfaceJet& g, double p0, double p1, double p2,
                   double p3) {
  SurfaceJet h;
  h.v = p0;
  h.d1 = p1 * g.d1;
  h.d2 = p1 * g.d2;
  h.d11 = p2 * g.d1 * g.d1 + p1 * g.d11;
  h.d12 = p2 * g.d1 * g.d2 + p1 * g.d12;
  h.d22 = p2 * g.d2 * g.d2 + p1 * g.d22;
  h.d111 = p3 * g.d1 * g.d1 * g.d1 + 3.0 * p2 * g.d11 * g.d1 + p1 * g.d111;
  h.d112 = p3 * g.d1 * g.d1 * g.d2 +
           p2 * (g.d11 * g.d2 + 2.0 * g.d12 * g.d1) + p1 * g.d112;
  h.d122 = p3 * g.d1 * g.d2 * g.d2 +
           p2 * (g.d22 * g.d1 + 2.0 * g.d12 * g.d2) + p1 * g.d122;
  h.d222 = p3 * g.d2 * g.d2 * g.d2 + 3.0 * p2 * g.d22 * g.d2 + p1 * g.d222;
  return h;
}

}  // namespace

SurfaceJet operator/(const SurfaceJet& f, const SurfaceJet& g) {
  const double x = g.v;
  return f * compose(g, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x),
                     -6.0 / (x * x * x * x));
}

SurfaceJet operator+(const SurfaceJet& f, double c) {
  SurfaceJet h = f;
  h.v += c;
  return h;
}
SurfaceJet operator+(double c, const SurfaceJet& g) { return g + c; }
SurfaceJet operator-(const SurfaceJet& f, double c) { return f + (-c); }
SurfaceJet operator-(double c, const SurfaceJet& g) {
  return SurfaceJet::constant(c) - g;
}
SurfaceJet operator*(const SurfaceJet& f, double c) {
  SurfaceJet h;
  h.v = f.v * c;
  h.d1 = f.d1 * c;
  h.d2 = f.d2 * c;
  h.d11 = f.d11 * c;
  h.d12 = f.d12 * c;
  h.d22 = f.d22 * c;
  h.d111 = f.d111 * c;
  h.d112 = f.d112 * c;
  h.d122 = f.d122 * c;
  h.d222 = f.d222 * c;
  return h;
}
SurfaceJet operator*(double c, const SurfaceJet& g) { return g * c; }
SurfaceJet operator/(const SurfaceJet& f, double c) { return f * (1.0 / c); }
SurfaceJet operator/(double c, const SurfaceJet& g) {
  return SurfaceJet::constant(c) / g;
}

SurfaceJet sin(const SurfaceJet& g) {
  const double s = std::sin(g.v), c = std::cos(g.v);
  return compose(g, s, c, -s, -c);
}
SurfaceJet cos(const SurfaceJet& g) {
  const double s = std::sin(g.v), c = std::cos(g.v);
  return compose(g, c, -s, -c, s);
}
SurfaceJet tan(const SurfaceJet& g) { return sin(g) / cos(g); }
SurfaceJet exp(const SurfaceJet& g) {
  const double e = std::exp(g.v);
  return compose(g, e, e, e, e);
}
SurfaceJet log(const SurfaceJet& g) {
  const double x = g.v;
  return compose(g, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}
SurfaceJet sqrt(const SurfaceJet& g) {
  const double s = std::sqrt(g.v);
  return compose(g, s, 0.5 / s, -0.25 / (s * g.v), 0.375 / (s * g.v * g.v));
}
SurfaceJet pow(const SurfaceJet& g, double c) {
  const double x = g.v;
  return compose(g, std::pow(x, c), c * std::pow(x, c - 1.0),
                 c * (c - 1.0) * std::pow(x, c - 2.0),
                 c * (c - 1.0) * (c - 2.0) * std::pow(x, c - 3.0));
}
SurfaceJet pow(const SurfaceJet& g, const SurfaceJet& c) {
  return exp(c * log(g));
}

FieldJet operator+(const FieldJet& f, const FieldJet& g) {
  FieldJet h;
  h.v = f.v + g.v;
  for (int a = 0; a < 3; ++a) h.d[a] = f.d[a] + g.d[a];
  for (int k = 0; k < 6; ++k) h.dd[k] = f.dd[k] + g.dd[k];
  return h;
}
FieldJet operator-(const FieldJet& f, const FieldJet& g) {
  FieldJet h;
  h.v = f.v - g.v;
  for (int a = 0; a < 3; ++a) h.d[a] = f.d[a] - g.d[a];
  for (int k = 0; k < 6; ++k) h.dd[k] = f.dd[k] - g.dd[k];
  return h;
}
FieldJet operator-(const FieldJet& f) {
  return FieldJet::constant(0.0) - f;
}

FieldJet operator*(const FieldJet& f, const FieldJet& g) {
  FieldJet h;
  h.v = f.v * g.v;
  for (int a = 0; a < 3; ++a) h.d[a] = f.d[a] * g.v + f.v * g.d[a];
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      h.hess_ref(a, b) = f.hess(a, b) * g.v + f.d[a] * g.d[b] +
                         f.d[b] * g.d[a] + f.v * g.hess(a, b);
  return h;
}

namespace {

FieldJet compose(const FieldJet& g, double p0, double p1, double p2) {
  FieldJet h;
  h.v = p0;
  for (int a = 0; a < 3; ++a) h.d[a] = p1 * g.d[a];
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      h.hess_ref(a, b) = p2 * g.d[a] * g.d[b] + p1 * g.hess(a, b);
  return h;
}

}  // namespace

FieldJet operator/(const FieldJet& f, const FieldJet& g) {
  const double x = g.v;
  return f * compose(g, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

FieldJet operator+(const FieldJet& f, double c) {
  FieldJet h = f;
  h.v += c;
  return h;
}
FieldJet operator+(double c, const FieldJet& g) { return g + c; }
FieldJet operator-(const FieldJet& f, double c) { return f + (-c); }
FieldJet operator-(double c, const FieldJet& g) {
  return FieldJet::constant(c) - g;
}
FieldJet operator*(const FieldJet& f, double c) {
  FieldJet h;
  h.v = f.v * c;
  for (int a = 0; a < 3; ++a) h.d[a] = f.d[a] * c;
  for (int k = 0; k < 6; ++k) h.dd[k] = f.dd[k] * c;
  return h;
}
FieldJet operator*(double c, const FieldJet& g) { return g * c; }
FieldJet operator/(const FieldJet& f, double c) { return f * (1.0 / c); }
FieldJet operator/(double c, const FieldJet& g) {
  return FieldJet::constant(c) / g;
}

FieldJet sin(const FieldJet& g) {
  return compose(g, std::sin(g.v), std::cos(g.v), -std::sin(g.v));
}
FieldJet cos(const FieldJet& g) {
  return compose(g, std::cos(g.v), -std::sin(g.v), -std::cos(g.v));
}
FieldJet tan(const FieldJet& g) { return sin(g) / cos(g); }
FieldJet exp(const FieldJet& g) {
  const double e = std::exp(g.v);
  return compose(g, e, e, e);
}
FieldJet log(const FieldJet& g) {
  const double x = g.v;
  return compose(g, std::log(x), 1.0 / x, -1.0 / (x * x));
}
FieldJet sqrt(const FieldJet& g) {
  const double s = std::sqrt(g.v);
  return compose(g, s, 0.5 / s, -0.25 / (s * g.v));
}
FieldJet pow(const FieldJet& g, double c) {
  const double x = g.v;
  return compose(g, std::pow(x, c), c * std::pow(x, c - 1.0),
                 c * (c - 1.0) * std::pow(x, c - 2.0));
}
FieldJet pow(const FieldJet& g, const FieldJet& c) { return exp(c * log(g)); }

}  // namespace bladepass
