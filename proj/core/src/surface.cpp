#include "bladepass/surface.hpp"

#include <algorithm>
#include <stdexcept>

namespace bladepass {

void DomainSpec::validate() const {
  if (!(z1 > z0)) throw std::invalid_argument("DomainSpec: need z1 > z0");
  if (!(r1 > r0) || !(r0 > 0.0))
    throw std::invalid_argument("DomainSpec: need r1 > r0 > 0");
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("DomainSpec: need n1, n2 >= 2");
}

void GeometryParams::validate() const {
  if (blade_count < 2)
    throw std::invalid_argument("GeometryParams: need blade_count >= 2");
  if (!(mu > 0.0)) throw std::invalid_argument("GeometryParams: need mu > 0");
}

namespace {

SurfaceSpline build_spline(const DomainSpec& dom,
                           const std::vector<double>& nodal,
                           const SurfaceSpline::EdgeSlopes& slopes) {
  return SurfaceSpline(dom.z0, dom.z1, dom.r0, dom.r1, dom.n1, dom.n2, nodal,
                       slopes);
}

}  // namespace

BladeSurface::BladeSurface(const DomainSpec& dom, std::vector<double> nodal,
                           SurfaceSpline::EdgeSlopes slopes)
    : dom_(dom),
      nodal_(std::move(nodal)),
      slopes_(std::move(slopes)),
      spline_(build_spline(dom_, nodal_, slopes_)) {
  dom_.validate();
}

BladeSurface BladeSurface::zero(const DomainSpec& dom) {
  return BladeSurface(dom, std::vector<double>(dom.node_count(), 0.0),
                      SurfaceSpline::EdgeSlopes::zero(dom.n1, dom.n2));
}

BladeSurface BladeSurface::from_expression(const DomainSpec& dom,
                                           const Expression& expr) {
  std::vector<double> nodal(dom.node_count());
  auto slopes = SurfaceSpline::EdgeSlopes::zero(dom.n1, dom.n2);
  for (int i = 0; i <= dom.n1; ++i)
    for (int j = 0; j <= dom.n2; ++j)
      nodal[dom.node_index(i, j)] = expr.eval(dom.node1(i), dom.node2(j), 0.0);
  for (int j = 0; j <= dom.n2; ++j) {
    slopes.ddx1_lo[j] = expr.eval_surface(dom.z0, dom.node2(j)).d1;
    slopes.ddx1_hi[j] = expr.eval_surface(dom.z1, dom.node2(j)).d1;
  }
  for (int i = 0; i <= dom.n1; ++i) {
    slopes.ddx2_lo[i] = expr.eval_surface(dom.node1(i), dom.r0).d2;
    slopes.ddx2_hi[i] = expr.eval_surface(dom.node1(i), dom.r1).d2;
  }
  slopes.cross[0][0] = expr.eval_surface(dom.z0, dom.r0).d12;
  slopes.cross[0][1] = expr.eval_surface(dom.z0, dom.r1).d12;
  slopes.cross[1][0] = expr.eval_surface(dom.z1, dom.r0).d12;
  slopes.cross[1][1] = expr.eval_surface(dom.z1, dom.r1).d12;
  return BladeSurface(dom, std::move(nodal), std::move(slopes));
}

double BladeSurface::grad_sup(int oversample) const {
  int m1 = dom_.n1 * oversample, m2 = dom_.n2 * oversample;
  double sup = 0.0;
  for (int i = 0; i <= m1; ++i) {
    double x1 = dom_.z0 + (dom_.z1 - dom_.z0) * i / m1;
    for (int j = 0; j <= m2; ++j) {
      double x2 = dom_.r0 + (dom_.r1 - dom_.r0) * j / m2;
      SurfaceJet t = jet(x1, x2);
      sup = std::max(sup, std::hypot(t.d1, t.d2));
    }
  }
  return sup;
}

BladeSurface BladeSurface::perturbed(const DirectionField& eta,
                                     double t) const {
  std::vector<double> nodal = nodal_;
  const std::vector<double>& dn = eta.nodal();
  for (int k = 0; k < dom_.node_count(); ++k) nodal[k] += t * dn[k];
  // Directions carry zero edge data, so the clamp traces are unchanged.
  return BladeSurface(dom_, std::move(nodal), slopes_);
}

DirectionField::DirectionField(const DomainSpec& dom,
                               std::vector<double> nodal)
    : dom_(dom),
      nodal_(std::move(nodal)),
      spline_(build_spline(dom_, nodal_,
                           SurfaceSpline::EdgeSlopes::zero(dom.n1, dom.n2))) {
  dom_.validate();
  for (int i = 0; i <= dom_.n1; ++i)
    for (int j = 0; j <= dom_.n2; ++j)
      if ((i == 0 || i == dom_.n1 || j == 0 || j == dom_.n2) &&
          nodal_[dom_.node_index(i, j)] != 0.0)
        throw std::invalid_argument(
            "DirectionField: boundary nodes must be zero");
}

DirectionField DirectionField::random(const DomainSpec& dom, Rng& rng,
                                      double amplitude) {
  std::vector<double> nodal(dom.node_count(), 0.0);
  for (int i = 1; i < dom.n1; ++i)
    for (int j = 1; j < dom.n2; ++j)
      nodal[dom.node_index(i, j)] = rng.uniform(-amplitude, amplitude);
  return DirectionField(dom, std::move(nodal));
}

DirectionField DirectionField::from_expression(const DomainSpec& dom,
                                               const Expression& expr) {
  std::vector<double> nodal(dom.node_count(), 0.0);
  for (int i = 1; i < dom.n1; ++i)
    for (int j = 1; j < dom.n2; ++j)
      nodal[dom.node_index(i, j)] = expr.eval(dom.node1(i), dom.node2(j), 0.0);
  return DirectionField(dom, std::move(nodal));
}

DirectionField DirectionField::zero(const DomainSpec& dom) {
  return DirectionField(dom, std::vector<double>(dom.node_count(), 0.0));
}

ThetaBasis::ThetaBasis(const DomainSpec& dom) : dom_(dom) {
  dom_.validate();
  card1_.reserve(dom.n1 - 1);
  for (int i = 1; i < dom.n1; ++i) {
    std::vector<double> v(dom.n1 + 1, 0.0);
    v[i] = 1.0;
    card1_.emplace_back(dom.z0, dom.z1, v, 0.0, 0.0);
  }
  card2_.reserve(dom.n2 - 1);
  for (int j = 1; j < dom.n2; ++j) {
    std::vector<double> v(dom.n2 + 1, 0.0);
    v[j] = 1.0;
    card2_.emplace_back(dom.r0, dom.r1, v, 0.0, 0.0);
  }
}

namespace {

SurfaceJet tensor_jet(const std::array<double, 4>& u,
                      const std::array<double, 4>& v) {
  SurfaceJet out;
  out.v = u[0] * v[0];
  out.d1 = u[1] * v[0];
  out.d2 = u[0] * v[1];
  out.d11 = u[2] * v[0];
  out.d12 = u[1] * v[1];
  out.d22 = u[0] * v[2];
  out.d111 = u[3] * v[0];
  out.d112 = u[2] * v[1];
  out.d122 = u[1] * v[2];
  out.d222 = u[0] * v[3];
  return out;
}

}  // namespace

SurfaceJet ThetaBasis::jet(int k, double x1, double x2) const {
  int i = k / (dom_.n2 - 1), j = k % (dom_.n2 - 1);
  return tensor_jet(card1_[i].eval(x1), card2_[j].eval(x2));
}

void ThetaBasis::jets_at(double x1, double x2,
                         std::vector<SurfaceJet>& out) const {
  out.resize(count());
  std::vector<std::array<double, 4>> u(card1_.size()), v(card2_.size());
  for (size_t i = 0; i < card1_.size(); ++i) u[i] = card1_[i].eval(x1);
  for (size_t j = 0; j < card2_.size(); ++j) v[j] = card2_[j].eval(x2);
  int k = 0;
  for (size_t i = 0; i < card1_.size(); ++i)
    for (size_t j = 0; j < card2_.size(); ++j) out[k++] = tensor_jet(u[i], v[j]);
}

DirectionField ThetaBasis::direction(const std::vector<double>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != count())
    throw std::invalid_argument("ThetaBasis: coefficient count mismatch");
  std::vector<double> nodal(dom_.node_count(), 0.0);
  for (int i = 1; i < dom_.n1; ++i)
    for (int j = 1; j < dom_.n2; ++j)
      nodal[dom_.node_index(i, j)] = coeffs[index(i, j)];
  return DirectionField(dom_, std::move(nodal));
}

}  // namespace bladepass
