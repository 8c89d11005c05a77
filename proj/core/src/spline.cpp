#include "bladepass/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bladepass {

CubicBasis::CubicBasis(double a, double b, int cells)
    : a_(a), b_(b), n_(cells) {
  if (cells < 1) throw std::invalid_argument("CubicBasis: need >= 1 cell");
  if (!(b > a)) throw std::invalid_argument("CubicBasis: empty interval");
  h_ = (b - a) / cells;
}

// Clamped knots: t_0..t_3 = a, then interior nodes, then t_{n+3}..t_{n+6} = b.
double CubicBasis::knot(int i) const {
  int j = std::clamp(i - 3, 0, n_);
  return a_ + h_ * j;
}

int CubicBasis::eval(double x, double out[4][4]) const {
  x = std::clamp(x, a_, b_);
  int cell = std::min(static_cast<int>((x - a_) / h_), n_ - 1);

  // Window of 5 (one past the active 4) so that i+1 lookups stay in range;
  // entry w maps to global basis index cell + w.
  double N1[5] = {0, 0, 0, 0, 0};
  double N2[5] = {0, 0, 0, 0, 0};
  double N3[5] = {0, 0, 0, 0, 0};
  double N4[5] = {0, 0, 0, 0, 0};
  double D1_2[5] = {0, 0, 0, 0, 0};  // first derivative of order-2 basis
  double D1_3[5] = {0, 0, 0, 0, 0};  // first derivative of order-3 basis
  double D2_3[5] = {0, 0, 0, 0, 0};  // second derivative of order-3 basis

  N1[3] = 1.0;  // N_{cell+3,1} = 1 on this cell

  // Cox-de Boor ascent; zero-width spans contribute nothing.
  auto span = [&](int i, int m) { return knot(i + m) - knot(i); };
  for (int m = 2; m <= 4; ++m) {
    double* lower = (m == 2) ? N1 : (m == 3 ? N2 : N3);
    double* upper = (m == 2) ? N2 : (m == 3 ? N3 : N4);
    for (int w = 4 - m; w <= 3; ++w) {
      int i = cell + w;
      double acc = 0.0;
      double d0 = span(i, m - 1);
      if (d0 > 0.0) acc += (x - knot(i)) / d0 * lower[w];
      double d1 = span(i + 1, m - 1);
      if (d1 > 0.0 && w + 1 <= 4) acc += (knot(i + m) - x) / d1 * lower[w + 1];
      upper[w] = acc;
    }
  }

  // Derivative ladders: N'_{i,m} = (m-1) [ N_{i,m-1}/span - N_{i+1,m-1}/span ].
  auto ladder = [&](const double* lo, double* hi, int m, double fac) {
    for (int w = 0; w <= 3; ++w) {
      int i = cell + w;
      double acc = 0.0;
      double d0 = span(i, m - 1);
      if (d0 > 0.0) acc += lo[w] / d0;
      double d1 = span(i + 1, m - 1);
      if (d1 > 0.0 && w + 1 <= 4) acc -= lo[w + 1] / d1;
      hi[w] = fac * acc;
    }
  };
  ladder(N1, D1_2, 2, 1.0);
  ladder(N2, D1_3, 3, 2.0);
  ladder(D1_2, D2_3, 3, 2.0);

  for (int w = 0; w <= 3; ++w) {
    int i = cell + w;
    out[w][0] = N4[w];
    double acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    double d0 = span(i, 3);
    if (d0 > 0.0) {
      acc1 += N3[w] / d0;
      acc2 += D1_3[w] / d0;
      acc3 += D2_3[w] / d0;
    }
    double d1 = span(i + 1, 3);
    if (d1 > 0.0 && w + 1 <= 4) {
      acc1 -= N3[w + 1] / d1;
      acc2 -= D1_3[w + 1] / d1;
      acc3 -= D2_3[w + 1] / d1;
    }
    out[w][1] = 3.0 * acc1;
    out[w][2] = 3.0 * acc2;
    out[w][3] = 3.0 * acc3;
  }
  return cell;
}

namespace {

// Collocation matrix for clamped interpolation: row 0 = slope at a,
// rows 1..n+1 = values at the nodes, row n+2 = slope at b.
Eigen::MatrixXd collocation_matrix(const CubicBasis& basis) {
  int n = basis.cells();
  int m = basis.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  double window[4][4];
  int first = basis.eval(basis.lo(), window);
  for (int w = 0; w < 4; ++w) A(0, first + w) = window[w][1];
  for (int i = 0; i <= n; ++i) {
    first = basis.eval(basis.node(i), window);
    for (int w = 0; w < 4; ++w) A(1 + i, first + w) = window[w][0];
  }
  first = basis.eval(basis.hi(), window);
  for (int w = 0; w < 4; ++w) A(n + 2, first + w) = window[w][1];
  return A;
}

}  // namespace

Spline1::Spline1(double a, double b, const std::vector<double>& values,
                 double slope_lo, double slope_hi)
    : basis_(a, b, static_cast<int>(values.size()) - 1) {
  int n = basis_.cells();
  Eigen::VectorXd rhs(n + 3);
  rhs(0) = slope_lo;
  for (int i = 0; i <= n; ++i) rhs(1 + i) = values[i];
  rhs(n + 2) = slope_hi;
  coef_ = Eigen::PartialPivLU<Eigen::MatrixXd>(collocation_matrix(basis_))
              .solve(rhs);
}

std::array<double, 4> Spline1::eval(double x) const {
  double window[4][4];
  int first = basis_.eval(x, window);
  std::array<double, 4> out = {0.0, 0.0, 0.0, 0.0};
  for (int w = 0; w < 4; ++w) {
    double c = coef_(first + w);
    for (int d = 0; d < 4; ++d) out[d] += c * window[w][d];
  }
  return out;
}

SurfaceSpline::EdgeSlopes SurfaceSpline::EdgeSlopes::zero(int n1, int n2) {
  EdgeSlopes s;
  s.ddx1_lo.assign(n2 + 1, 0.0);
  s.ddx1_hi.assign(n2 + 1, 0.0);
  s.ddx2_lo.assign(n1 + 1, 0.0);
  s.ddx2_hi.assign(n1 + 1, 0.0);
  return s;
}

SurfaceSpline::SurfaceSpline(double z0, double z1, double r0, double r1,
                             int n1, int n2,
                             const std::vector<double>& values,
                             const EdgeSlopes& slopes)
    : bx_(z0, z1, n1), by_(r0, r1, n2) {
  if (static_cast<int>(values.size()) != (n1 + 1) * (n2 + 1))
    throw std::invalid_argument("SurfaceSpline: value grid size mismatch");
  if (static_cast<int>(slopes.ddx1_lo.size()) != n2 + 1 ||
      static_cast<int>(slopes.ddx1_hi.size()) != n2 + 1 ||
      static_cast<int>(slopes.ddx2_lo.size()) != n1 + 1 ||
      static_cast<int>(slopes.ddx2_hi.size()) != n1 + 1)
    throw std::invalid_argument("SurfaceSpline: edge slope size mismatch");

  // Condition-indexed data matrix: row c1, column c2, where condition 0 is
  // the low-edge slope, 1..n+1 the nodal values, n+2 the high-edge slope.
  int m1 = n1 + 3, m2 = n2 + 3;
  Eigen::MatrixXd R(m1, m2);
  R(0, 0) = slopes.cross[0][0];
  R(0, m2 - 1) = slopes.cross[0][1];
  R(m1 - 1, 0) = slopes.cross[1][0];
  R(m1 - 1, m2 - 1) = slopes.cross[1][1];
  for (int j = 0; j <= n2; ++j) {
    R(0, 1 + j) = slopes.ddx1_lo[j];
    R(m1 - 1, 1 + j) = slopes.ddx1_hi[j];
  }
  for (int i = 0; i <= n1; ++i) {
    R(1 + i, 0) = slopes.ddx2_lo[i];
    R(1 + i, m2 - 1) = slopes.ddx2_hi[i];
    for (int j = 0; j <= n2; ++j) R(1 + i, 1 + j) = values[i * (n2 + 1) + j];
  }

  // C = A1^{-1} R A2^{-T}, split into two 1D solves.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu1(collocation_matrix(bx_));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu2(collocation_matrix(by_));
  Eigen::MatrixXd mid = lu1.solve(R);
  coef_ = lu2.solve(mid.transpose()).transpose();
}

SurfaceJet SurfaceSpline::jet(double x1, double x2) const {
  double wx[4][4], wy[4][4];
  int fx = bx_.eval(x1, wx);
  int fy = by_.eval(x2, wy);
  // partial[p][q] = d^{p+q} S / dx1^p dx2^q
  double partial[4][4] = {};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double c = coef_(fx + i, fy + j);
      if (c == 0.0) continue;
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q + p < 4; ++q) partial[p][q] += c * wx[i][p] * wy[j][q];
    }
  }
  SurfaceJet out;
  out.v = partial[0][0];
  out.d1 = partial[1][0];
  out.d2 = partial[0][1];
  out.d11 = partial[2][0];
  out.d12 = partial[1][1];
  out.d22 = partial[0][2];
  out.d111 = partial[3][0];
  out.d112 = partial[2][1];
  out.d122 = partial[1][2];
  out.d222 = partial[0][3];
  return out;
}

}  // namespace bladepass
