#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bladepass/jets.hpp"

namespace bladepass {

// Cubic B-spline basis on a clamped uniform knot vector over [a, b] with
// `cells` intervals; there are cells+3 basis functions.  Clamped knots make
// the end conditions (value + slope) well-posed for interpolation.
class CubicBasis {
 public:
  CubicBasis(double a, double b, int cells);

  int size() const { return n_ + 3; }
  int cells() const { return n_; }
  double lo() const { return a_; }
  double hi() const { return b_; }
  double node(int i) const { return a_ + h_ * i; }  // i = 0..n

  // Evaluates the four basis functions active at x together with their
  // derivatives up to third order: out[f][d] is the d-th derivative of
  // basis (first + f).  Returns `first`.  x is clamped to [a, b].
  int eval(double x, double out[4][4]) const;

 private:
  double knot(int i) const;

  double a_, b_, h_;
  int n_;
};

// 1D interpolating cubic spline: nodal values at the n+1 uniform grid nodes
// plus end slopes.  C^2 on [a,b]; third derivative exact per cell.
class Spline1 {
 public:
  Spline1(double a, double b, const std::vector<double>& values,
          double slope_lo, double slope_hi);

  // value and derivatives up to order 3 at x
  std::array<double, 4> eval(double x) const;
  double value(double x) const { return eval(x)[0]; }

  const CubicBasis& basis() const { return basis_; }
  const Eigen::VectorXd& coefficients() const { return coef_; }

 private:
  CubicBasis basis_;
  Eigen::VectorXd coef_;
};

// Tensor-product interpolating cubic spline on the rectangle
// [z0,z1] x [r0,r1]: nodal values on the (n1+1) x (n2+1) grid, clamped with
// normal-slope data on the four edges and mixed derivatives at the corners.
class SurfaceSpline {
 public:
  struct EdgeSlopes {
    // d/dx1 at the x1 = z0 / z1 edges, one entry per x2 node (n2+1 each)
    std::vector<double> ddx1_lo, ddx1_hi;
    // d/dx2 at the x2 = r0 / r1 edges, one entry per x1 node (n1+1 each)
    std::vector<double> ddx2_lo, ddx2_hi;
    // d2/dx1 dx2 at the corners: [x1 end][x2 end], 0 = lo, 1 = hi
    double cross[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static EdgeSlopes zero(int n1, int n2);
  };

  // values: row-major, index i1 * (n2+1) + i2
  SurfaceSpline(double z0, double z1, double r0, double r1, int n1, int n2,
                const std::vector<double>& values, const EdgeSlopes& slopes);

  SurfaceJet jet(double x1, double x2) const;
  double value(double x1, double x2) const { return jet(x1, x2).v; }

  int cells_x1() const { return bx_.cells(); }
  int cells_x2() const { return by_.cells(); }
  const CubicBasis& basis_x1() const { return bx_; }
  const CubicBasis& basis_x2() const { return by_; }

 private:
  CubicBasis bx_, by_;
  Eigen::MatrixXd coef_;  // (n1+3) x (n2+3)
};

}  // namespace bladepass
