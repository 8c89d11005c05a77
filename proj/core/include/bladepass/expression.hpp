#pragma once

#include <memory>
#include <string>

#include "bladepass/jets.hpp"

namespace bladepass {

// Arithmetic expressions over the computational coordinates, used for
// analytic blade surfaces and configured field data.  Variables: x1, x2, xi;
// constant: pi.  Functions: sin, cos, tan, exp, log, sqrt, pow.  Operators:
// + - * / ^ with the usual precedence; ^ binds tightest and associates
// right.  Evaluation is generic over the jet types, so an expression yields
// exact derivatives wherever they are needed.
class Expression {
 public:
  Expression() = default;

  // Throws std::runtime_error with a column-numbered message on bad input.
  static Expression parse(const std::string& text);

  double eval(double x1, double x2, double xi) const;
  // Surface evaluation rejects expressions that mention xi.
  SurfaceJet eval_surface(double x1, double x2) const;
  FieldJet eval_field(double x1, double x2, double xi) const;

  bool uses_xi() const;
  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

  // Implementation detail, public only so the parser/evaluator translation
  // unit can define and walk it.
  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace bladepass
