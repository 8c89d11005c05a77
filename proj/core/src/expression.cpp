#include "bladepass/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace bladepass {

namespace {

enum class Op {
  kNumber,
  kVar,  // payload: 0 = x1, 1 = x2, 2 = xi
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
};

}  // namespace

struct Expression::Node {
  Op op;
  double value = 0.0;
  int var = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("expression error at column " +
                             std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  static NodePtr number(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::kNumber;
    n->value = v;
    return n;
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    for (;;) {
      if (eat('+'))
        e = make(Op::kAdd, e, parse_product());
      else if (eat('-'))
        e = make(Op::kSub, e, parse_product());
      else
        return e;
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = make(Op::kMul, e, parse_unary());
      else if (eat('/'))
        e = make(Op::kDiv, e, parse_unary());
      else
        return e;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Op::kNeg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) return make(Op::kPow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return number(v);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        name += text_[pos_++];
      if (name == "x1" || name == "x2" || name == "xi") {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::kVar;
        n->var = name == "x1" ? 0 : name == "x2" ? 1 : 2;
        return n;
      }
      if (name == "pi") return number(M_PI);
      if (peek() != '(') fail("unknown identifier '" + name + "'");
      ++pos_;  // consume '('
      NodePtr a = parse_sum();
      if (name == "pow") {
        if (!eat(',')) fail("pow expects two arguments");
        NodePtr b = parse_sum();
        if (!eat(')')) fail("missing ')'");
        return make(Op::kPow, a, b);
      }
      if (!eat(')')) fail("missing ')'");
      if (name == "sin") return make(Op::kSin, a);
      if (name == "cos") return make(Op::kCos, a);
      if (name == "tan") return make(Op::kTan, a);
      if (name == "exp") return make(Op::kExp, a);
      if (name == "log") return make(Op::kLog, a);
      if (name == "sqrt") return make(Op::kSqrt, a);
      fail("unknown function '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

// Exponentiation: literal integer exponents are expanded by repeated
// multiplication so negative bases and jets through zero stay exact.
template <class T>
T int_power(const T& base, long n) {
  if (n == 0) return T::constant(1.0);
  const bool neg = n < 0;
  long k = neg ? -n : n;
  T acc = base;
  --k;
  while (k-- > 0) acc = acc * base;
  if (neg) return T::constant(1.0) / acc;
  return acc;
}

template <>
double int_power<double>(const double& base, long n) {
  if (n == 0) return 1.0;
  long k = n < 0 ? -n : n;
  double acc = base;
  --k;
  while (k-- > 0) acc *= base;
  return n < 0 ? 1.0 / acc : acc;
}

template <class T>
T eval_node(const Expression::Node& n, const T coords[3]) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  using std::tan;
  switch (n.op) {
    case Op::kNumber:
      return T::constant(n.value);
    case Op::kVar:
      return coords[n.var];
    case Op::kAdd:
      return eval_node(*n.a, coords) + eval_node(*n.b, coords);
    case Op::kSub:
      return eval_node(*n.a, coords) - eval_node(*n.b, coords);
    case Op::kMul:
      return eval_node(*n.a, coords) * eval_node(*n.b, coords);
    case Op::kDiv:
      return eval_node(*n.a, coords) / eval_node(*n.b, coords);
    case Op::kNeg:
      return -eval_node(*n.a, coords);
    case Op::kPow: {
      if (n.b->op == Op::kNumber) {
        const double e = n.b->value;
        const long ei = static_cast<long>(std::llround(e));
        if (e == static_cast<double>(ei) && std::labs(ei) <= 16)
          return int_power(eval_node(*n.a, coords), ei);
        return pow(eval_node(*n.a, coords), e);
      }
      return pow(eval_node(*n.a, coords), eval_node(*n.b, coords));
    }
    case Op::kSin:
      return sin(eval_node(*n.a, coords));
    case Op::kCos:
      return cos(eval_node(*n.a, coords));
    case Op::kTan:
      return tan(eval_node(*n.a, coords));
    case Op::kExp:
      return exp(eval_node(*n.a, coords));
    case Op::kLog:
      return log(eval_node(*n.a, coords));
    case Op::kSqrt:
      return sqrt(eval_node(*n.a, coords));
  }
  throw std::logic_error("expression: bad node");
}

template <>
double eval_node<double>(const Expression::Node& n, const double coords[3]) {
  switch (n.op) {
    case Op::kNumber:
      return n.value;
    case Op::kVar:
      return coords[n.var];
    case Op::kAdd:
      return eval_node<double>(*n.a, coords) + eval_node<double>(*n.b, coords);
    case Op::kSub:
      return eval_node<double>(*n.a, coords) - eval_node<double>(*n.b, coords);
    case Op::kMul:
      return eval_node<double>(*n.a, coords) * eval_node<double>(*n.b, coords);
    case Op::kDiv:
      return eval_node<double>(*n.a, coords) / eval_node<double>(*n.b, coords);
    case Op::kNeg:
      return -eval_node<double>(*n.a, coords);
    case Op::kPow: {
      if (n.b->op == Op::kNumber) {
        const double e = n.b->value;
        const long ei = static_cast<long>(std::llround(e));
        if (e == static_cast<double>(ei) && std::labs(ei) <= 16)
          return int_power(eval_node<double>(*n.a, coords), ei);
        return std::pow(eval_node<double>(*n.a, coords), e);
      }
      return std::pow(eval_node<double>(*n.a, coords),
                      eval_node<double>(*n.b, coords));
    }
    case Op::kSin:
      return std::sin(eval_node<double>(*n.a, coords));
    case Op::kCos:
      return std::cos(eval_node<double>(*n.a, coords));
    case Op::kTan:
      return std::tan(eval_node<double>(*n.a, coords));
    case Op::kExp:
      return std::exp(eval_node<double>(*n.a, coords));
    case Op::kLog:
      return std::log(eval_node<double>(*n.a, coords));
    case Op::kSqrt:
      return std::sqrt(eval_node<double>(*n.a, coords));
  }
  throw std::logic_error("expression: bad node");
}

bool node_uses_xi(const Expression::Node& n) {
  if (n.op == Op::kVar) return n.var == 2;
  if (n.a && node_uses_xi(*n.a)) return true;
  if (n.b && node_uses_xi(*n.b)) return true;
  return false;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expression::eval(double x1, double x2, double xi) const {
  const double coords[3] = {x1, x2, xi};
  return eval_node<double>(*root_, coords);
}

SurfaceJet Expression::eval_surface(double x1, double x2) const {
  if (uses_xi())
    throw std::runtime_error(
        "expression error: surface expression must not mention xi: " + text_);
  const SurfaceJet coords[3] = {SurfaceJet::coordinate(0, x1),
                                SurfaceJet::coordinate(1, x2), SurfaceJet{}};
  return eval_node<SurfaceJet>(*root_, coords);
}

FieldJet Expression::eval_field(double x1, double x2, double xi) const {
  const FieldJet coords[3] = {FieldJet::coordinate(0, x1),
                              FieldJet::coordinate(1, x2),
                              FieldJet::coordinate(2, xi)};
  return eval_node<FieldJet>(*root_, coords);
}

bool Expression::uses_xi() const { return root_ && node_uses_xi(*root_); }

}  // namespace bladepass
