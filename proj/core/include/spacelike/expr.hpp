#pragma once

// Scalar expression DSL in the variables x1..xm.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' intlit)?
//   base   := number | 'pi' | 'e' | var | func '(' expr ')' | '(' expr ')' | '-' base
//   var    := 'x' intlit
//   func   := sin | cos | exp | log | sqrt | sinh | cosh | tanh | asinh | atanh
//
// The exponent may carry a leading '-'; fractional exponents are rejected.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spacelike/errors.hpp"

namespace spacelike {

enum class Func { Sin, Cos, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Asinh, Atanh };
enum class BinaryOp { Add, Sub, Mul, Div };

std::string_view func_name(Func f);

/// Immutable, cheaply copyable AST handle.
class Expr {
 public:
  enum class Kind { Constant, Variable, Negate, Function, Binary, Power };

  static Expr constant(double value);
  static Expr named_constant(std::string name, double value);
  /// `index` is 1-based, as written in the DSL.
  static Expr variable(int index);
  static Expr negate(Expr operand);
  static Expr apply(Func f, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  Kind kind() const;
  double constant_value() const;
  const std::string& constant_name() const;
  int variable_index() const;
  Func func() const;
  BinaryOp op() const;
  int exponent() const;
  const Expr& lhs() const;  // operand of unary nodes, base of powers
  const Expr& rhs() const;

  /// Fully parenthesized text that parses back to an identical tree.
  std::string to_string() const;
  /// Largest variable index referenced (0 for constants).
  int max_variable() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

Expr parse(std::string_view text, int dim);

namespace detail {
[[noreturn]] void throw_domain(const Expr& e);
bool func_domain_ok(Func f, double arg);
}  // namespace detail

/// Plain double elementary function.
inline double apply_func(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Exp: return std::exp(x);
    case Func::Log: return std::log(x);
    case Func::Sqrt: return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
    case Func::Tanh: return std::tanh(x);
    case Func::Asinh: return std::asinh(x);
    case Func::Atanh: return std::atanh(x);
  }
  return x;
}

inline double integer_power(double x, int k) {
  if (k < 0) return 1.0 / integer_power(x, -k);
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

inline double value_of(double x) { return x; }

/// Generic evaluator. `Scalar` must provide +, -, *, / (with itself),
/// scaling by double, `apply_func(Func, Scalar)`, `integer_power(Scalar, int)`
/// and `value_of(Scalar)`. `make_const(double)` builds a constant scalar.
template <class Scalar, class MakeConst>
Scalar evaluate_as(const Expr& e, std::span<const Scalar> vars, const MakeConst& make_const) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return make_const(e.constant_value());
    case Expr::Kind::Variable:
      return vars[static_cast<std::size_t>(e.variable_index() - 1)];
    case Expr::Kind::Negate:
      return -evaluate_as<Scalar>(e.lhs(), vars, make_const);
    case Expr::Kind::Function: {
      Scalar arg = evaluate_as<Scalar>(e.lhs(), vars, make_const);
      if (!detail::func_domain_ok(e.func(), value_of(arg))) detail::throw_domain(e);
      return apply_func(e.func(), arg);
    }
    case Expr::Kind::Binary: {
      Scalar a = evaluate_as<Scalar>(e.lhs(), vars, make_const);
      Scalar b = evaluate_as<Scalar>(e.rhs(), vars, make_const);
      switch (e.op()) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (value_of(b) == 0.0) detail::throw_domain(e);
          return a / b;
      }
      break;
    }
    case Expr::Kind::Power: {
      Scalar b = evaluate_as<Scalar>(e.lhs(), vars, make_const);
      if (e.exponent() < 0 && value_of(b) == 0.0) detail::throw_domain(e);
      return integer_power(b, e.exponent());
    }
  }
  detail::throw_domain(e);
}

/// Value of `e` at `point` (point.size() >= e.max_variable()).
double evaluate(const Expr& e, std::span<const double> point);

}  // namespace spacelike
