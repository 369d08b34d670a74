#include "spacelike/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <numbers>

namespace spacelike {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::string name;
  int index = 0;  // variable index or exponent
  Func func = Func::Sin;
  BinaryOp op = BinaryOp::Add;
  std::vector<Expr> children;
};

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 10> kFuncs{{
    {"sin", Func::Sin},     {"cos", Func::Cos},     {"exp", Func::Exp},   {"log", Func::Log},
    {"sqrt", Func::Sqrt},   {"sinh", Func::Sinh},   {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
    {"asinh", Func::Asinh}, {"atanh", Func::Atanh},
}};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view func_name(Func f) {
  for (const auto& [name, fn] : kFuncs)
    if (fn == f) return name;
  return "?";
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::named_constant(std::string name, double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::apply(Func f, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Function;
  n->func = f;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->index = exponent;
  n->children.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
const std::string& Expr::constant_name() const { return node_->name; }
int Expr::variable_index() const { return node_->index; }
Func Expr::func() const { return node_->func; }
BinaryOp Expr::op() const { return node_->op; }
int Expr::exponent() const { return node_->index; }

const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }

std::string Expr::to_string() const {
  switch (kind()) {
    case Kind::Constant:
      if (!constant_name().empty()) return constant_name();
      if (constant_value() < 0 || std::signbit(constant_value()))
        return "(-" + format_number(-constant_value()) + ")";
      return format_number(constant_value());
    case Kind::Variable:
      return "x" + std::to_string(variable_index());
    case Kind::Negate:
      // '-' binds tighter than '^', so a negated power keeps its own parentheses.
      if (lhs().kind() == Kind::Power) return "(-(" + lhs().to_string() + "))";
      return "(-" + lhs().to_string() + ")";
    case Kind::Function:
      return std::string(func_name(func())) + "(" + lhs().to_string() + ")";
    case Kind::Binary: {
      constexpr std::array<char, 4> ops{'+', '-', '*', '/'};
      return "(" + lhs().to_string() + " " + ops[static_cast<int>(op())] + " " +
             rhs().to_string() + ")";
    }
    case Kind::Power:
      return "(" + lhs().to_string() + ")^" + std::to_string(exponent());
  }
  return {};
}

int Expr::max_variable() const {
  switch (kind()) {
    case Kind::Constant: return 0;
    case Kind::Variable: return variable_index();
    case Kind::Binary: return std::max(lhs().max_variable(), rhs().max_variable());
    default: return lhs().max_variable();
  }
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant:
      return a.constant_name() == b.constant_name() &&
             (a.constant_value() == b.constant_value() ||
              (std::isnan(a.constant_value()) && std::isnan(b.constant_value())));
    case Expr::Kind::Variable:
      return a.variable_index() == b.variable_index();
    case Expr::Kind::Negate:
      return structurally_equal(a.lhs(), b.lhs());
    case Expr::Kind::Function:
      return a.func() == b.func() && structurally_equal(a.lhs(), b.lhs());
    case Expr::Kind::Binary:
      return a.op() == b.op() && structurally_equal(a.lhs(), b.lhs()) &&
             structurally_equal(a.rhs(), b.rhs());
    case Expr::Kind::Power:
      return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
  }
  return false;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) syntax("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void syntax(const std::string& what) const {
    throw ParseError(ParseError::Kind::Syntax, pos_, what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) syntax(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr b = base();
    if (!accept('^')) return b;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      syntax("expected integer exponent");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw ParseError(ParseError::Kind::BadExponent, start,
                       "non-integer exponent; use sqrt for fractional powers");
    }
    int k = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, k);
    if (ec != std::errc{}) throw ParseError(ParseError::Kind::BadExponent, start, "exponent too large");
    (void)ptr;
    return Expr::power(std::move(b), negative ? -k : k);
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) syntax("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return Expr::negate(base());
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    syntax(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      syntax("malformed number");
    }
    // Exponent part only when followed by a digit (optionally signed), so that
    // "2e" is a syntax error rather than a silent misparse.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      syntax("malformed or non-finite number");
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "pi") return Expr::named_constant("pi", std::numbers::pi);
    if (id == "e") return Expr::named_constant("e", std::numbers::e);
    if (id.size() > 1 && id[0] == 'x' &&
        id.substr(1).find_first_not_of("0123456789") == std::string_view::npos) {
      int k = 0;
      auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
      (void)ptr;
      if (ec != std::errc{} || k < 1 || k > dim_) {
        throw ParseError(ParseError::Kind::VariableOutOfRange, start,
                         "variable index out of range: " + std::string(id) + " (dim " +
                             std::to_string(dim_) + ")");
      }
      return Expr::variable(k);
    }
    for (const auto& [name, fn] : kFuncs) {
      if (id == name) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::apply(fn, std::move(arg));
      }
    }
    throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                     "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, int dim) {
  if (dim < 1) throw ParseError(ParseError::Kind::VariableOutOfRange, 0, "dimension must be >= 1");
  return Parser(text, dim).run();
}

namespace detail {

void throw_domain(const Expr& e) { throw DomainError(e.to_string()); }

bool func_domain_ok(Func f, double arg) {
  if (!std::isfinite(arg)) return false;
  switch (f) {
    case Func::Log:
    case Func::Sqrt:
      return arg > 0.0;
    case Func::Atanh:
      return std::abs(arg) < 1.0;
    default:
      return true;
  }
}

}  // namespace detail

double evaluate(const Expr& e, std::span<const double> point) {
  return evaluate_as<double>(e, point, [](double c) { return c; });
}

}  // namespace spacelike
