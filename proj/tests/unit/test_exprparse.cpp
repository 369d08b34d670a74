#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spacelike/expr.hpp"

using namespace spacelike;

namespace {

double eval(const std::string& text, std::vector<double> x) { return evaluate(parse(text, static_cast<int>(x.size())), x); }

ParseError::Kind parse_kind(const std::string& text, int dim) {
  try {
    (void)parse(text, dim);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ParseError for " << text;
  return ParseError::Kind::Syntax;
}

}  // namespace

TEST(ExprParse, SumOfSquares) {
  const Expr e = parse("x1^2 + x2^2", 2);
  EXPECT_EQ(e.kind(), Expr::Kind::Binary);
  EXPECT_EQ(e.op(), BinaryOp::Add);
  EXPECT_EQ(e.lhs().kind(), Expr::Kind::Power);
  EXPECT_EQ(e.lhs().exponent(), 2);
  EXPECT_EQ(e.lhs().lhs().variable_index(), 1);
  EXPECT_EQ(e.rhs().lhs().variable_index(), 2);
  EXPECT_DOUBLE_EQ(evaluate(e, std::vector<double>{3, 4}), 25.0);
}

TEST(ExprParse, HyperboloidProfile) {
  const Expr e = parse("sqrt(1 + x1^2 + x2^2)", 2);
  EXPECT_EQ(e.kind(), Expr::Kind::Function);
  EXPECT_EQ(e.func(), Func::Sqrt);
  EXPECT_DOUBLE_EQ(evaluate(e, std::vector<double>{2, 2}), 3.0);
}

TEST(ExprParse, VariableOutOfRange) {
  try {
    (void)parse("x3", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::VariableOutOfRange);
    EXPECT_NE(std::string(e.what()).find("variable index out of range"), std::string::npos);
  }
}

TEST(ExprParse, ErrorKinds) {
  EXPECT_EQ(parse_kind("x0", 2), ParseError::Kind::VariableOutOfRange);
  EXPECT_EQ(parse_kind("y1", 2), ParseError::Kind::UnknownIdentifier);
  EXPECT_EQ(parse_kind("foo(x1)", 2), ParseError::Kind::UnknownIdentifier);
  EXPECT_EQ(parse_kind("x1^0.5", 1), ParseError::Kind::BadExponent);
  EXPECT_EQ(parse_kind("x1^x1", 1), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_kind("x1^2^2", 1), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_kind("x1 +", 1), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_kind("(x1", 1), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_kind("x1 x2", 2), ParseError::Kind::Syntax);
  EXPECT_EQ(parse_kind("", 1), ParseError::Kind::Syntax);
}

TEST(ExprParse, SyntaxErrorCarriesByteOffset) {
  try {
    (void)parse("x1 + * x2", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
}

TEST(ExprParse, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(eval("1 - 2 - 3", {0}), -4.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2", {0}), 1.0);
  EXPECT_DOUBLE_EQ(eval("2 + 3 * 4", {0}), 14.0);
  EXPECT_DOUBLE_EQ(eval("2 * x1^3", {2}), 16.0);
  // '-' binds to a base, so the exponent applies to the negated base.
  EXPECT_DOUBLE_EQ(eval("-x1^2", {3}), 9.0);
  EXPECT_DOUBLE_EQ(eval("0 - x1^2", {3}), -9.0);
  EXPECT_DOUBLE_EQ(eval("x1^-2", {2}), 0.25);
  EXPECT_DOUBLE_EQ(eval("pi", {0}), M_PI);
  EXPECT_DOUBLE_EQ(eval("e", {0}), M_E);
  EXPECT_DOUBLE_EQ(eval("1.5e2", {0}), 150.0);
}

TEST(ExprParse, AllFunctions) {
  const double x = 0.3;
  EXPECT_DOUBLE_EQ(eval("sin(x1)", {x}), std::sin(x));
  EXPECT_DOUBLE_EQ(eval("cos(x1)", {x}), std::cos(x));
  EXPECT_DOUBLE_EQ(eval("exp(x1)", {x}), std::exp(x));
  EXPECT_DOUBLE_EQ(eval("log(x1)", {x}), std::log(x));
  EXPECT_DOUBLE_EQ(eval("sqrt(x1)", {x}), std::sqrt(x));
  EXPECT_DOUBLE_EQ(eval("sinh(x1)", {x}), std::sinh(x));
  EXPECT_DOUBLE_EQ(eval("cosh(x1)", {x}), std::cosh(x));
  EXPECT_DOUBLE_EQ(eval("tanh(x1)", {x}), std::tanh(x));
  EXPECT_DOUBLE_EQ(eval("asinh(x1)", {x}), std::asinh(x));
  EXPECT_DOUBLE_EQ(eval("atanh(x1)", {x}), std::atanh(x));
}

TEST(ExprParse, DomainErrorsNameTheSubexpression) {
  const Expr e = parse("1 + log(x1 - 1)", 1);
  try {
    (void)evaluate(e, std::vector<double>{0.5});
    FAIL();
  } catch (const DomainError& err) {
    EXPECT_NE(err.subexpression().find("log"), std::string::npos);
  }
  EXPECT_THROW((void)eval("1 / x1", {0}), DomainError);
  EXPECT_THROW((void)eval("sqrt(x1)", {0}), DomainError);
  EXPECT_THROW((void)eval("atanh(x1)", {1}), DomainError);
  EXPECT_THROW((void)eval("x1^-1", {0}), DomainError);
}

TEST(ExprParse, RoundTripIsStructural) {
  const char* texts[] = {
      "x1^2 + x2^2",
      "sqrt(1 + x1^2 + x2^2) - 1",
      "-(x1 - x2) * exp(-x1) / (1 + cosh(x2))^3",
      "asinh(sqrt(x1^2 + x2^2))",
      "0.3*x1 + 0.1*sin(x2)",
      "x1^-3 + pi*e - -x2",
      "1e-3 * tanh(atanh(0.5*x1))",
  };
  for (const char* t : texts) {
    const Expr e = parse(t, 2);
    const Expr again = parse(e.to_string(), 2);
    EXPECT_TRUE(structurally_equal(e, again)) << t << " -> " << e.to_string();
    EXPECT_EQ(again.to_string(), e.to_string());
  }
}

TEST(ExprParse, ParenthesizationIsIdempotent) {
  const char* texts[] = {"x1 + x2", "x1 * (x2 - 1)", "sin(x1)^2", "-x1", "(((x2)))"};
  for (const char* t : texts) {
    const std::string wrapped = "(" + std::string(t) + ")";
    EXPECT_TRUE(structurally_equal(parse(t, 2), parse(wrapped, 2))) << t;
  }
}

TEST(ExprParse, RandomTreesRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 9);
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    const int k = depth > 3 ? pick(rng) % 3 : pick(rng);
    switch (k) {
      case 0: return "x" + std::to_string(1 + pick(rng) % 3);
      case 1: return std::to_string(pick(rng)) + ".25";
      case 2: return "pi";
      case 3: return "(" + gen(depth + 1) + " + " + gen(depth + 1) + ")";
      case 4: return gen(depth + 1) + " * " + gen(depth + 1);
      case 5: return gen(depth + 1) + " / (1 + (" + gen(depth + 1) + ")^2)";
      case 6: return "-" + gen(depth + 1);
      case 7: return "sin(" + gen(depth + 1) + ")";
      case 8: return "(" + gen(depth + 1) + ")^" + std::to_string(pick(rng) % 4);
      default: return "exp(" + gen(depth + 1) + " - " + gen(depth + 1) + ")";
    }
  };
  for (int i = 0; i < 200; ++i) {
    const std::string t = gen(0);
    const Expr e = parse(t, 3);
    EXPECT_TRUE(structurally_equal(e, parse(e.to_string(), 3))) << t;
  }
}

TEST(ExprParse, MaxVariable) {
  EXPECT_EQ(parse("3 + x2 * x1", 3).max_variable(), 2);
  EXPECT_EQ(parse("3", 3).max_variable(), 0);
}
