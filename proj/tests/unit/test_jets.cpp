#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "spacelike/jet.hpp"

using namespace spacelike;

namespace {

Jet3 jet(const std::string& text, std::vector<double> x) {
  return evaluate_jet(parse(text, static_cast<int>(x.size())), x);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Jets, Square) {
  const Jet3 j = jet("x1^2", {3});
  EXPECT_DOUBLE_EQ(j.value(), 9.0);
  EXPECT_DOUBLE_EQ(j.grad(0), 6.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 0), 0.0);
}

TEST(Jets, HyperboloidAtOrigin) {
  const Jet3 j = jet("sqrt(1 + x1^2 + x2^2)", {0, 0});
  EXPECT_DOUBLE_EQ(j.value(), 1.0);
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(j.grad(i), 0.0);
    for (int k = 0; k < 2; ++k) {
      EXPECT_DOUBLE_EQ(j.hess(i, k), i == k ? 1.0 : 0.0);
      for (int l = 0; l < 2; ++l) EXPECT_DOUBLE_EQ(j.third(i, k, l), 0.0);
    }
  }
}

TEST(Jets, ExpSinAgainstHandDerivatives) {
  // f = e^x sin y: every derivative is e^x times sin or cos of y.
  const double x = 0.4, y = -1.1;
  const Jet3 j = jet("exp(x1)*sin(x2)", {x, y});
  const double ex = std::exp(x), s = std::sin(y), c = std::cos(y);
  EXPECT_NEAR(j.grad(0), ex * s, 1e-14);
  EXPECT_NEAR(j.grad(1), ex * c, 1e-14);
  EXPECT_NEAR(j.hess(0, 0), ex * s, 1e-14);
  EXPECT_NEAR(j.hess(0, 1), ex * c, 1e-14);
  EXPECT_NEAR(j.hess(1, 1), -ex * s, 1e-14);
  EXPECT_NEAR(j.third(0, 0, 0), ex * s, 1e-14);
  EXPECT_NEAR(j.third(0, 0, 1), ex * c, 1e-14);
  EXPECT_NEAR(j.third(0, 1, 1), -ex * s, 1e-14);
  EXPECT_NEAR(j.third(1, 1, 1), -ex * c, 1e-14);
}

TEST(Jets, ExpSinMatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const Expr e = parse("exp(x1)*sin(x2)", 2);
  const double h = 1e-4;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> p{u(rng), u(rng)};
    const Jet3 j = evaluate_jet(e, p);
    auto f = [&](double dx, double dy) { return evaluate(e, std::vector<double>{p[0] + dx, p[1] + dy}); };
    const double gx = (f(h, 0) - f(-h, 0)) / (2 * h), gy = (f(0, h) - f(0, -h)) / (2 * h);
    const double hxx = (f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h);
    const double hyy = (f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h);
    const double hxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    EXPECT_LE(rel(j.grad(0), gx), 1e-5);
    EXPECT_LE(rel(j.grad(1), gy), 1e-5);
    EXPECT_LE(rel(j.hess(0, 0), hxx), 1e-5);
    EXPECT_LE(rel(j.hess(1, 1), hyy), 1e-5);
    EXPECT_LE(rel(j.hess(0, 1), hxy), 1e-5);
  }
}

TEST(Jets, FiniteDiffCheckCube) {
  const auto r = finite_diff_check(parse("x1^3", 1), std::vector<double>{1.0}, 1e-3);
  EXPECT_LE(r.order1, 1e-6);
  EXPECT_LE(r.order2, 1e-6);
}

TEST(Jets, FiniteDiffCheckConstant) {
  for (double h : {1e-1, 1e-3}) {
    const auto r = finite_diff_check(parse("5", 2), std::vector<double>{0.3, -2.0}, h);
    EXPECT_EQ(r.order1, 0.0);
    EXPECT_EQ(r.order2, 0.0);
    EXPECT_EQ(r.order3, 0.0);
  }
}

TEST(Jets, FiniteDiffCheckSineThirdOrder) {
  const auto r = finite_diff_check(parse("sin(x1)", 1), std::vector<double>{0.7}, 1e-4);
  EXPECT_LE(r.order3, 1e-4);
}

TEST(Jets, LinearityIsExact) {
  const std::vector<double> p{0.3, -0.8, 0.5};
  const Jet3 a = jet("sin(x1*x2) + x3^3", p);
  const Jet3 b = jet("exp(x2 - x3)*x1", p);
  const Jet3 combo = jet("2.5*(sin(x1*x2) + x3^3) + -3*(exp(x2 - x3)*x1)", p);
  const Jet3 manual = 2.5 * a + (-3.0) * b;
  EXPECT_NEAR(combo.value(), manual.value(), 1e-15);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(combo.grad(i), manual.grad(i), 1e-14);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(combo.hess(i, k), manual.hess(i, k), 1e-14);
      for (int l = 0; l < 3; ++l) EXPECT_NEAR(combo.third(i, k, l), manual.third(i, k, l), 1e-13);
    }
  }
}

TEST(Jets, ProductRuleToThirdOrder) {
  // Leibniz rule for d^3 (uv) written out independently of Jet3 multiplication.
  const std::vector<double> p{0.2, 0.9};
  const Jet3 u = jet("cos(x1 + 2*x2)", p);
  const Jet3 v = jet("1/(1 + x1^2*x2)", p);
  const Jet3 uv = jet("cos(x1 + 2*x2) * (1/(1 + x1^2*x2))", p);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const double expect = u.third(i, k, l) * v.value() + u.hess(i, k) * v.grad(l) + u.hess(i, l) * v.grad(k) +
                              u.hess(k, l) * v.grad(i) + u.grad(i) * v.hess(k, l) + u.grad(k) * v.hess(i, l) +
                              u.grad(l) * v.hess(i, k) + u.value() * v.third(i, k, l);
        EXPECT_LE(rel(uv.third(i, k, l), expect), 1e-14);
      }
}

TEST(Jets, SymmetricStorage) {
  const Jet3 j = jet("x1*x2^2*x3^3 + sin(x1*x3)", {0.4, 0.5, 0.6});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(j.hess(i, k), j.hess(k, i));
      for (int l = 0; l < 3; ++l) {
        EXPECT_EQ(j.third(i, k, l), j.third(l, i, k));
        EXPECT_EQ(j.third(i, k, l), j.third(k, l, i));
        EXPECT_EQ(j.third(i, k, l), j.third(i, l, k));
      }
    }
}

TEST(Jets, EveryFunctionAgainstFiniteDifferences) {
  const char* texts[] = {"sin(x1)", "cos(x1)", "exp(x1)", "log(x1)", "sqrt(x1)",
                         "sinh(x1)", "cosh(x1)", "tanh(x1)", "asinh(x1)", "atanh(x1)", "x1^-3"};
  for (const char* t : texts) {
    // x^-3 has steep higher derivatives at 0.45, so it is sampled further out.
    const double x = std::string(t) == "x1^-3" ? 1.2 : 0.45;
    const auto r = finite_diff_check(parse(t, 1), std::vector<double>{x}, 1e-4);
    EXPECT_LE(r.order1, 1e-7) << t;
    EXPECT_LE(r.order2, 1e-5) << t;
    EXPECT_LE(r.order3, 1e-6) << t;
  }
}

TEST(Jets, EightDimensions) {
  std::string text = "exp(0";
  std::vector<double> p;
  for (int i = 1; i <= 8; ++i) {
    text += " + " + std::to_string(i) + "*x" + std::to_string(i);
    p.push_back(0.01 * i);
  }
  text += ")";
  const Jet3 j = evaluate_jet(parse(text, 8), p);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      for (int l = 0; l < 8; ++l) EXPECT_NEAR(j.third(i, k, l), (i + 1) * (k + 1) * (l + 1) * j.value(), 1e-10);
}

TEST(Jets, DomainErrorPropagates) {
  EXPECT_THROW((void)jet("log(x1 - 2)", {1.0}), DomainError);
  EXPECT_THROW((void)jet("sqrt(x1^2)", {0.0}), DomainError);
}

TEST(Jets, DualMatchesJetGradient) {
  const Expr e = parse("x1*exp(x2) - atanh(0.5*x3)", 3);
  const std::vector<double> p{0.1, 0.2, 0.3};
  const Jet3 j = evaluate_jet(e, p);
  const Dual<8> d = evaluate_dual(e, p);
  EXPECT_DOUBLE_EQ(d.value(), j.value());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.d(i), j.grad(i), 1e-15);
}
