#pragma once

// Truncated multivariate Taylor arithmetic to third order.
//
// A Jet3 carries the value, gradient, Hessian and third-derivative tensor of a
// scalar function of m <= 8 variables. Symmetric tensors are stored once per
// multiset of indices, so the symmetry invariants hold by construction.

#include <array>
#include <cstdint>
#include <span>

#include "spacelike/expr.hpp"

namespace spacelike {

inline constexpr int kMaxJetDim = 8;

namespace jet_detail {

inline constexpr int kHessSize = kMaxJetDim * (kMaxJetDim + 1) / 2;
inline constexpr int kThirdSize = kMaxJetDim * (kMaxJetDim + 1) * (kMaxJetDim + 2) / 6;

constexpr int hess_count(int m) { return m * (m + 1) / 2; }
constexpr int third_count(int m) { return m * (m + 1) * (m + 2) / 6; }

// Packed entries are ordered by their largest index, so the entries of a
// dimension-m jet are exactly the first hess_count(m) / third_count(m) slots.
struct Tables {
  std::array<std::array<std::uint8_t, kMaxJetDim>, kMaxJetDim> h{};
  std::array<std::array<std::array<std::uint8_t, kMaxJetDim>, kMaxJetDim>, kMaxJetDim> t{};
  std::array<std::array<std::uint8_t, 2>, kHessSize> h_idx{};
  std::array<std::array<std::uint8_t, 3>, kThirdSize> t_idx{};
};

constexpr Tables make_tables() {
  Tables tb{};
  int p = 0;
  for (int j = 0; j < kMaxJetDim; ++j)
    for (int i = 0; i <= j; ++i) {
      tb.h[i][j] = tb.h[j][i] = static_cast<std::uint8_t>(p);
      tb.h_idx[p] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
      ++p;
    }
  p = 0;
  for (int k = 0; k < kMaxJetDim; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i) {
        const auto v = static_cast<std::uint8_t>(p);
        tb.t[i][j][k] = tb.t[i][k][j] = tb.t[j][i][k] = v;
        tb.t[j][k][i] = tb.t[k][i][j] = tb.t[k][j][i] = v;
        tb.t_idx[p] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                       static_cast<std::uint8_t>(k)};
        ++p;
      }
  return tb;
}

inline constexpr Tables kTables = make_tables();

}  // namespace jet_detail

class Jet3 {
 public:
  explicit Jet3(int dim = 1, double value = 0.0);

  /// The coordinate function x_{index} (0-based) evaluated at `value`.
  static Jet3 variable(int dim, int index, double value);

  int dim() const { return dim_; }
  double value() const { return value_; }
  double grad(int i) const { return grad_[i]; }
  double hess(int i, int j) const { return hess_[jet_detail::kTables.h[i][j]]; }
  double third(int i, int j, int k) const { return third_[jet_detail::kTables.t[i][j][k]]; }

  void set_grad(int i, double v) { grad_[i] = v; }
  void set_hess(int i, int j, double v) { hess_[jet_detail::kTables.h[i][j]] = v; }
  void set_third(int i, int j, int k, double v) { third_[jet_detail::kTables.t[i][j][k]] = v; }

  Jet3 operator-() const;
  Jet3& operator+=(const Jet3& o);
  Jet3& operator-=(const Jet3& o);
  Jet3& operator*=(double s);

  friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
  friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
  friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
  friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 operator/(const Jet3& a, const Jet3& b);

  /// Chain rule: g(u) given g and its first three derivatives at u.value().
  friend Jet3 compose(const Jet3& u, double g0, double g1, double g2, double g3);

 private:
  int dim_;
  double value_;
  std::array<double, kMaxJetDim> grad_{};
  std::array<double, jet_detail::kHessSize> hess_{};
  std::array<double, jet_detail::kThirdSize> third_{};
};

inline double value_of(const Jet3& j) { return j.value(); }
Jet3 apply_func(Func f, const Jet3& u);
Jet3 integer_power(const Jet3& u, int k);

/// Exact third-order Taylor data of `e` at `point` (point.size() in [1, 8]).
/// Throws DomainError naming the offending subexpression.
Jet3 evaluate_jet(const Expr& e, std::span<const double> point);

struct FiniteDiffReport {
  double order1 = 0.0;
  double order2 = 0.0;
  double order3 = 0.0;
};

/// Compares jet derivatives with central differences of step h. Orders 1 and
/// 2 difference function values; order 3 differences the jet Hessian.
/// Deviations are |jet - fd| / max(1, |jet|), maximized over entries.
FiniteDiffReport finite_diff_check(const Expr& e, std::span<const double> point, double h);

/// First-order forward-mode scalar with up to N directional derivatives.
template <int N>
class Dual {
 public:
  Dual() = default;
  Dual(double v) : v_(v) {}  // NOLINT: implicit promotion of constants is intended
  Dual(double v, int dim) : v_(v), n_(dim) {}

  static Dual seed(double v, int dim, int index) {
    Dual d(v, dim);
    d.d_[index] = 1.0;
    return d;
  }

  double value() const { return v_; }
  double d(int i) const { return d_[i]; }
  double& d(int i) { return d_[i]; }
  int dim() const { return n_; }

  Dual operator-() const {
    Dual r(-v_, n_);
    for (int i = 0; i < n_; ++i) r.d_[i] = -d_[i];
    return r;
  }
  Dual& operator+=(const Dual& o) {
    widen(o);
    v_ += o.v_;
    for (int i = 0; i < o.n_; ++i) d_[i] += o.d_[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    widen(o);
    v_ -= o.v_;
    for (int i = 0; i < o.n_; ++i) d_[i] -= o.d_[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    widen(o);
    for (int i = 0; i < n_; ++i) d_[i] = d_[i] * o.v_ + v_ * (i < o.n_ ? o.d_[i] : 0.0);
    v_ *= o.v_;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    widen(o);
    const double inv = 1.0 / o.v_;
    const double q = v_ * inv;
    for (int i = 0; i < n_; ++i) d_[i] = (d_[i] - q * (i < o.n_ ? o.d_[i] : 0.0)) * inv;
    v_ = q;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

  /// g(u) given g(u.value()) and g'(u.value()).
  friend Dual chain(const Dual& u, double g0, double g1) {
    Dual r(g0, u.n_);
    for (int i = 0; i < u.n_; ++i) r.d_[i] = g1 * u.d_[i];
    return r;
  }

 private:
  void widen(const Dual& o) {
    if (o.n_ > n_) n_ = o.n_;
  }

  double v_ = 0.0;
  int n_ = 0;
  std::array<double, N> d_{};
};

template <int N>
double value_of(const Dual<N>& d) {
  return d.value();
}

template <int N>
Dual<N> sqrt(const Dual<N>& u) {
  const double s = std::sqrt(u.value());
  return chain(u, s, 0.5 / s);
}

template <int N>
Dual<N> apply_func(Func f, const Dual<N>& u) {
  const double x = u.value();
  switch (f) {
    case Func::Sin: return chain(u, std::sin(x), std::cos(x));
    case Func::Cos: return chain(u, std::cos(x), -std::sin(x));
    case Func::Exp: {
      const double e = std::exp(x);
      return chain(u, e, e);
    }
    case Func::Log: return chain(u, std::log(x), 1.0 / x);
    case Func::Sqrt: return sqrt(u);
    case Func::Sinh: return chain(u, std::sinh(x), std::cosh(x));
    case Func::Cosh: return chain(u, std::cosh(x), std::sinh(x));
    case Func::Tanh: {
      const double t = std::tanh(x);
      return chain(u, t, 1.0 - t * t);
    }
    case Func::Asinh: return chain(u, std::asinh(x), 1.0 / std::sqrt(1.0 + x * x));
    case Func::Atanh: return chain(u, std::atanh(x), 1.0 / (1.0 - x * x));
  }
  return u;
}

template <int N>
Dual<N> integer_power(const Dual<N>& u, int k) {
  if (k == 0) return Dual<N>(1.0, u.dim());
  const double x = u.value();
  return chain(u, spacelike::integer_power(x, k), k * spacelike::integer_power(x, k - 1));
}

/// Value and gradient of `e` at `point`, cheaper than a full Jet3.
template <int N = kMaxJetDim>
Dual<N> evaluate_dual(const Expr& e, std::span<const double> point) {
  std::array<Dual<N>, N> vars{};
  const int m = static_cast<int>(point.size());
  for (int i = 0; i < m; ++i) vars[i] = Dual<N>::seed(point[i], m, i);
  return evaluate_as<Dual<N>>(e, std::span<const Dual<N>>(vars.data(), m),
                              [m](double c) { return Dual<N>(c, m); });
}

}  // namespace spacelike
