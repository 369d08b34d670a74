#include "spacelike/jet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace spacelike {

using jet_detail::hess_count;
using jet_detail::kTables;
using jet_detail::third_count;

Jet3::Jet3(int dim, double value) : dim_(dim), value_(value) {
  if (dim < 1 || dim > kMaxJetDim) throw Error("jet dimension must be in [1, 8]");
}

Jet3 Jet3::variable(int dim, int index, double value) {
  Jet3 j(dim, value);
  j.grad_[index] = 1.0;
  return j;
}

Jet3 Jet3::operator-() const {
  Jet3 r(*this);
  r.value_ = -r.value_;
  for (int i = 0; i < dim_; ++i) r.grad_[i] = -r.grad_[i];
  for (int p = 0; p < hess_count(dim_); ++p) r.hess_[p] = -r.hess_[p];
  for (int p = 0; p < third_count(dim_); ++p) r.third_[p] = -r.third_[p];
  return r;
}

Jet3& Jet3::operator+=(const Jet3& o) {
  value_ += o.value_;
  for (int i = 0; i < dim_; ++i) grad_[i] += o.grad_[i];
  for (int p = 0; p < hess_count(dim_); ++p) hess_[p] += o.hess_[p];
  for (int p = 0; p < third_count(dim_); ++p) third_[p] += o.third_[p];
  return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
  value_ -= o.value_;
  for (int i = 0; i < dim_; ++i) grad_[i] -= o.grad_[i];
  for (int p = 0; p < hess_count(dim_); ++p) hess_[p] -= o.hess_[p];
  for (int p = 0; p < third_count(dim_); ++p) third_[p] -= o.third_[p];
  return *this;
}

Jet3& Jet3::operator*=(double s) {
  value_ *= s;
  for (int i = 0; i < dim_; ++i) grad_[i] *= s;
  for (int p = 0; p < hess_count(dim_); ++p) hess_[p] *= s;
  for (int p = 0; p < third_count(dim_); ++p) third_[p] *= s;
  return *this;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  const int m = a.dim_;
  Jet3 r(m, a.value_ * b.value_);
  for (int i = 0; i < m; ++i) r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
  for (int p = 0; p < hess_count(m); ++p) {
    const int i = kTables.h_idx[p][0], j = kTables.h_idx[p][1];
    r.hess_[p] = a.hess_[p] * b.value_ + a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i] +
                 a.value_ * b.hess_[p];
  }
  for (int p = 0; p < third_count(m); ++p) {
    const int i = kTables.t_idx[p][0], j = kTables.t_idx[p][1], k = kTables.t_idx[p][2];
    const int ij = kTables.h[i][j], ik = kTables.h[i][k], jk = kTables.h[j][k];
    r.third_[p] = a.third_[p] * b.value_ + a.hess_[ij] * b.grad_[k] + a.hess_[ik] * b.grad_[j] +
                  a.hess_[jk] * b.grad_[i] + a.grad_[i] * b.hess_[jk] + a.grad_[j] * b.hess_[ik] +
                  a.grad_[k] * b.hess_[ij] + a.value_ * b.third_[p];
  }
  return r;
}

Jet3 compose(const Jet3& u, double g0, double g1, double g2, double g3) {
  const int m = u.dim_;
  Jet3 r(m, g0);
  for (int i = 0; i < m; ++i) r.grad_[i] = g1 * u.grad_[i];
  for (int p = 0; p < hess_count(m); ++p) {
    const int i = kTables.h_idx[p][0], j = kTables.h_idx[p][1];
    r.hess_[p] = g2 * u.grad_[i] * u.grad_[j] + g1 * u.hess_[p];
  }
  for (int p = 0; p < third_count(m); ++p) {
    const int i = kTables.t_idx[p][0], j = kTables.t_idx[p][1], k = kTables.t_idx[p][2];
    const int ij = kTables.h[i][j], ik = kTables.h[i][k], jk = kTables.h[j][k];
    r.third_[p] = g3 * u.grad_[i] * u.grad_[j] * u.grad_[k] +
                  g2 * (u.hess_[ij] * u.grad_[k] + u.hess_[ik] * u.grad_[j] +
                        u.hess_[jk] * u.grad_[i]) +
                  g1 * u.third_[p];
  }
  return r;
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  const double t = b.value();
  const double inv = 1.0 / t;
  const Jet3 recip = compose(b, inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv);
  return a * recip;
}

Jet3 integer_power(const Jet3& u, int k) {
  if (k == 0) return Jet3(u.dim(), 1.0);
  const double t = u.value();
  // d^r/dt^r t^k = k (k-1) ... (k-r+1) t^(k-r); zero coefficients short-circuit
  // so that t = 0 never produces 0 * inf.
  std::array<double, 4> g{};
  double coef = 1.0;
  for (int r = 0; r < 4; ++r) {
    g[r] = coef == 0.0 ? 0.0 : coef * integer_power(t, k - r);
    coef *= static_cast<double>(k - r);
  }
  return compose(u, g[0], g[1], g[2], g[3]);
}

Jet3 apply_func(Func f, const Jet3& u) {
  const double x = u.value();
  switch (f) {
    case Func::Sin: {
      const double s = std::sin(x), c = std::cos(x);
      return compose(u, s, c, -s, -c);
    }
    case Func::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      return compose(u, c, -s, -c, s);
    }
    case Func::Exp: {
      const double e = std::exp(x);
      return compose(u, e, e, e, e);
    }
    case Func::Log: {
      const double inv = 1.0 / x;
      return compose(u, std::log(x), inv, -inv * inv, 2.0 * inv * inv * inv);
    }
    case Func::Sqrt: {
      const double s = std::sqrt(x);
      return compose(u, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
    }
    case Func::Sinh: {
      const double s = std::sinh(x), c = std::cosh(x);
      return compose(u, s, c, s, c);
    }
    case Func::Cosh: {
      const double s = std::sinh(x), c = std::cosh(x);
      return compose(u, c, s, c, s);
    }
    case Func::Tanh: {
      const double t = std::tanh(x), d = 1.0 - t * t;
      return compose(u, t, d, -2.0 * t * d, d * (6.0 * t * t - 2.0));
    }
    case Func::Asinh: {
      const double q = 1.0 + x * x, rq = 1.0 / std::sqrt(q);
      return compose(u, std::asinh(x), rq, -x * rq / q, (2.0 * x * x - 1.0) * rq / (q * q));
    }
    case Func::Atanh: {
      const double p = 1.0 - x * x;
      return compose(u, std::atanh(x), 1.0 / p, 2.0 * x / (p * p), (2.0 + 6.0 * x * x) / (p * p * p));
    }
  }
  return u;
}

Jet3 evaluate_jet(const Expr& e, std::span<const double> point) {
  const int m = static_cast<int>(point.size());
  if (m < 1 || m > kMaxJetDim) throw Error("jet dimension must be in [1, 8]");
  if (e.max_variable() > m) throw Error("expression references x" + std::to_string(e.max_variable()) +
                                        " but the point has dimension " + std::to_string(m));
  std::array<Jet3, kMaxJetDim> vars;
  for (int i = 0; i < m; ++i) vars[i] = Jet3::variable(m, i, point[i]);
  return evaluate_as<Jet3>(e, std::span<const Jet3>(vars.data(), m),
                           [m](double c) { return Jet3(m, c); });
}

FiniteDiffReport finite_diff_check(const Expr& e, std::span<const double> point, double h) {
  if (!(h > 0.0)) throw Error("finite_diff_check: step must be positive");
  const int m = static_cast<int>(point.size());
  const Jet3 jet = evaluate_jet(e, point);
  std::vector<double> p(point.begin(), point.end());

  auto value_at = [&](int i, double di, int j, double dj) {
    std::vector<double> q = p;
    if (i >= 0) q[i] += di;
    if (j >= 0) q[j] += dj;
    return evaluate(e, q);
  };
  auto dev = [](double exact, double approx) {
    return std::abs(exact - approx) / std::max(1.0, std::abs(exact));
  };

  FiniteDiffReport rep;
  const double f0 = evaluate(e, p);
  for (int i = 0; i < m; ++i) {
    const double fp = value_at(i, h, -1, 0), fm = value_at(i, -h, -1, 0);
    rep.order1 = std::max(rep.order1, dev(jet.grad(i), (fp - fm) / (2 * h)));
    rep.order2 = std::max(rep.order2, dev(jet.hess(i, i), (fp - 2 * f0 + fm) / (h * h)));
    for (int j = i + 1; j < m; ++j) {
      const double fd = (value_at(i, h, j, h) - value_at(i, h, j, -h) - value_at(i, -h, j, h) +
                         value_at(i, -h, j, -h)) /
                        (4 * h * h);
      rep.order2 = std::max(rep.order2, dev(jet.hess(i, j), fd));
    }
  }
  for (int k = 0; k < m; ++k) {
    std::vector<double> qp = p, qm = p;
    qp[k] += h;
    qm[k] -= h;
    const Jet3 jp = evaluate_jet(e, qp), jm = evaluate_jet(e, qm);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        rep.order3 = std::max(rep.order3, dev(jet.third(i, j, k), (jp.hess(i, j) - jm.hess(i, j)) / (2 * h)));
  }
  return rep;
}

}  // namespace spacelike
