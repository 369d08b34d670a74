#include "spacelike/solver.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "spacelike/errors.hpp"
#include "spacelike/jet.hpp"

namespace spacelike {

namespace {

constexpr int kMaxStencil = 27;  // 3^3
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Equation { Maximal, MongeAmpere };

int ipow3(int m) {
  int r = 1;
  for (int i = 0; i < m; ++i) r *= 3;
  return r;
}

// Stencil slot of an offset in {-1,0,1}^m; the last axis is the fastest digit.
struct Slots {
  int m = 0;
  int size = 0;
  int center = 0;
  std::array<int, 3> weight{};

  explicit Slots(int dim) : m(dim), size(ipow3(dim)), center((ipow3(dim) - 1) / 2) {
    int w = 1;
    for (int d = m; d-- > 0;) {
      weight[d] = w;
      w *= 3;
    }
  }
  int at(int d, int s) const { return center + s * weight[d]; }
  int at(int d1, int s1, int d2, int s2) const { return center + s1 * weight[d1] + s2 * weight[d2]; }
};

std::vector<int> slot_offsets(const Slots& sl, int slot) {
  std::vector<int> off(static_cast<std::size_t>(sl.m));
  for (int d = sl.m; d-- > 0;) {
    off[d] = slot % 3 - 1;
    slot /= 3;
  }
  return off;
}

template <class T>
T tsqrt(const T& x) {
  using std::sqrt;
  return sqrt(x);
}

// Divergence-form maximal operator at one node. Midpoint fluxes use the
// normal difference across the face and transverse central differences
// averaged over the two face endpoints.
template <class T>
T maximal_local(const Slots& sl, const double* h, const T* u, double& qmax) {
  const int m = sl.m;
  const T& u0 = u[sl.center];
  T r(0.0);
  for (int d = 0; d < m; ++d)
    for (int side = -1; side <= 1; side += 2) {
      const T du = (u[sl.at(d, side)] - u0) / h[d];
      T q = du * du;
      for (int e = 0; e < m; ++e) {
        if (e == d) continue;
        const T te = (u[sl.at(e, 1)] - u[sl.at(e, -1)] + u[sl.at(d, side, e, 1)] - u[sl.at(d, side, e, -1)]) /
                     (4.0 * h[e]);
        q += te * te;
      }
      qmax = std::max(qmax, value_of(q));
      // Keep the arithmetic finite for rejected iterates; admissibility is
      // checked separately through qmax.
      const T w = value_of(q) < 1.0 ? T(1.0) / tsqrt(T(1.0) - q) : T(0.0);
      r += w * du / h[d];
    }
  return r;
}

template <class T>
void discrete_hessian(const Slots& sl, const double* h, const T* u, std::array<std::array<T, 3>, 3>& hs) {
  const int m = sl.m;
  const T& u0 = u[sl.center];
  for (int d = 0; d < m; ++d) {
    hs[d][d] = (u[sl.at(d, 1)] - 2.0 * u0 + u[sl.at(d, -1)]) / (h[d] * h[d]);
    for (int e = d + 1; e < m; ++e) {
      const T v = (u[sl.at(d, 1, e, 1)] - u[sl.at(d, 1, e, -1)] - u[sl.at(d, -1, e, 1)] + u[sl.at(d, -1, e, -1)]) /
                  (4.0 * h[d] * h[e]);
      hs[d][e] = v;
      hs[e][d] = v;
    }
  }
}

template <class T>
T det_small(const std::array<std::array<T, 3>, 3>& a, int m) {
  if (m == 1) return a[0][0];
  if (m == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double min_eig_small(const std::array<std::array<double, 3>, 3>& a, int m) {
  Eigen::Matrix3d mat = Eigen::Matrix3d::Zero();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mat(i, j) = a[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat.topLeftCorner(m, m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <class T>
T ma_local(const Slots& sl, const double* h, const T* u, double c, double& min_eig) {
  std::array<std::array<T, 3>, 3> hs{};
  discrete_hessian(sl, h, u, hs);
  std::array<std::array<double, 3>, 3> hv{};
  for (int i = 0; i < sl.m; ++i)
    for (int j = 0; j < sl.m; ++j) hv[i][j] = value_of(hs[i][j]);
  min_eig = std::min(min_eig, min_eig_small(hv, sl.m));
  return det_small(hs, sl.m) - c;
}

struct Problem {
  Equation eq = Equation::Maximal;
  double c = 1.0;
  double delta_safe = 1e-6;
  Lattice lattice;
  Slots slots{1};
  std::array<double, 3> h{};
  std::vector<NodeRole> roles;
  std::vector<std::size_t> active;
  std::vector<int> active_index;     // node -> row, -1 when not active
  std::vector<std::size_t> stencil;  // active.size() x slots.size

  Problem(Equation e, const Lattice& lat, std::vector<NodeRole> r) : eq(e), lattice(lat), slots(lat.dim()) {
    const int m = lat.dim();
    if (m > 3) throw LatticeError("solver: lattices beyond m = 3 are not supported");
    for (int d = 0; d < m; ++d) h[d] = lat.spacing(d);
    roles = std::move(r);
    active_index.assign(lat.size(), -1);
    for (std::size_t node = 0; node < lat.size(); ++node)
      if (roles[node] == NodeRole::Active) {
        active_index[node] = static_cast<int>(active.size());
        active.push_back(node);
      }
    stencil.resize(active.size() * static_cast<std::size_t>(slots.size));
    for (std::size_t a = 0; a < active.size(); ++a)
      for (int k = 0; k < slots.size; ++k)
        stencil[a * slots.size + k] = *lat.neighbor(active[a], slot_offsets(slots, k));
  }

  std::size_t nbr(std::size_t a, int k) const { return stencil[a * slots.size + k]; }

  struct Eval {
    Eigen::VectorXd r;
    double qmax = 0.0;  // maximal: largest midpoint |grad|^2
    double min_eig = std::numeric_limits<double>::infinity();  // MA: smallest discrete Hessian eigenvalue
    bool admissible = false;
    double norm() const { return r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0; }
  };

  Eval evaluate(const std::vector<double>& v) const {
    Eval ev;
    ev.r.resize(static_cast<Eigen::Index>(active.size()));
    std::array<double, kMaxStencil> u{};
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (int k = 0; k < slots.size; ++k) u[k] = v[nbr(a, k)];
      ev.r(static_cast<Eigen::Index>(a)) = eq == Equation::Maximal ? maximal_local(slots, h.data(), u.data(), ev.qmax)
                                                                   : ma_local(slots, h.data(), u.data(), c, ev.min_eig);
    }
    if (eq == Equation::Maximal) {
      const double lim = (1.0 - delta_safe) * (1.0 - delta_safe);
      ev.admissible = ev.qmax <= lim;
    } else {
      ev.admissible = ev.min_eig > 0.0;
    }
    ev.admissible = ev.admissible && ev.r.allFinite();
    return ev;
  }

  Eigen::SparseMatrix<double> jacobian(const std::vector<double>& v) const {
    using D = Dual<kMaxStencil>;
    const int ns = slots.size;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(active.size() * static_cast<std::size_t>(ns));
    std::array<D, kMaxStencil> u{};
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (int k = 0; k < ns; ++k) u[k] = D::seed(v[nbr(a, k)], ns, k);
      double dummy_q = 0.0, dummy_e = std::numeric_limits<double>::infinity();
      const D r = eq == Equation::Maximal ? maximal_local(slots, h.data(), u.data(), dummy_q)
                                          : ma_local(slots, h.data(), u.data(), c, dummy_e);
      for (int k = 0; k < ns; ++k) {
        const int col = active_index[nbr(a, k)];
        if (col >= 0 && r.d(k) != 0.0) trips.emplace_back(static_cast<int>(a), col, r.d(k));
      }
    }
    const auto n = static_cast<Eigen::Index>(active.size());
    Eigen::SparseMatrix<double> j(n, n);
    j.setFromTriplets(trips.begin(), trips.end());
    return j;
  }
};

// Discrete Laplace extension of the Dirichlet values in `v` (active entries
// are overwritten).
class Harmonic {
 public:
  explicit Harmonic(const Problem& p) : p_(p) {
    const auto n = static_cast<Eigen::Index>(p.active.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t a = 0; a < p.active.size(); ++a) {
      double diag = 0.0;
      for (int d = 0; d < p.slots.m; ++d) {
        const double w = 1.0 / (p.h[d] * p.h[d]);
        diag -= 2.0 * w;
        for (int s = -1; s <= 1; s += 2) {
          const int col = p.active_index[p.nbr(a, p.slots.at(d, s))];
          if (col >= 0) trips.emplace_back(static_cast<int>(a), col, w);
        }
      }
      trips.emplace_back(static_cast<int>(a), static_cast<int>(a), diag);
    }
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trips.begin(), trips.end());
    lu_.analyzePattern(lap);
    lu_.factorize(lap);
    if (lu_.info() != Eigen::Success) throw SolverError(SolverError::Kind::Singular, "harmonic extension: singular Laplacian");
  }

  void extend(std::vector<double>& v) const {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(p_.active.size()));
    for (std::size_t a = 0; a < p_.active.size(); ++a) {
      double b = 0.0;
      for (int d = 0; d < p_.slots.m; ++d)
        for (int s = -1; s <= 1; s += 2) {
          const std::size_t nb = p_.nbr(a, p_.slots.at(d, s));
          if (p_.active_index[nb] < 0) b -= v[nb] / (p_.h[d] * p_.h[d]);
        }
      rhs(static_cast<Eigen::Index>(a)) = b;
    }
    const Eigen::VectorXd x = lu_.solve(rhs);
    for (std::size_t a = 0; a < p_.active.size(); ++a) v[p_.active[a]] = x(static_cast<Eigen::Index>(a));
  }

 private:
  const Problem& p_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

// Damped Newton from an admissible start. Returns the converged values or
// throws SolverError.
std::vector<double> newton(const Problem& p, std::vector<double> v, double lambda, const SolverOptions& opt,
                           std::vector<IterationRecord>& log, int& iterations) {
  Problem::Eval ev = p.evaluate(v);
  if (!ev.admissible)
    throw SolverError(p.eq == Equation::Maximal ? SolverError::Kind::NotSpacelike : SolverError::Kind::ConvexityLoss,
                      "newton: initial iterate is not admissible");
  double rn = ev.norm();
  log.push_back({0, lambda, rn, 0.0});
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (rn <= opt.tol) return v;
    const Eigen::SparseMatrix<double> j = p.jacobian(v);
    if (!analyzed) {
      lu.analyzePattern(j);
      analyzed = true;
    }
    lu.factorize(j);
    if (lu.info() != Eigen::Success) throw SolverError(SolverError::Kind::Singular, "newton: singular Jacobian");
    const Eigen::VectorXd delta = lu.solve(-ev.r);
    if (!delta.allFinite()) throw SolverError(SolverError::Kind::Singular, "newton: non-finite step");

    bool accepted = false;
    bool saw_admissible = false;
    std::vector<double> cand = v;
    for (double t = 1.0; t >= opt.damping_floor; t *= 0.5) {
      for (std::size_t a = 0; a < p.active.size(); ++a)
        cand[p.active[a]] = v[p.active[a]] + t * delta(static_cast<Eigen::Index>(a));
      Problem::Eval ce = p.evaluate(cand);
      if (!ce.admissible) continue;
      saw_admissible = true;
      const double cn = ce.norm();
      if (cn <= (1.0 - 1e-4 * t) * rn) {
        v.swap(cand);
        ev = std::move(ce);
        rn = cn;
        log.push_back({it, lambda, rn, t});
        ++iterations;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!saw_admissible && p.eq == Equation::MongeAmpere)
        throw SolverError(SolverError::Kind::ConvexityLoss, "newton: backtracking could not keep the discrete Hessian positive definite");
      throw SolverError(SolverError::Kind::DampingFloor, "newton: damping floor reached without sufficient decrease (residual " +
                                                             std::to_string(rn) + ")");
    }
  }
  if (rn <= opt.tol) return v;
  throw SolverError(SolverError::Kind::Divergence,
                    "newton: no convergence after " + std::to_string(opt.max_iter) + " iterations (residual " + std::to_string(rn) + ")");
}

// Solves with Dirichlet data base + lambda (target - base), walking lambda to
// 1 when the direct attempt fails. `base` must solve the discrete problem.
SolveResult solve_continuation(const Problem& p, const std::vector<double>& base, const std::vector<double>& target,
                               const SolverOptions& opt) {
  const Harmonic harm(p);
  SolveResult res;
  auto guess_from = [&](const std::vector<double>& from, double dl) {
    std::vector<double> diff(target.size(), 0.0);
    for (std::size_t i = 0; i < diff.size(); ++i)
      if (p.roles[i] == NodeRole::Dirichlet) diff[i] = dl * (target[i] - base[i]);
    harm.extend(diff);
    std::vector<double> g = from;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (p.roles[i] != NodeRole::Outside) g[i] += diff[i];
    return g;
  };
  auto attempt = [&](const std::vector<double>& guess, double lambda, std::vector<double>& out) {
    if (!p.evaluate(guess).admissible) return false;
    std::vector<IterationRecord> log;
    int iters = 0;
    try {
      out = newton(p, guess, lambda, opt, log, iters);
    } catch (const SolverError&) {
      res.log.insert(res.log.end(), log.begin(), log.end());
      res.iterations += iters;
      return false;
    }
    res.log.insert(res.log.end(), log.begin(), log.end());
    res.iterations += iters;
    return true;
  };

  std::vector<double> sol;
  if (!attempt(guess_from(base, 1.0), 1.0, sol)) {
    double lam = 0.0, dl = 0.25;
    std::vector<double> cur = base;
    while (lam < 1.0) {
      if (res.continuation_steps >= opt.max_continuation_steps || dl < 1.0 / 4096.0)
        throw SolverError(SolverError::Kind::NotSpacelike,
                          "continuation stalled at lambda = " + std::to_string(lam) + " (boundary data may admit no admissible extension)");
      ++res.continuation_steps;
      const double next = std::min(1.0, lam + dl);
      std::vector<double> out;
      if (attempt(guess_from(cur, next - lam), next, out)) {
        cur.swap(out);
        lam = next;
        dl = std::min(0.5, 2.0 * dl);
      } else {
        dl *= 0.5;
      }
    }
    sol.swap(cur);
  }
  res.field.lattice = p.lattice;
  res.field.roles = p.roles;
  res.field.values = std::move(sol);
  res.residual = p.evaluate(res.field.values).norm();
  return res;
}

std::vector<double> sample(const Lattice& lat, const std::vector<NodeRole>& roles, const Expr& e) {
  std::vector<double> v(lat.size(), kNaN);
  for (std::size_t node = 0; node < lat.size(); ++node)
    if (roles[node] != NodeRole::Outside) {
      if (roles[node] == NodeRole::Dirichlet) {
        v[node] = evaluate(e, lat.position(node));
      } else {
        v[node] = 0.0;
      }
    }
  return v;
}

Problem problem_for(Equation eq, const GridField& f, double c) {
  Problem p(eq, f.lattice, f.roles);
  p.c = c;
  return p;
}

}  // namespace

const char* to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Outside: return "outside";
    case NodeRole::Active: return "active";
    case NodeRole::Dirichlet: return "dirichlet";
  }
  return "?";
}

std::size_t GridField::active_count() const {
  std::size_t n = 0;
  for (NodeRole r : roles) n += r == NodeRole::Active;
  return n;
}

bool GridField::has_full_stencil(std::size_t node) const {
  if (!std::isfinite(values[node])) return false;
  for (const auto& off : lattice.neighbor_offsets()) {
    const auto nb = lattice.neighbor(node, off);
    if (!nb || !std::isfinite(values[*nb])) return false;
  }
  return true;
}

std::vector<NodeRole> classify_nodes(const Lattice& lat) {
  std::vector<NodeRole> roles(lat.size(), NodeRole::Outside);
  const auto offsets = lat.neighbor_offsets();
  for (std::size_t node = 0; node < lat.size(); ++node) {
    if (lat.on_box_boundary(node) || !lat.in_mask(node)) continue;
    roles[node] = NodeRole::Active;
  }
  std::size_t first = lat.size();
  for (std::size_t node = 0; node < lat.size(); ++node) {
    if (roles[node] != NodeRole::Active) continue;
    if (first == lat.size()) first = node;
    for (const auto& off : offsets) {
      const std::size_t nb = *lat.neighbor(node, off);
      if (roles[nb] == NodeRole::Outside) roles[nb] = NodeRole::Dirichlet;
    }
  }
  if (first == lat.size()) throw LatticeError("lattice has no active nodes");

  std::vector<char> seen(lat.size(), 0);
  std::queue<std::size_t> q;
  q.push(first);
  seen[first] = 1;
  std::vector<int> off(static_cast<std::size_t>(lat.dim()), 0);
  while (!q.empty()) {
    const std::size_t node = q.front();
    q.pop();
    for (int d = 0; d < lat.dim(); ++d)
      for (int s = -1; s <= 1; s += 2) {
        std::fill(off.begin(), off.end(), 0);
        off[d] = s;
        const auto nb = lat.neighbor(node, off);
        if (nb && roles[*nb] == NodeRole::Active && !seen[*nb]) {
          seen[*nb] = 1;
          q.push(*nb);
        }
      }
  }
  for (std::size_t node = 0; node < lat.size(); ++node)
    if (roles[node] == NodeRole::Active && !seen[node]) throw LatticeError("active nodes are not connected");
  return roles;
}

SolveResult solve_maximal(const Lattice& lattice, const Expr& boundary, const SolverOptions& opt) {
  Problem p(Equation::Maximal, lattice, classify_nodes(lattice));
  p.delta_safe = opt.delta_safe;
  const std::vector<double> target = sample(lattice, p.roles, boundary);
  std::vector<double> base(target.size(), kNaN);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (p.roles[i] != NodeRole::Outside) base[i] = 0.0;
  return solve_continuation(p, base, target, opt);
}

SolveResult solve_ma(const Lattice& lattice, const Expr& boundary, double c, const SolverOptions& opt) {
  if (!(c > 0.0)) throw Error("solve_ma: c must be positive");
  Problem p(Equation::MongeAmpere, lattice, classify_nodes(lattice));
  p.c = c;
  const std::vector<double> target = sample(lattice, p.roles, boundary);
  // 1/2 c^{1/m} |x|^2 solves the discrete problem exactly.
  const double k = 0.5 * std::pow(c, 1.0 / lattice.dim());
  std::vector<double> base(target.size(), kNaN);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (p.roles[i] != NodeRole::Outside) {
      const auto x = lattice.position(i);
      double r2 = 0.0;
      for (double xi : x) r2 += xi * xi;
      base[i] = k * r2;
    }
  return solve_continuation(p, base, target, opt);
}

double maximal_residual_norm(const GridField& field) {
  return problem_for(Equation::Maximal, field, 1.0).evaluate(field.values).norm();
}

double ma_residual_norm(const GridField& field, double c) {
  return problem_for(Equation::MongeAmpere, field, c).evaluate(field.values).norm();
}

double max_midpoint_gradient(const GridField& field) {
  return std::sqrt(problem_for(Equation::Maximal, field, 1.0).evaluate(field.values).qmax);
}

double min_discrete_hessian_eig(const GridField& field) {
  return problem_for(Equation::MongeAmpere, field, 0.0).evaluate(field.values).min_eig;
}

namespace {

void node_hessian(const GridField& f, std::size_t node, Eigen::MatrixXd& hs, Eigen::VectorXd* grad) {
  const Lattice& lat = f.lattice;
  const int m = lat.dim();
  if (m > 3) throw LatticeError("field derivatives: m <= 3 only");
  const Slots sl(m);
  std::array<double, kMaxStencil> u{};
  for (int k = 0; k < sl.size; ++k) u[k] = f.values[*lat.neighbor(node, slot_offsets(sl, k))];
  std::array<double, 3> h{};
  for (int d = 0; d < m; ++d) h[d] = lat.spacing(d);
  std::array<std::array<double, 3>, 3> a{};
  discrete_hessian(sl, h.data(), u.data(), a);
  hs.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) hs(i, j) = a[i][j];
  if (grad) {
    grad->resize(m);
    for (int d = 0; d < m; ++d) (*grad)(d) = (u[sl.at(d, 1)] - u[sl.at(d, -1)]) / (2 * h[d]);
  }
}

Tensor3 node_third(const GridField& f, std::size_t node) {
  const Lattice& lat = f.lattice;
  const int m = lat.dim();
  Tensor3 raw(m, m, m);
  std::vector<int> off(static_cast<std::size_t>(m), 0);
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXd hp, hm;
    std::fill(off.begin(), off.end(), 0);
    off[k] = 1;
    node_hessian(f, *lat.neighbor(node, off), hp, nullptr);
    off[k] = -1;
    node_hessian(f, *lat.neighbor(node, off), hm, nullptr);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) raw(i, j, k) = (hp(i, j) - hm(i, j)) / (2 * lat.spacing(k));
  }
  Tensor3 t(m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) t(i, j, k) = (raw(i, j, k) + raw(j, k, i) + raw(k, i, j)) / 3.0;
  return t;
}

bool has_two_ring(const GridField& f, std::size_t node) {
  if (!f.has_full_stencil(node)) return false;
  for (const auto& off : f.lattice.neighbor_offsets()) {
    const auto nb = f.lattice.neighbor(node, off);
    if (!nb || !f.has_full_stencil(*nb)) return false;
  }
  return true;
}

}  // namespace

LocalGraph field_local(const GridField& field, std::size_t node, bool with_third) {
  if (!field.has_full_stencil(node)) throw LatticeError("field_local: node lacks a full stencil");
  const int m = field.lattice.dim();
  LocalGraph lg;
  lg.m = m;
  lg.n = 1;
  const auto x = field.lattice.position(node);
  lg.x = Eigen::Map<const Eigen::VectorXd>(x.data(), m);
  lg.y = Eigen::VectorXd::Constant(1, field.values[node]);
  Eigen::MatrixXd hs;
  Eigen::VectorXd g;
  node_hessian(field, node, hs, &g);
  lg.jac = g.transpose();
  lg.second = Tensor3(1, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) lg.second(0, i, j) = hs(i, j);
  if (with_third) {
    if (!has_two_ring(field, node)) throw LatticeError("field_local: node lacks the two-ring for third derivatives");
    const Tensor3 t = node_third(field, node);
    Tensor4 t4(1, m, m, m);
    t4.data() = t.data();
    lg.third = std::move(t4);
  }
  return lg;
}

PotentialJet field_potential_jet(const GridField& field, std::size_t node) {
  if (!has_two_ring(field, node)) throw LatticeError("field_potential_jet: node lacks the two-ring");
  const int m = field.lattice.dim();
  PotentialJet j;
  j.m = m;
  const auto x = field.lattice.position(node);
  j.x = Eigen::Map<const Eigen::VectorXd>(x.data(), m);
  j.value = field.values[node];
  node_hessian(field, node, j.hess, &j.grad);
  j.third = node_third(field, node);
  return j;
}

std::vector<std::size_t> deep_interior_nodes(const GridField& field) {
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < field.lattice.size(); ++node)
    if (field.roles[node] == NodeRole::Active && has_two_ring(field, node)) out.push_back(node);
  return out;
}

}  // namespace spacelike
