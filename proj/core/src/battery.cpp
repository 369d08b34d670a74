#include "spacelike/battery.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/SVD>

#include "spacelike/bernstein.hpp"
#include "spacelike/errors.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/grassmann.hpp"
#include "spacelike/intrinsic.hpp"
#include "spacelike/jet.hpp"
#include "spacelike/solver.hpp"

namespace spacelike {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return v < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
}

void monomials(int m, int degree, std::vector<int>& cur, int var, int left, std::vector<std::vector<int>>& out) {
  if (var == m) {
    int total = 0;
    for (int e : cur) total += e;
    if (total > 0) out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[var] = e;
    monomials(m, degree, cur, var + 1, left - e, out);
  }
  cur[var] = 0;
}

std::string polynomial_text(const std::vector<std::vector<int>>& monos, const std::vector<double>& coeffs, double scale) {
  std::string s;
  for (std::size_t k = 0; k < monos.size(); ++k) {
    if (!s.empty()) s += " + ";
    s += num(scale * coeffs[k]);
    for (std::size_t v = 0; v < monos[k].size(); ++v) {
      const int e = monos[k][v];
      if (e == 0) continue;
      s += "*x" + std::to_string(v + 1);
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

double sigma_max(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

GraphCase random_polynomial_graph(std::mt19937_64& rng, int m, int n, int degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0), pt(-0.5, 0.5), target(0.2, 0.7);
  std::vector<std::vector<int>> monos;
  std::vector<int> cur(static_cast<std::size_t>(m), 0);
  monomials(m, degree, cur, 0, degree, monos);
  for (;;) {
    std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(n));
    for (auto& c : coeffs) {
      c.resize(monos.size());
      for (double& v : c) v = coef(rng);
    }
    std::vector<double> point(static_cast<std::size_t>(m));
    for (double& v : point) v = pt(rng);
    const double want = target(rng);
    std::vector<std::string> raw;
    for (const auto& c : coeffs) raw.push_back(polynomial_text(monos, c, 1.0));
    const double sig = sigma_max(GraphMap::parse(m, raw).jacobian(point));
    if (sig < 1e-3) continue;
    std::vector<std::string> scaled;
    for (const auto& c : coeffs) scaled.push_back(polynomial_text(monos, c, want / sig));
    return GraphCase{join(scaled), GraphMap::parse(m, scaled), point};
  }
}

PotentialCase random_convex_quartic(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.05, 0.5), pt(-1.0, 1.0);
  Eigen::MatrixXd l(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) l(i, j) = u(rng);
  const Eigen::MatrixXd q = 0.3 * l * l.transpose() + 0.5 * Eigen::MatrixXd::Identity(m, m);
  std::string s;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double c = i == j ? 0.5 * q(i, i) : q(i, j);
      s += (s.empty() ? "" : " + ") + num(c) + "*x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
    }
  for (int k = 0; k < 2; ++k) {
    std::string lin;
    for (int i = 0; i < m; ++i) lin += num(u(rng)) + "*x" + std::to_string(i + 1) + " + ";
    lin += num(0.5 * u(rng));
    s += " + " + num(pos(rng)) + "*(" + lin + ")^4";
  }
  std::vector<double> point(static_cast<std::size_t>(m));
  for (double& v : point) v = pt(rng);
  return PotentialCase{s, Potential::parse(m, s), point};
}

std::string hyperboloid_text(int m, bool shifted) {
  std::string s = "sqrt(1";
  for (int i = 1; i <= m; ++i) s += " + x" + std::to_string(i) + "^2";
  s += ")";
  if (shifted) s += " - 1";
  return s;
}

std::string catenoid_text() { return "asinh(sqrt(x1^2 + x2^2))"; }

namespace {

class Suite {
 public:
  explicit Suite(std::vector<CheckResult>& out) : out_(out) {}

  void run(const std::string& suite, const std::string& name, double tol, const std::function<double()>& f,
           const std::string& detail = "") {
    CheckResult r{suite, name, 0.0, tol, false, detail};
    try {
      r.value = f();
      r.passed = std::isfinite(r.value) && r.value <= tol;
    } catch (const std::exception& e) {
      r.value = std::nan("");
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out_.push_back(std::move(r));
  }

 private:
  std::vector<CheckResult>& out_;
};

double rel_diff(const Tensor4& a, const Tensor4& b) {
  return max_abs_diff(a, b) / std::max(1.0, std::max(a.max_abs(), b.max_abs()));
}

// Hyperbolic-space distance between the unit timelike normals of two
// hyperplane slopes (n = 1).
double n1_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double ip = (a.dot(b) - 1.0) / std::sqrt((1.0 - a.squaredNorm()) * (1.0 - b.squaredNorm()));
  return std::acosh(std::max(1.0, std::abs(ip)));
}

Eigen::MatrixXd random_rotation(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Eigen::MatrixXd random_slope(std::mt19937_64& rng, int n, int m, double cap) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.05, cap);
  Eigen::MatrixXd a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = u(rng);
  return a * (s(rng) / sigma_max(a));
}

}  // namespace

std::vector<CheckResult> run_check_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Suite suite(out);
  std::mt19937_64 rng(seed);

  std::vector<GraphCase> graphs;
  for (int k = 0; k < 12; ++k) graphs.push_back(random_polynomial_graph(rng, 1 + k % 3, 1 + (k / 3) % 2));
  std::vector<PotentialCase> quartics;
  for (int k = 0; k < 6; ++k) quartics.push_back(random_convex_quartic(rng, 2));

  suite.run("exprparse", "print_parse_roundtrip", 0.0, [&] {
    double bad = 0;
    for (const auto& g : graphs)
      for (const auto& c : g.map.components())
        bad += structurally_equal(parse(c.to_string(), g.map.m()), c) ? 0 : 1;
    for (const auto& q : quartics) bad += structurally_equal(parse(q.potential.F.to_string(), 2), q.potential.F) ? 0 : 1;
    return bad;
  });

  suite.run("jets", "finite_difference_agreement", 1e-6, [&] {
    double worst = 0;
    for (const auto& g : graphs)
      for (const auto& c : g.map.components()) {
        const auto r = finite_diff_check(c, g.point, 1e-4);
        worst = std::max({worst, r.order1, r.order2, r.order3});
      }
    return worst;
  });

  suite.run("graphgeom", "gauss_equation_vs_christoffel", 1e-6, [&] {
    double worst = 0;
    for (const auto& g : graphs) {
      const LocalGraph lg = g.map.local(g.point);
      const PointGeometry pg = curvature(lg);
      const Tensor4 coord = coordinate_riemann(graph_metric_derivatives(lg));
      worst = std::max(worst, rel_diff(pg.riemann, change_frame(coord, pg.frames.tangent_coeffs)));
    }
    return worst;
  });

  suite.run("graphgeom", "codazzi_symmetry", 1e-6, [&] {
    double worst = 0;
    for (const auto& g : graphs) worst = std::max(worst, covariant_h(g.map, g.point).codazzi_asymmetry);
    return worst;
  });

  suite.run("graphgeom", "ricci_lower_bound", 1e-10, [&] {
    double worst = 0;
    for (const auto& g : graphs) worst = std::max(worst, -ricci_bound_check(g.map, g.point));
    return worst;
  });

  suite.run("graphgeom", "first_bianchi", 1e-10, [&] {
    double worst = 0;
    for (const auto& g : graphs) worst = std::max(worst, first_bianchi_defect(curvature(g.map, g.point).riemann));
    return worst;
  });

  for (int m : {2, 3}) {
    const GraphMap hyp = GraphMap::parse(m, {hyperboloid_text(m)});
    suite.run("graphgeom", "hyperboloid_umbilic_m" + std::to_string(m), 1e-9, [&] {
      double worst = 0;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int k = 0; k < 5; ++k) {
        std::vector<double> x(static_cast<std::size_t>(m));
        for (double& v : x) v = u(rng);
        const PointGeometry pg = curvature(hyp, x);
        worst = std::max({worst, std::abs(pg.H_norm - 1.0), std::abs(pg.S - m)});
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            if (i != j) worst = std::max(worst, std::abs(pg.riemann(i, j, i, j) + 1.0));
        worst = std::max(worst, covariant_h(hyp, x).h_cov.max_abs());
      }
      return worst;
    });
  }

  suite.run("graphgeom", "pseudo_distance_trace_identity", 1e-10, [&] {
    double worst = 0;
    const GraphMap sh = GraphMap::parse(2, {hyperboloid_text(2, true)});
    for (const auto& g : graphs) {
      const GraphMap based = g.map.with_origin_offset();
      const PseudoDistancePoint pd = pseudo_distance(based, g.point);
      worst = std::max(worst, std::abs(pd.hess_z.trace() - pd.lap_z));
    }
    const std::vector<double> x{0.3, -0.4};
    const PseudoDistancePoint pd = pseudo_distance(sh, x);
    worst = std::max(worst, std::abs(pd.hess_z.trace() - pd.lap_z));
    return worst;
  });

  suite.run("grassmann", "n1_hyperbolic_oracle", 1e-8, [&] {
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const int m = 1 + k % 3;
      const auto p = SpacelikePlane::from_slope(random_slope(rng, 1, m, 0.9));
      const auto q = SpacelikePlane::from_slope(random_slope(rng, 1, m, 0.9));
      worst = std::max(worst, std::abs(distance(p, q) - n1_distance(p.slope, q.slope)));
    }
    return worst;
  });

  suite.run("grassmann", "boost_additivity", 1e-9, [&] {
    double worst = 0;
    std::uniform_real_distribution<double> t(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
      const int m = 1 + k % 3, n = 1 + k % 2;
      Eigen::VectorXd u = random_rotation(rng, n).col(0), v = random_rotation(rng, m).col(0);
      const double t1 = t(rng), t2 = t(rng);
      const auto p = SpacelikePlane::from_slope(std::tanh(t1) * u * v.transpose());
      const auto q = SpacelikePlane::from_slope(std::tanh(t2) * u * v.transpose());
      worst = std::max(worst, std::abs(distance(p, q) - std::abs(t1 - t2)));
    }
    return worst;
  });

  suite.run("grassmann", "rotation_invariance", 1e-12, [&] {
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      const int m = 1 + k % 3, n = 1 + k % 2;
      const Eigen::MatrixXd a = random_slope(rng, n, m, 0.8), b = random_slope(rng, n, m, 0.8);
      const Eigen::MatrixXd rn = random_rotation(rng, n), rm = random_rotation(rng, m);
      const double d0 = distance(SpacelikePlane::from_slope(a), SpacelikePlane::from_slope(b));
      const double d1 = distance(SpacelikePlane::from_slope(rn * a * rm.transpose()),
                                 SpacelikePlane::from_slope(rn * b * rm.transpose()));
      worst = std::max(worst, std::abs(d0 - d1));
    }
    return worst;
  });

  suite.run("grassmann", "symmetry_and_triangle", 1e-9, [&] {
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      const int m = 1 + k % 3, n = 1 + k % 2;
      const auto p = SpacelikePlane::from_slope(random_slope(rng, n, m, 0.8));
      const auto q = SpacelikePlane::from_slope(random_slope(rng, n, m, 0.8));
      const auto r = SpacelikePlane::from_slope(random_slope(rng, n, m, 0.8));
      worst = std::max(worst, std::abs(distance(p, q) - distance(q, p)));
      worst = std::max(worst, distance(p, r) - distance(p, q) - distance(q, r));
    }
    return worst;
  });

  suite.run("grassmann", "gauss_map_pullback", 1e-3, [&] {
    double worst = 0;
    std::normal_distribution<double> nd;
    for (const auto& g : graphs) {
      std::vector<double> v(static_cast<std::size_t>(g.map.m()));
      double norm = 0;
      for (double& c : v) {
        c = nd(rng);
        norm += c * c;
      }
      for (double& c : v) c /= std::sqrt(norm);
      worst = std::max(worst, pullback_check(g.map, g.point, v).error);
      const double s = fundamental_forms(g.map, g.point).S;
      worst = std::max(worst, std::abs(pullback_trace(g.map, g.point) - s) / (1.0 + s));
    }
    return worst;
  });

  suite.run("lagrangian", "standard_form_cross_check", 1e-8, [&] {
    double worst = 0;
    for (const auto& q : quartics) {
      const LagrangianForms lf = lagrangian_forms(q.potential, q.point);
      const PointGeometry pg = fundamental_forms(to_standard(q.potential, q.point).graph);
      worst = std::max({worst, std::abs(lf.S - pg.S) / (1.0 + lf.S), std::abs(lf.H_norm - pg.H_norm)});
    }
    return worst;
  });

  suite.run("lagrangian", "moduli_curvature_vs_hessian_metric", 1e-6, [&] {
    double worst = 0;
    for (const auto& q : quartics) {
      const Tensor4 a = moduli_curvature(q.potential, q.point).riemann;
      const Tensor4 b = hessian_metric_riemann(q.potential, q.point);
      worst = std::max(worst, max_abs_diff(a, b) / std::max(1e-300, b.max_abs()));
    }
    return worst;
  });

  suite.run("lagrangian", "curvature_symmetries", 1e-10, [&] {
    double worst = 0;
    for (const auto& q : quartics) worst = std::max(worst, curvature_symmetry_defect(moduli_curvature(q.potential, q.point).riemann));
    return worst;
  });

  suite.run("lagrangian", "log_det_derivative", 1e-10, [&] {
    double worst = 0;
    for (const auto& q : quartics) worst = std::max(worst, lagrangian_forms(q.potential, q.point).log_det_defect);
    return worst;
  });

  suite.run("solver", "ma_quadratic_recovery", 1e-10, [&] {
    const Lattice lat({0.0, 0.0}, {1.0, 1.0}, {1.0 / 16, 1.0 / 16});
    const Expr b = parse("0.5*(2*x1^2 + 0.5*x2^2)", 2);
    SolverOptions opt;
    opt.tol = 1e-12;
    const SolveResult r = solve_ma(lat, b, 1.0, opt);
    double worst = 0;
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (r.field.roles[i] == NodeRole::Active) worst = std::max(worst, std::abs(r.field.values[i] - evaluate(b, lat.position(i))));
    return worst;
  });

  suite.run("solver", "maximal_affine_recovery", 1e-12, [&] {
    const Lattice lat({-1.0, -1.0}, {1.0, 1.0}, {1.0 / 8, 1.0 / 8});
    const Expr b = parse("0.4*x1 - 0.3*x2 + 0.1", 2);
    const SolveResult r = solve_maximal(lat, b);
    double worst = 0;
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (r.field.roles[i] == NodeRole::Active) worst = std::max(worst, std::abs(r.field.values[i] - evaluate(b, lat.position(i))));
    return worst;
  });

  suite.run("bernstein", "affine_ratios_vanish", 0.0, [&] {
    const GraphMap flat = GraphMap::parse(2, {"0.3*x1 + 0.2*x2"});
    const Lattice lat({-1.0, -1.0}, {1.0, 1.0}, {1.0 / 16, 1.0 / 16});
    const BallReport br = estimate_report(flat, std::vector<double>{0.0, 0.0}, 0.5, lat);
    return br.ratio29 + br.ratio28;
  });

  suite.run("bernstein", "ratio29_scale_covariance", 1e-9, [&] {
    const GraphMap f1 = GraphMap::parse(2, {hyperboloid_text(2)});
    const GraphMap f2 = GraphMap::parse(2, {"2*sqrt(1 + (x1/2)^2 + (x2/2)^2)"});
    const double h = 1.0 / 16;
    const BallReport b1 = estimate_report(f1, std::vector<double>{0, 0}, 0.5, Lattice({-1, -1}, {1, 1}, {h, h}));
    const BallReport b2 = estimate_report(f2, std::vector<double>{0, 0}, 1.0, Lattice({-2, -2}, {2, 2}, {2 * h, 2 * h}));
    return std::abs(b1.ratio29 - b2.ratio29) / std::max(1e-300, b1.ratio29);
  });

  suite.run("bernstein", "completeness_gradient_bound", 1e-3, [&] {
    double worst = -1e300;
    const std::vector<std::vector<double>> dirs{{1.0, 0.0}, {0.6, 0.8}};
    for (const std::string& t : {std::string("0.6*x1"), hyperboloid_text(2, true)}) {
      const GraphMap g = GraphMap::parse(2, {t});
      for (const auto& rep : completeness_probe(g, dirs, 4.0, ProbeOptions{0.01, 1e6}))
        worst = std::max(worst, rep.b_emp - rep.ratio_sup);
    }
    return worst;
  });

  return out;
}

}  // namespace spacelike
