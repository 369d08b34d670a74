#include "spacelike/bernstein.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <thread>

#include "spacelike/errors.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/grassmann.hpp"
#include "spacelike/intrinsic.hpp"

namespace spacelike {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd metric_at(const GraphMap& map, std::span<const double> x) {
  const Eigen::MatrixXd j = map.jacobian(x);
  return Eigen::MatrixXd::Identity(map.m(), map.m()) - j.transpose() * j;
}

double g_length(const Eigen::MatrixXd& g, const Eigen::VectorXd& d) { return std::sqrt(std::max(0.0, d.dot(g * d))); }

// min over t in [0, 1] of ra + t (rb - ra) + |d0 - t e|_g, given the
// quadratic-form values a = <e,e>_g, b = <e,d0>_g, c = <d0,d0>_g.
double segment_update(double ra, double rb, double a, double b, double c) {
  const double delta = rb - ra;
  auto f = [&](double t) { return ra + t * delta + std::sqrt(std::max(0.0, a * t * t - 2 * b * t + c)); };
  double best = std::min(f(0.0), f(1.0));
  if (a > delta * delta) {
    const double k = std::max(0.0, c - b * b / a);
    const double s = -std::copysign(std::sqrt(delta * delta * k * a / (a - delta * delta)), delta);
    const double t = (s + b) / a;
    if (t > 0.0 && t < 1.0) best = std::min(best, f(t));
  }
  return best;
}

double quad(const Eigen::MatrixXd& g, const std::vector<int>& u, const std::vector<int>& v, const double* h) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) s += g(i, j) * u[i] * h[i] * v[j] * h[j];
  return s;
}

}  // namespace

RadiusField geodesic_radius(const GraphMap& map, const Lattice& lattice, std::span<const double> x0) {
  const int m = map.m();
  if (lattice.dim() != m) throw LatticeError("geodesic_radius: lattice dimension differs from m");
  const std::size_t n = lattice.size();

  std::vector<Eigen::MatrixXd> g(n);
  std::vector<Eigen::VectorXd> pos(n);
  for (std::size_t node = 0; node < n; ++node) {
    if (!lattice.in_mask(node)) continue;
    const auto x = lattice.position(node);
    pos[node] = Eigen::Map<const Eigen::VectorXd>(x.data(), m);
    g[node] = metric_at(map, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g[node], Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0))
      throw NotSpacelikeError("geodesic_radius: lattice node is not space-like");
  }

  RadiusField rf;
  rf.lattice = lattice;
  rf.source = lattice.nearest(x0);
  if (!lattice.in_mask(rf.source)) throw LatticeError("geodesic_radius: center lies outside the mask");
  rf.r.assign(n, kInf);
  rf.r[rf.source] = 0.0;

  const auto offsets = lattice.neighbor_offsets();
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0.0, rf.source);
  std::vector<double> mid(static_cast<std::size_t>(m));
  while (!pq.empty()) {
    const auto [d, node] = pq.top();
    pq.pop();
    if (d > rf.r[node]) continue;
    for (const auto& off : offsets) {
      const auto nb = lattice.neighbor(node, off);
      if (!nb || !lattice.in_mask(*nb)) continue;
      const Eigen::VectorXd step = pos[*nb] - pos[node];
      for (int i = 0; i < m; ++i) mid[i] = pos[node](i) + 0.5 * step(i);
      const double nd = d + g_length(metric_at(map, mid), step);
      if (nd < rf.r[*nb]) {
        rf.r[*nb] = nd;
        pq.emplace(nd, *nb);
      }
    }
  }
  for (std::size_t node = 0; node < n; ++node)
    if (lattice.in_mask(node) && !std::isfinite(rf.r[node]))
      throw LatticeError("geodesic_radius: lattice is disconnected");

  // Pairs of neighbor offsets one unit step apart span the update segments.
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < offsets.size(); ++i)
    for (std::size_t j = i + 1; j < offsets.size(); ++j) {
      int l1 = 0;
      for (int d = 0; d < m; ++d) l1 += std::abs(offsets[i][d] - offsets[j][d]);
      if (l1 == 1) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }

  // Segment endpoints a = x + o_i, b = x + o_j, so d0 = -o_i and e = o_j - o_i.
  std::vector<double> hs(static_cast<std::size_t>(m));
  for (int d = 0; d < m; ++d) hs[d] = lattice.spacing(d);
  struct PairVec {
    std::vector<int> d0, e;
  };
  std::vector<PairVec> pv;
  for (const auto& [i, j] : pairs) {
    PairVec p{std::vector<int>(m), std::vector<int>(m)};
    for (int d = 0; d < m; ++d) {
      p.d0[d] = -offsets[i][d];
      p.e[d] = offsets[j][d] - offsets[i][d];
    }
    pv.push_back(std::move(p));
  }

  // Fast-sweeping: cycle through the 2^m axis orientations.
  std::vector<std::optional<std::size_t>> nbs(offsets.size());
  std::vector<int> idx(static_cast<std::size_t>(m));
  int quiet = 0;
  for (int sweep = 0; sweep < 4000 && quiet < (1 << m); ++sweep) {
    const int flips = sweep % (1 << m);
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t rem = k;
      for (int d = m; d-- > 0;) {
        const int c = lattice.count(d);
        const int i = static_cast<int>(rem % static_cast<std::size_t>(c));
        rem /= static_cast<std::size_t>(c);
        idx[d] = (flips >> d) & 1 ? c - 1 - i : i;
      }
      const std::size_t node = lattice.linear(idx);
      if (node == rf.source || !lattice.in_mask(node)) continue;
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        nbs[o] = lattice.neighbor(node, offsets[o]);
        if (nbs[o] && !lattice.in_mask(*nbs[o])) nbs[o].reset();
      }
      double best = rf.r[node];
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [i, j] = pairs[q];
        if (!nbs[i] || !nbs[j]) continue;
        const std::size_t a = *nbs[i], b = *nbs[j];
        if (std::min(rf.r[a], rf.r[b]) >= best) continue;
        double qa = 0, qb = 0, qc = 0;
        for (const std::size_t w : {node, a, b}) {
          qa += quad(g[w], pv[q].e, pv[q].e, hs.data());
          qb += quad(g[w], pv[q].e, pv[q].d0, hs.data());
          qc += quad(g[w], pv[q].d0, pv[q].d0, hs.data());
        }
        best = std::min(best, segment_update(rf.r[a], rf.r[b], qa / 3, qb / 3, qc / 3));
      }
      change = std::max(change, rf.r[node] - best);
      rf.r[node] = best;
    }
    quiet = change < 1e-13 ? quiet + 1 : 0;
  }
  return rf;
}

BallReport estimate_report(const GraphMap& map, std::span<const double> x0, double a, const Lattice& lattice) {
  if (!(a > 0.0)) throw Error("estimate_report: radius must be positive");
  const int m = map.m(), n = map.n();
  const RadiusField rf = geodesic_radius(map, lattice, x0);
  const auto c = lattice.position(rf.source);
  const SpacelikePlane ref = gauss_map(map, c);
  const auto offsets = lattice.neighbor_offsets();

  BallReport rep;
  rep.center = c;
  rep.a = a;
  for (std::size_t node = 0; node < lattice.size(); ++node) {
    if (!(rf.r[node] <= a)) continue;
    bool inside = !lattice.on_box_boundary(node);
    for (const auto& off : offsets) {
      if (!inside) break;
      inside = lattice.in_mask(*lattice.neighbor(node, off));
    }
    if (!inside) throw LatticeError("estimate_report: geodesic ball exceeds the lattice");
    const auto x = lattice.position(node);
    const PointGeometry pg = fundamental_forms(map, x);
    BallSample s;
    s.node = node;
    s.r = rf.r[node];
    s.S = pg.S;
    s.H_norm = pg.H_norm;
    s.mu = distance(ref, gauss_map(map, x));
    rep.H_bar = std::max(rep.H_bar, s.H_norm);
    rep.mu_max = std::max(rep.mu_max, s.mu);
    rep.samples.push_back(s);
  }

  const double hb = rep.H_bar, mu = rep.mu_max;
  const double den29 = m * m * n * n * hb * hb * a * a * a * a + m * n * (m - 1) * hb * a * a * a + 2.0 * n * (m + 4) * a * a;
  const double q = 2.0 + mu * mu / n;
  const double lin = 8.0 * mu * a + m * a * a * hb;
  const double den28 = lin * lin * std::pow(mu, 4) / (q * q) + (2.0 * (m + 4) * a * a + m * (m - 1) * hb * a * a * a) * mu * mu / q;
  for (const auto& s : rep.samples) {
    const double num = s.S * (a * a - s.r * s.r) * (a * a - s.r * s.r);
    rep.ratio29 = std::max(rep.ratio29, num / den29);
    // 0/0 is read as 0: a flat ball has no curvature to bound.
    const double r28 = num == 0.0 ? 0.0 : (den28 > 0.0 ? num / den28 : kInf);
    rep.ratio28 = std::max(rep.ratio28, r28);
  }
  return rep;
}

DecayReport decay_scan(const Expr& boundary, const std::vector<double>& radii, const DecayOptions& opt) {
  const int m = opt.m;
  std::vector<double> center = opt.center.empty() ? std::vector<double>(static_cast<std::size_t>(m), 0.0) : opt.center;
  if (static_cast<int>(center.size()) != m) throw Error("decay_scan: center has wrong dimension");
  if (boundary.max_variable() > m) throw Error("decay_scan: boundary uses variables beyond m");

  DecayReport rep;
  rep.rows.resize(radii.size());
  auto run = [&](std::size_t i) {
    DecayRow& row = rep.rows[i];
    row.a = radii[i];
    row.h = opt.spacing > 0.0 ? opt.spacing : radii[i] / opt.nodes_per_radius;
    try {
      const int k = static_cast<int>(std::ceil(row.a / row.h)) + 2;
      std::vector<double> lo(center), hi(center), sp(static_cast<std::size_t>(m), row.h);
      for (int d = 0; d < m; ++d) {
        lo[d] -= k * row.h;
        hi[d] += k * row.h;
      }
      const Lattice lat = Lattice(lo, hi, sp).with_mask(Shell{center, 0.0, row.a});
      const SolveResult res = solve_maximal(lat, boundary, opt.solver);
      const LocalGraph lg = field_local(res.field, lat.nearest(center));
      row.S_center = fundamental_forms(lg).S;
      row.iterations = res.iterations;
      row.residual = res.residual;
      row.ok = true;
      row.status = "ok";
    } catch (const Error& e) {
      row.ok = false;
      row.status = e.what();
    }
  };

  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(radii.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < radii.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < radii.size(); i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> lx, ly;
  bool any_ok = false;
  for (const auto& row : rep.rows) {
    if (!row.ok) continue;
    any_ok = true;
    if (row.S_center > opt.zero_floor) {
      lx.push_back(std::log(row.a));
      ly.push_back(std::log(row.S_center));
    }
  }
  rep.exact_zero = any_ok && lx.empty();
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

std::vector<ProbeReport> completeness_probe(const GraphMap& map, const std::vector<std::vector<double>>& directions,
                                            double T, const ProbeOptions& opt) {
  const int m = map.m();
  if (!(T > 0.0) || !(opt.dt > 0.0)) throw Error("completeness_probe: T and dt must be positive");
  const std::vector<double> origin(static_cast<std::size_t>(m), 0.0);
  (void)pseudo_distance(map, origin);  // base-point check
  const Frames fr0 = adapted_frames(map, origin);

  auto accel = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    const std::vector<double> xs(x.data(), x.data() + m);
    const Tensor3 gam = christoffel(graph_metric_derivatives(map.local(xs)));
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(k) -= gam(k, i, j) * v(i) * v(j);
    return a;
  };

  std::vector<ProbeReport> out;
  const int steps = static_cast<int>(std::ceil(T / opt.dt));
  const double dt = T / steps;
  for (const auto& dir : directions) {
    if (static_cast<int>(dir.size()) != m) throw Error("completeness_probe: direction has wrong dimension");
    ProbeReport rep;
    rep.direction = dir;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < m; ++a) v += dir[a] * fr0.tangent_coeffs.row(a).transpose();
    for (int s = 0; s <= steps; ++s) {
      const double t = s * dt;
      const std::vector<double> xs(x.data(), x.data() + m);
      const PseudoDistancePoint pd = pseudo_distance(map.local(xs));
      rep.samples.push_back({t, pd.z, pd.ratio});
      rep.ratio_sup = std::max(rep.ratio_sup, pd.ratio);
      if (t > 0.0) rep.b_emp = std::max(rep.b_emp, std::log(pd.z + 1.0) / t);
      if (s == steps) break;
      const Eigen::VectorXd k1x = v, k1v = accel(x, v);
      const Eigen::VectorXd k2x = v + 0.5 * dt * k1v, k2v = accel(x + 0.5 * dt * k1x, k2x);
      const Eigen::VectorXd k3x = v + 0.5 * dt * k2v, k3v = accel(x + 0.5 * dt * k2x, k3x);
      const Eigen::VectorXd k4x = v + dt * k3v, k4v = accel(x + dt * k3x, k4x);
      x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
      v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > opt.region)
        throw Error("completeness_probe: geodesic left the sampled region before T");
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace spacelike
