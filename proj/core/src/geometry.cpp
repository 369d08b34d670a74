#include "spacelike/geometry.hpp"

#include <cmath>
#include <optional>

#include "spacelike/errors.hpp"
#include "spacelike/intrinsic.hpp"
#include "spacelike/jet.hpp"

namespace spacelike {

namespace {

constexpr double kPivotTol = 1e-14;

using std::sqrt;

// In-place lower Cholesky factor of a row-major n x n symmetric matrix.
template <class T>
bool cholesky_lower(std::vector<T>& a, int n) {
  for (int j = 0; j < n; ++j) {
    T d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(value_of(d) > kPivotTol)) return false;
    const T ljj = sqrt(d);
    a[j * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      T s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
    for (int i = 0; i < j; ++i) a[i * n + j] = T(0.0);
  }
  return true;
}

template <class T>
std::vector<T> lower_inverse(const std::vector<T>& l, int n) {
  std::vector<T> x(static_cast<std::size_t>(n * n), T(0.0));
  for (int i = 0; i < n; ++i) {
    x[i * n + i] = T(1.0) / l[i * n + i];
    for (int j = 0; j < i; ++j) {
      T s(0.0);
      for (int k = j; k < i; ++k) s += l[i * n + k] * x[k * n + j];
      x[i * n + j] = -s / l[i * n + i];
    }
  }
  return x;
}

template <class T>
struct FrameData {
  std::vector<T> tc;       // m x m
  std::vector<T> nc;       // n x n
  std::vector<T> tangent;  // m x (m+n)
  std::vector<T> normal;   // n x (m+n)
  std::vector<T> h;        // n x m x m
};

// jac: n x m, second: n x m x m (row-major).
template <class T>
FrameData<T> build_frame_data(int m, int n, const std::vector<T>& jac, const std::vector<T>& second) {
  const int w = m + n;
  FrameData<T> fd;

  std::vector<T> g(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      T s(i == j ? 1.0 : 0.0);
      for (int t = 0; t < n; ++t) s -= jac[t * m + i] * jac[t * m + j];
      g[i * m + j] = s;
    }
  if (!cholesky_lower(g, m)) throw NotSpacelikeError("induced metric is not positive definite");
  fd.tc = lower_inverse(g, m);

  std::vector<T> gn(static_cast<std::size_t>(n * n));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      T v(s == t ? 1.0 : 0.0);
      for (int i = 0; i < m; ++i) v -= jac[s * m + i] * jac[t * m + i];
      gn[s * n + t] = v;
    }
  if (!cholesky_lower(gn, n)) throw NotSpacelikeError("normal Gram matrix is not negative definite");
  fd.nc = lower_inverse(gn, n);

  fd.tangent.assign(static_cast<std::size_t>(m * w), T(0.0));
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < m; ++c) fd.tangent[a * w + c] = fd.tc[a * m + c];
    for (int s = 0; s < n; ++s) {
      T v(0.0);
      for (int i = 0; i < m; ++i) v += fd.tc[a * m + i] * jac[s * m + i];
      fd.tangent[a * w + m + s] = v;
    }
  }
  fd.normal.assign(static_cast<std::size_t>(n * w), T(0.0));
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < m; ++c) {
      T v(0.0);
      for (int t = 0; t < n; ++t) v += fd.nc[s * n + t] * jac[t * m + c];
      fd.normal[s * w + c] = v;
    }
    for (int t = 0; t < n; ++t) fd.normal[s * w + m + t] = fd.nc[s * n + t];
  }

  // <(0, f_ij), e_s> = -sum_t nc_st f^t_ij, then transform both slots to the frame.
  std::vector<T> p(static_cast<std::size_t>(n * m * m), T(0.0));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        T v(0.0);
        for (int t = 0; t < n; ++t) v -= fd.nc[s * n + t] * second[(t * m + i) * m + j];
        p[(s * m + i) * m + j] = v;
      }
  std::vector<T> q(static_cast<std::size_t>(n * m * m), T(0.0));
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < m; ++j) {
        T v(0.0);
        for (int i = 0; i <= a; ++i) v += fd.tc[a * m + i] * p[(s * m + i) * m + j];
        q[(s * m + a) * m + j] = v;
      }
  fd.h.assign(static_cast<std::size_t>(n * m * m), T(0.0));
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b <= a; ++b) {
        T v(0.0);
        for (int j = 0; j <= b; ++j) v += fd.tc[b * m + j] * q[(s * m + a) * m + j];
        fd.h[(s * m + a) * m + b] = v;
        fd.h[(s * m + b) * m + a] = v;
      }
  return fd;
}

FrameData<double> frame_data(const LocalGraph& lg) {
  const int m = lg.m, n = lg.n;
  std::vector<double> jac(static_cast<std::size_t>(n * m)), second(static_cast<std::size_t>(n * m * m));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i) {
      jac[s * m + i] = lg.jac(s, i);
      for (int j = 0; j < m; ++j) second[(s * m + i) * m + j] = lg.second(s, i, j);
    }
  return build_frame_data(m, n, jac, second);
}

Frames to_frames(int m, int n, const FrameData<double>& fd) {
  const int w = m + n;
  Frames f;
  f.tangent.resize(w, m);
  f.normal.resize(w, n);
  f.tangent_coeffs.resize(m, m);
  f.normal_coeffs.resize(n, n);
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < w; ++c) f.tangent(c, a) = fd.tangent[a * w + c];
    for (int i = 0; i < m; ++i) f.tangent_coeffs(a, i) = fd.tc[a * m + i];
  }
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < w; ++c) f.normal(c, s) = fd.normal[s * w + c];
    for (int t = 0; t < n; ++t) f.normal_coeffs(s, t) = fd.nc[s * n + t];
  }
  return f;
}

void require_spacelike(const MetricPoint& mp) {
  if (!mp.spacelike)
    throw NotSpacelikeError("point is not space-like (min metric eigenvalue " +
                            std::to_string(mp.min_eig) + ")");
}

}  // namespace

double ambient_inner(int m, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.head(m).dot(v.head(m)) - u.tail(u.size() - m).dot(v.tail(v.size() - m));
}

MetricPoint induced_metric(const LocalGraph& lg) {
  MetricPoint mp;
  mp.g = Eigen::MatrixXd::Identity(lg.m, lg.m) - lg.jac.transpose() * lg.jac;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mp.g, Eigen::EigenvaluesOnly);
  mp.min_eig = es.eigenvalues().minCoeff();
  mp.det_g = mp.g.determinant();
  mp.spacelike = mp.min_eig > 0.0;
  if (mp.spacelike) mp.g_inv = mp.g.inverse();
  return mp;
}

Frames adapted_frames(const LocalGraph& lg) {
  require_spacelike(induced_metric(lg));
  return to_frames(lg.m, lg.n, frame_data(lg));
}

PointGeometry fundamental_forms(const LocalGraph& lg) {
  const int m = lg.m, n = lg.n;
  PointGeometry pg;
  pg.m = m;
  pg.n = n;
  pg.metric = induced_metric(lg);
  require_spacelike(pg.metric);
  const FrameData<double> fd = frame_data(lg);
  pg.frames = to_frames(m, n, fd);
  pg.h = Tensor3(n, m, m);
  pg.H = Eigen::VectorXd::Zero(n);
  pg.S = 0.0;
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double v = fd.h[(s * m + i) * m + j];
        pg.h(s, i, j) = v;
        pg.S += v * v;
        if (i == j) pg.H(s) += v / m;
      }
  pg.H_norm = pg.H.norm();
  return pg;
}

void fill_curvature(PointGeometry& pg) {
  const int m = pg.m, n = pg.n;
  const Tensor3& h = pg.h;
  pg.riemann = Tensor4(m, m, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0.0;
          for (int s = 0; s < n; ++s) v -= h(s, i, k) * h(s, j, l) - h(s, i, l) * h(s, j, k);
          pg.riemann(i, j, k, l) = v;
        }
  pg.ricci = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      for (int s = 0; s < n; ++s)
        for (int k = 0; k < m; ++k) v -= h(s, k, k) * h(s, i, j) - h(s, k, i) * h(s, k, j);
      pg.ricci(i, j) = v;
    }
  pg.normal_curv = Tensor4(n, n, m, m);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double v = 0.0;
          for (int k = 0; k < m; ++k) v += h(s, k, i) * h(t, k, j) - h(s, k, j) * h(t, k, i);
          pg.normal_curv(s, t, i, j) = v;
        }
}

PointGeometry curvature(const LocalGraph& lg) {
  PointGeometry pg = fundamental_forms(lg);
  fill_curvature(pg);
  return pg;
}

Eigen::VectorXd extremal_residual(const LocalGraph& lg) {
  const MetricPoint mp = induced_metric(lg);
  require_spacelike(mp);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(lg.n);
  for (int s = 0; s < lg.n; ++s)
    for (int i = 0; i < lg.m; ++i)
      for (int j = 0; j < lg.m; ++j) r(s) += mp.g_inv(i, j) * lg.second(s, i, j);
  return r;
}

double ricci_bound_margin(const PointGeometry& pg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pg.ricci, Eigen::EigenvaluesOnly);
  const double bound = -0.25 * pg.m * pg.m * pg.H_norm * pg.H_norm;
  return es.eigenvalues().minCoeff() - bound;
}

CovariantH covariant_h(const LocalGraph& lg) {
  if (!lg.third) throw Error("covariant_h: third derivatives are required");
  const int m = lg.m, n = lg.n, w = m + n;
  require_spacelike(induced_metric(lg));
  using D = Dual<kMaxJetDim>;
  const Tensor4& f3 = *lg.third;

  // Seed every input with its coordinate derivatives: d_p f^s_i = f^s_ip,
  // d_p f^s_ij = f^s_ijp. Forward mode then carries d_p through the frames.
  std::vector<D> jac(static_cast<std::size_t>(n * m)), second(static_cast<std::size_t>(n * m * m));
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i) {
      D v(lg.jac(s, i), m);
      for (int p = 0; p < m; ++p) v.d(p) = lg.second(s, i, p);
      jac[s * m + i] = v;
      for (int j = 0; j < m; ++j) {
        D u(lg.second(s, i, j), m);
        for (int p = 0; p < m; ++p) u.d(p) = f3(s, i, j, p);
        second[(s * m + i) * m + j] = u;
      }
    }
  const FrameData<D> fd = build_frame_data(m, n, jac, second);

  auto tc = [&](int a, int i) { return fd.tc[a * m + i].value(); };
  // <d_p e_A, e_B> for frame vectors stored as rows of width w.
  auto dinner = [&](const std::vector<D>& rows_a, int a, const std::vector<D>& rows_b, int b, int p) {
    double v = 0.0;
    for (int c = 0; c < w; ++c) {
      const double prod = rows_a[a * w + c].d(p) * rows_b[b * w + c].value();
      v += c < m ? prod : -prod;
    }
    return v;
  };

  // Connection coefficients along e_k: c_kil = <D_{e_k} e_i, e_l>,
  // n_kst = -<D_{e_k} e_s, e_t>.
  Tensor3 conn_t(m, m, m), conn_n(m, n, n);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) {
        double v = 0.0;
        for (int p = 0; p < m; ++p) v += tc(k, p) * dinner(fd.tangent, i, fd.tangent, l, p);
        conn_t(k, i, l) = v;
      }
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        double v = 0.0;
        for (int p = 0; p < m; ++p) v -= tc(k, p) * dinner(fd.normal, s, fd.normal, t, p);
        conn_n(k, s, t) = v;
      }
  }

  auto h = [&](int s, int i, int j) { return fd.h[(s * m + i) * m + j].value(); };
  CovariantH out;
  out.h_cov = Tensor4(n, m, m, m);
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          double v = 0.0;
          for (int p = 0; p < m; ++p) v += tc(k, p) * fd.h[(s * m + i) * m + j].d(p);
          for (int l = 0; l < m; ++l) v -= conn_t(k, i, l) * h(s, l, j) + conn_t(k, j, l) * h(s, i, l);
          for (int t = 0; t < n; ++t) v -= conn_n(k, s, t) * h(t, i, j);
          out.h_cov(s, i, j, k) = v;
        }
  out.DH = Eigen::MatrixXd::Zero(n, m);
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          out.codazzi_asymmetry =
              std::max(out.codazzi_asymmetry, std::abs(out.h_cov(s, i, j, k) - out.h_cov(s, i, k, j)));
          if (i == j) out.DH(s, k) += out.h_cov(s, i, i, k) / m;
        }
  return out;
}

PseudoDistancePoint pseudo_distance(const LocalGraph& lg) {
  const PointGeometry pg = fundamental_forms(lg);
  const int m = lg.m, n = lg.n;
  const Eigen::VectorXd X = lg.position();
  PseudoDistancePoint pd;
  pd.z = ambient_inner(m, X, X);
  pd.grad_z.resize(m);
  for (int a = 0; a < m; ++a) pd.grad_z(a) = 2.0 * ambient_inner(m, X, pg.frames.tangent.col(a));
  Eigen::VectorXd xs(n);
  for (int s = 0; s < n; ++s) xs(s) = ambient_inner(m, X, pg.frames.normal.col(s));
  pd.hess_z = 2.0 * Eigen::MatrixXd::Identity(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < n; ++s) pd.hess_z(a, b) -= 2.0 * xs(s) * pg.h(s, a, b);
  pd.lap_z = 2.0 * m - 2.0 * m * xs.dot(pg.H);
  pd.grad_norm = pd.grad_z.norm();
  pd.ratio = pd.grad_norm / (pd.z + 1.0);
  return pd;
}

MetricPoint induced_metric(const GraphMap& map, std::span<const double> x) {
  LocalGraph lg;
  lg.m = map.m();
  lg.n = map.n();
  lg.jac = map.jacobian(x);
  return induced_metric(lg);
}

Frames adapted_frames(const GraphMap& map, std::span<const double> x) { return adapted_frames(map.local(x)); }
PointGeometry fundamental_forms(const GraphMap& map, std::span<const double> x) {
  return fundamental_forms(map.local(x));
}
PointGeometry curvature(const GraphMap& map, std::span<const double> x) { return curvature(map.local(x)); }
Eigen::VectorXd extremal_residual(const GraphMap& map, std::span<const double> x) {
  return extremal_residual(map.local(x));
}
double ricci_bound_check(const GraphMap& map, std::span<const double> x) {
  return ricci_bound_margin(curvature(map, x));
}
CovariantH covariant_h(const GraphMap& map, std::span<const double> x) { return covariant_h(map.local(x)); }

PseudoDistancePoint pseudo_distance(const GraphMap& map, std::span<const double> x) {
  if (!map.has_offset()) {
    const std::vector<double> origin(static_cast<std::size_t>(map.m()), 0.0);
    const Eigen::VectorXd y0 = map.value(origin);
    if (y0.lpNorm<Eigen::Infinity>() > 1e-14)
      throw BasePointError("X(0) != 0: configure a base-point offset before pseudo-distance work");
  }
  return pseudo_distance(map.local(x));
}

SimonsReport simons_report(const GraphMap& map, const Lattice& lattice) {
  const int m = map.m(), n = map.n();
  if (lattice.dim() != m) throw LatticeError("simons_report: lattice dimension differs from m");
  for (int d = 0; d < m; ++d)
    if (lattice.count(d) < 5) throw LatticeError("simons_report: lattice too coarse (need >= 5 points per axis)");

  std::vector<std::optional<double>> s_cache(lattice.size());
  auto s_at = [&](std::size_t node) {
    if (!s_cache[node]) s_cache[node] = fundamental_forms(map, lattice.position(node)).S;
    return *s_cache[node];
  };
  const auto offsets = lattice.neighbor_offsets();
  std::vector<int> off(static_cast<std::size_t>(m), 0);
  auto shifted = [&](std::size_t node, int d1, int s1, int d2, int s2) {
    std::fill(off.begin(), off.end(), 0);
    off[d1] += s1;
    if (d2 >= 0) off[d2] += s2;
    return *lattice.neighbor(node, off);
  };

  SimonsReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < lattice.size(); ++node) {
    if (lattice.on_box_boundary(node) || !lattice.in_mask(node)) continue;
    bool interior = true;
    for (const auto& o : offsets) interior = interior && lattice.in_mask(*lattice.neighbor(node, o));
    if (!interior) continue;

    const auto x = lattice.position(node);
    const LocalGraph lg = map.local(x);
    const PointGeometry pg = fundamental_forms(lg);
    const CovariantH ch = covariant_h(lg);
    const MetricDerivatives md = graph_metric_derivatives(lg);
    const Tensor3 gam = christoffel(md);

    const double s0 = pg.S;
    s_cache[node] = s0;
    Eigen::VectorXd ds(m);
    Eigen::MatrixXd dds(m, m);
    for (int i = 0; i < m; ++i) {
      const double hi = lattice.spacing(i);
      const double sp = s_at(shifted(node, i, 1, -1, 0)), sm = s_at(shifted(node, i, -1, -1, 0));
      ds(i) = (sp - sm) / (2 * hi);
      dds(i, i) = (sp - 2 * s0 + sm) / (hi * hi);
      for (int j = i + 1; j < m; ++j) {
        const double hj = lattice.spacing(j);
        const double v = (s_at(shifted(node, i, 1, j, 1)) - s_at(shifted(node, i, 1, j, -1)) -
                          s_at(shifted(node, i, -1, j, 1)) + s_at(shifted(node, i, -1, j, -1))) /
                         (4 * hi * hj);
        dds(i, j) = dds(j, i) = v;
      }
    }
    double lap = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double v = dds(i, j);
        for (int k = 0; k < m; ++k) v -= gam(k, i, j) * ds(k);
        lap += pg.metric.g_inv(i, j) * v;
      }
    double grad_h2 = 0.0;
    for (double v : ch.h_cov.data()) grad_h2 += v * v;

    SimonsPoint sp;
    sp.node = node;
    sp.half_lap_S = 0.5 * lap;
    sp.rhs = grad_h2 - m * pg.H_norm * std::pow(pg.S, 1.5) + pg.S * pg.S / n;
    sp.slack = sp.half_lap_S - sp.rhs;
    sp.dh_max = ch.DH.lpNorm<Eigen::Infinity>();
    rep.min_slack = std::min(rep.min_slack, sp.slack);
    rep.max_dh = std::max(rep.max_dh, sp.dh_max);
    rep.points.push_back(sp);
  }
  if (rep.points.empty()) throw LatticeError("simons_report: no interior lattice nodes");
  return rep;
}

}  // namespace spacelike
