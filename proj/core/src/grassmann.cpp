#include "spacelike/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spacelike/errors.hpp"
#include "spacelike/geometry.hpp"

namespace spacelike {

namespace {

double largest_singular(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

SpacelikePlane SpacelikePlane::from_slope(Eigen::MatrixXd slope) {
  SpacelikePlane p;
  p.sigma_max = largest_singular(slope);
  if (!(p.sigma_max < 1.0))
    throw NotSpacelikeError("plane is not space-like (largest slope singular value " +
                            std::to_string(p.sigma_max) + ")");
  p.slope = std::move(slope);
  return p;
}

SpacelikePlane gauss_map(const GraphMap& map, std::span<const double> x) {
  return SpacelikePlane::from_slope(map.jacobian(x));
}

// The boost fixing the orthogonal complements and sending [I; P] to the base
// plane acts on slopes as
//   Q -> (I - P P^T)^{-1/2} (Q - P) (I - P^T Q)^{-1} (I - P^T P)^{1/2}.
Eigen::MatrixXd transported_slope(const SpacelikePlane& p, const SpacelikePlane& q) {
  const Eigen::MatrixXd& a = p.slope;
  const Eigen::MatrixXd& b = q.slope;
  const int n = static_cast<int>(a.rows()), m = static_cast<int>(a.cols());
  if (b.rows() != n || b.cols() != m) throw Error("distance: planes have different shapes");
  const Eigen::MatrixXd im = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd in = Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> left(in - a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> right(im - a.transpose() * a);
  const Eigen::MatrixXd mid = (im - a.transpose() * b).partialPivLu().solve(im);
  return left.operatorInverseSqrt() * (b - a) * mid * right.operatorSqrt();
}

double distance(const SpacelikePlane& p, const SpacelikePlane& q) {
  const Eigen::MatrixXd t = transported_slope(p, q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t);
  double d2 = 0.0;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k);
    if (!(s < 1.0)) throw NotSpacelikeError("distance: normalization failed (transported slope not space-like)");
    d2 += std::atanh(s) * std::atanh(s);
  }
  return std::sqrt(d2);
}

PullbackReport pullback_check(const GraphMap& map, std::span<const double> x, std::span<const double> dir,
                              double eps0, int levels) {
  const int m = map.m();
  if (static_cast<int>(dir.size()) != m) throw Error("pullback_check: direction has wrong dimension");
  if (levels < 2) throw Error("pullback_check: need at least two ladder levels");
  const PointGeometry pg = fundamental_forms(map, x);

  PullbackReport rep;
  double r2 = 0.0;
  for (int s = 0; s < map.n(); ++s)
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      for (int j = 0; j < m; ++j) v += pg.h(s, i, j) * dir[j];
      r2 += v * v;
    }
  rep.rate = std::sqrt(r2);

  // Coordinate velocity of the frame vector sum_a v_a e_a.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (int a = 0; a < m; ++a) w += dir[a] * pg.frames.tangent_coeffs.row(a).transpose();

  const SpacelikePlane p0 = gauss_map(map, x);
  std::vector<double> y(x.begin(), x.end()), y_back(x.begin(), x.end());
  double eps = eps0 / std::max(1.0, std::sqrt(pg.S));
  for (int l = 0; l < levels; ++l, eps *= 0.5) {
    for (int i = 0; i < m; ++i) {
      y[i] = x[i] + eps * w(i);
      y_back[i] = x[i] - eps * w(i);
    }
    SpacelikePlane p1, pm;
    try {
      p1 = gauss_map(map, y);
      pm = gauss_map(map, y_back);
    } catch (const NotSpacelikeError&) {
      throw NotSpacelikeError("pullback_check: eps ladder leaves the space-like region");
    }
    rep.eps.push_back(eps);
    rep.quotients.push_back(distance(p0, p1) / eps);
    rep.central.push_back(distance(pm, p1) / (2.0 * eps));
  }
  const std::size_t k = rep.central.size();
  rep.extrapolated = (4.0 * rep.central[k - 1] - rep.central[k - 2]) / 3.0;
  rep.error = std::abs(rep.extrapolated - rep.rate) / std::max(1.0, rep.rate);
  return rep;
}

double pullback_trace(const GraphMap& map, std::span<const double> x, double eps0, int levels) {
  const int m = map.m();
  std::vector<double> dir(static_cast<std::size_t>(m), 0.0);
  double trace = 0.0;
  for (int a = 0; a < m; ++a) {
    std::fill(dir.begin(), dir.end(), 0.0);
    dir[a] = 1.0;
    const PullbackReport r = pullback_check(map, x, dir, eps0, levels);
    trace += r.extrapolated * r.extrapolated;
  }
  return trace;
}

double max_modulus(const GraphMap& map, const std::vector<std::vector<double>>& samples,
                   const SpacelikePlane& ref) {
  if (samples.empty()) throw Error("max_modulus: empty sample list");
  double mu = 0.0;
  for (const auto& x : samples) mu = std::max(mu, distance(ref, gauss_map(map, x)));
  return mu;
}

}  // namespace spacelike
