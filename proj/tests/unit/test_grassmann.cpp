#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spacelike/battery.hpp"
#include "spacelike/bernstein.hpp"
#include "spacelike/errors.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/grassmann.hpp"

using namespace spacelike;
using Eigen::MatrixXd;

namespace {

SpacelikePlane plane(const MatrixXd& a) { return SpacelikePlane::from_slope(a); }

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

/// Boost by rapidity t mixing spatial axis i with time axis s, acting on slopes.
MatrixXd boost_slope(const MatrixXd& a, int i, int s, double t) {
  const int n = static_cast<int>(a.rows()), m = static_cast<int>(a.cols());
  MatrixXd b = MatrixXd::Identity(m + n, m + n);
  b(i, i) = b(m + s, m + s) = std::cosh(t);
  b(i, m + s) = b(m + s, i) = std::sinh(t);
  MatrixXd e(m + n, m);
  e.topRows(m) = MatrixXd::Identity(m, m);
  e.bottomRows(n) = a;
  const MatrixXd img = b * e;
  return img.bottomRows(n) * img.topRows(m).inverse();
}

}  // namespace

TEST(Grassmann, RejectsNonSpacelikeSlopes) {
  EXPECT_THROW((void)plane(scalar(1.0)), NotSpacelikeError);
  EXPECT_THROW((void)plane(MatrixXd::Identity(2, 2) * 1.2), NotSpacelikeError);
  EXPECT_NEAR(plane(scalar(0.5)).sigma_max, 0.5, 1e-15);
}

TEST(Grassmann, DistanceToSlopeOneHalf) {
  EXPECT_NEAR(distance(plane(scalar(0.0)), plane(scalar(0.5))), std::atanh(0.5), 1e-15);
  EXPECT_NEAR(std::atanh(0.5), 0.549306144334054845, 1e-15);
}

TEST(Grassmann, MetricAxioms) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + trial % 3, n = 1 + (trial / 3) % 2;
    const auto p = plane(oracle::random_slope(rng, n, m, 0.8));
    const auto q = plane(oracle::random_slope(rng, n, m, 0.8));
    const auto r = plane(oracle::random_slope(rng, n, m, 0.8));
    EXPECT_LE(distance(p, p), 1e-12);
    EXPECT_NEAR(distance(p, q), distance(q, p), 1e-10);
    EXPECT_LE(distance(p, r), distance(p, q) + distance(q, r) + 1e-10);
  }
}

TEST(Grassmann, HyperbolicOracleForHyperplanes) {
  std::mt19937_64 rng(4);
  for (int m = 1; m <= 4; ++m)
    for (int trial = 0; trial < 25; ++trial) {
      const MatrixXd a = oracle::random_slope(rng, 1, m, 0.95), b = oracle::random_slope(rng, 1, m, 0.95);
      EXPECT_NEAR(distance(plane(a), plane(b)), oracle::hyperbolic_distance(a, b), 1e-8);
    }
}

TEST(Grassmann, PrincipalAngleOracle) {
  std::mt19937_64 rng(6);
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd a = oracle::random_slope(rng, n, m, 0.9), b = oracle::random_slope(rng, n, m, 0.9);
        EXPECT_NEAR(distance(plane(a), plane(b)), oracle::principal_angle_distance(a, b), 1e-9) << m << "x" << n;
      }
}

TEST(Grassmann, GeodesicShootingOracle) {
  std::mt19937_64 rng(8);
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 2; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        const MatrixXd a = oracle::random_slope(rng, n, m, 0.6), b = oracle::random_slope(rng, n, m, 0.6);
        const double d = distance(plane(a), plane(b));
        EXPECT_NEAR(d, oracle::shooting_distance(a, b), 1e-6 * std::max(1.0, d)) << m << "x" << n;
      }
}

TEST(Grassmann, BoostAdditivity) {
  // Boosts along one axis move the base plane along a geodesic.
  for (double s : {0.1, 0.7, 1.5})
    for (double t : {0.2, 1.1}) {
      const MatrixXd zero = MatrixXd::Zero(2, 3);
      const auto p0 = plane(zero);
      const auto p1 = plane(boost_slope(zero, 1, 0, s));
      const auto p2 = plane(boost_slope(zero, 1, 0, s + t));
      EXPECT_NEAR(distance(p0, p2), distance(p0, p1) + distance(p1, p2), 1e-9);
      EXPECT_NEAR(distance(p0, p2), s + t, 1e-9);
    }
}

TEST(Grassmann, IsometryInvariance) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> nd;
  auto rotation = [&](int k) {
    MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = nd(rng);
    Eigen::HouseholderQR<MatrixXd> qr(g);
    return MatrixXd(qr.householderQ());
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 3, n = 1 + (trial / 3) % 3;
    const MatrixXd a = oracle::random_slope(rng, n, m, 0.85), b = oracle::random_slope(rng, n, m, 0.85);
    const MatrixXd u = rotation(n), v = rotation(m);
    // (x, y) -> (V x, U y) maps the slope A to U A V^T.
    const double d0 = distance(plane(a), plane(b));
    const double d1 = distance(plane(u * a * v.transpose()), plane(u * b * v.transpose()));
    EXPECT_NEAR(d0, d1, 1e-12);
    // Boosts are isometries too, with a looser tolerance because they amplify roundoff.
    const double d2 = distance(plane(boost_slope(a, 0, n - 1, 0.4)), plane(boost_slope(b, 0, n - 1, 0.4)));
    EXPECT_NEAR(d0, d2, 1e-10);
  }
}

TEST(Grassmann, GaussMapOfAffineAndHyperboloid) {
  const GraphMap affine = GraphMap::parse(2, {"0.3*x1 - 0.2*x2 + 1", "0.1*x2"});
  const MatrixXd a0 = (MatrixXd(2, 2) << 0.3, -0.2, 0.0, 0.1).finished();
  for (double x : {-1.0, 0.5}) {
    EXPECT_LE((gauss_map(affine, std::vector<double>{x, 2 * x}).slope - a0).cwiseAbs().maxCoeff(), 1e-15);
  }
  const GraphMap hyp = GraphMap::parse(2, {hyperboloid_text(2)});
  const std::vector<double> x{0.8, -0.6};
  const MatrixXd s = gauss_map(hyp, x).slope;
  EXPECT_NEAR(s(0, 0), 0.8 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s(0, 1), -0.6 / std::sqrt(2.0), 1e-15);
}

TEST(Grassmann, PullbackOnAffineAndHyperboloid) {
  const GraphMap affine = GraphMap::parse(2, {"0.3*x1 - 0.2*x2"});
  const auto ra = pullback_check(affine, std::vector<double>{0.1, 0.2}, std::vector<double>{0.6, 0.8});
  EXPECT_EQ(ra.rate, 0.0);
  EXPECT_LE(ra.extrapolated, 1e-12);
  const GraphMap hyp = GraphMap::parse(3, {hyperboloid_text(3)});
  const auto rh = pullback_check(hyp, std::vector<double>{0, 0, 0}, std::vector<double>{0.6, 0.0, 0.8});
  EXPECT_NEAR(rh.rate, 1.0, 1e-12);
  EXPECT_LE(rh.error, 1e-6);
}

TEST(Grassmann, PullbackOneSidedQuotientsConvergeLinearly) {
  std::mt19937_64 rng(12);
  const GraphCase g = random_polynomial_graph(rng, 2, 2);
  const auto r = pullback_check(g.map, g.point, std::vector<double>{1.0, 0.0}, 1e-2, 5);
  // Error ratios of successive rungs approach 1/2 for a first-order quotient.
  std::vector<double> err;
  for (double q : r.quotients) err.push_back(std::abs(q - r.rate));
  for (std::size_t k = 2; k < err.size(); ++k) EXPECT_NEAR(err[k] / err[k - 1], 0.5, 0.05);
}

TEST(Grassmann, PullbackBatteryAndTrace) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 60; ++k) {
    const GraphCase g = random_polynomial_graph(rng, 1 + k % 3, 1 + (k / 3) % 2);
    std::vector<double> v(g.map.m());
    double norm = 0;
    for (double& c : v) norm += (c = nd(rng)) * c;
    for (double& c : v) c /= std::sqrt(norm);
    EXPECT_LE(pullback_check(g.map, g.point, v).error, 1e-3) << g.text;
    const double s = fundamental_forms(g.map, g.point).S;
    EXPECT_LE(std::abs(pullback_trace(g.map, g.point) - s), 1e-3 * (1 + s)) << g.text;
  }
}

TEST(Grassmann, MaxModulus) {
  const GraphMap affine = GraphMap::parse(2, {"0.3*x1 - 0.2*x2"});
  const auto ref = gauss_map(affine, std::vector<double>{0, 0});
  EXPECT_EQ(max_modulus(affine, {{1, 1}, {-2, 0.5}}, ref), 0.0);
  EXPECT_THROW((void)max_modulus(affine, {}, ref), Error);

  // The Gauss map of the hyperboloid is an isometry onto hyperbolic space: a
  // point at intrinsic distance a from the vertex has r = sinh a.
  const GraphMap hyp = GraphMap::parse(2, {hyperboloid_text(2)});
  const auto ref0 = gauss_map(hyp, std::vector<double>{0, 0});
  for (double a : {0.3, 1.0, 2.0}) {
    std::vector<std::vector<double>> sphere;
    for (int k = 0; k < 16; ++k) {
      const double th = 2 * M_PI * k / 16;
      sphere.push_back({std::sinh(a) * std::cos(th), std::sinh(a) * std::sin(th)});
    }
    EXPECT_NEAR(max_modulus(hyp, sphere, ref0), a, 1e-3);
  }
}
