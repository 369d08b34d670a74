#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spacelike/battery.hpp"
#include "spacelike/geometry.hpp"
#include "spacelike/jet.hpp"
#include "spacelike/lagrangian.hpp"

using namespace spacelike;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<PotentialCase> quartics(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PotentialCase> out;
  for (int k = 0; k < count; ++k) out.push_back(random_convex_quartic(rng, 2));
  return out;
}

const std::vector<double> kOne{1.0};

}  // namespace

TEST(Lagrangian, GradientGraphMetric) {
  const Potential half = Potential::parse(3, "0.5*(x1^2 + x2^2 + x3^2)");
  const GradientPoint gp = gradient_graph(half, std::vector<double>{0.3, -1, 2});
  EXPECT_TRUE(gp.g.isApprox(MatrixXd::Identity(3, 3)));
  EXPECT_TRUE(gp.y.isApprox(Eigen::Vector3d(0.3, -1, 2)));
  EXPECT_NEAR(gradient_graph(Potential::parse(1, "x1^4"), kOne).g(0, 0), 12.0, 1e-14);
  for (const auto& q : quartics(5, 1)) {
    const GradientPoint p = gradient_graph(q.potential, q.point);
    const Jet3 j = evaluate_jet(q.potential.F, q.point);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_EQ(p.g(a, b), j.hess(a, b));
  }
}

TEST(Lagrangian, QuadraticsAreFlat) {
  const Potential p = Potential::parse(2, "0.5*(2*x1^2 + x2^2) + 0.3*x1*x2 - x1 + 4");
  const auto x = std::vector<double>{0.7, -0.2};
  const LagrangianForms lf = lagrangian_forms(p, x);
  EXPECT_EQ(lf.H.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(lf.H_norm, 0.0);
  EXPECT_EQ(lf.S, 0.0);
  EXPECT_EQ(lf.B.max_abs(), 0.0);
  const ModuliCurvature mc = moduli_curvature(p, x);
  EXPECT_EQ(mc.riemann.max_abs(), 0.0);
  EXPECT_EQ(mc.scalar, 0.0);
  EXPECT_EQ(mc.min_ricci_eig, 0.0);
}

TEST(Lagrangian, QuarticInOneVariable) {
  const Potential p = Potential::parse(1, "x1^4");
  const LagrangianForms lf = lagrangian_forms(p, kOne);
  // B = -1/2 * F''' * g^{-1} = -1/2 * 24 / 12, H = -(1 / (2 g)) g^{-1} g' = -1/12.
  EXPECT_NEAR(lf.B(0, 0, 0), -1.0, 1e-14);
  EXPECT_NEAR(lf.H(0), -1.0 / 12, 1e-14);
  EXPECT_NEAR(lf.H_norm, std::sqrt(12.0) / 12, 1e-14);
  EXPECT_EQ(moduli_curvature(p, kOne).riemann.max_abs(), 0.0);
}

TEST(Lagrangian, MongeAmpereResidual) {
  const std::vector<double> x{0.4, 0.9};
  EXPECT_EQ(ma_residual(Potential::parse(2, "0.5*(x1^2 + x2^2)", 1.0), x), 0.0);
  EXPECT_NEAR(ma_residual(Potential::parse(2, "0.5*(2*x1^2 + x2^2)", 2.0), x), 0.0, 1e-15);
  EXPECT_NEAR(ma_residual(Potential::parse(1, "x1^4", 1.0), kOne), 11.0, 1e-13);
}

TEST(Lagrangian, LogDetDerivative) {
  for (const auto& q : quartics(10, 2)) EXPECT_LE(lagrangian_forms(q.potential, q.point).log_det_defect, 1e-10);
}

TEST(Lagrangian, StandardFormMatchesGraphGeometry) {
  for (const auto& q : quartics(20, 3)) {
    const LagrangianForms lf = lagrangian_forms(q.potential, q.point);
    const StandardForm sf = to_standard(q.potential, q.point);
    const PointGeometry pg = fundamental_forms(sf.graph);
    EXPECT_LE(std::abs(lf.S - pg.S), 1e-8 * (1 + lf.S)) << q.text;
    EXPECT_NEAR(lf.H_norm, pg.H_norm, 1e-8) << q.text;
  }
  const StandardForm flat = to_standard(Potential::parse(2, "0.5*(x1^2 + x2^2)"), std::vector<double>{0.2, 0.1});
  EXPECT_EQ(fundamental_forms(flat.graph).S, 0.0);
}

TEST(Lagrangian, StandardFormOfQuartic) {
  const Potential p = Potential::parse(1, "x1^4");
  const PointGeometry pg = fundamental_forms(to_standard(p, kOne).graph);
  EXPECT_NEAR(pg.H_norm, lagrangian_forms(p, kOne).H_norm, 1e-12);
}

TEST(Lagrangian, StandardFormTransformIsNullFormIsometry) {
  const StandardForm sf = to_standard(Potential::parse(2, "x1^4 + x2^4 + 0.5*(x1^2 + x2^2)"), std::vector<double>{0.3, 0.2});
  MatrixXd eta = MatrixXd::Identity(4, 4);
  eta.bottomRightCorner(2, 2) *= -1;
  MatrixXd q = MatrixXd::Zero(4, 4);
  q.topRightCorner(2, 2) = 0.5 * MatrixXd::Identity(2, 2);
  q.bottomLeftCorner(2, 2) = 0.5 * MatrixXd::Identity(2, 2);
  EXPECT_LE((sf.T.transpose() * eta * sf.T - q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lagrangian, ModuliCurvatureMatchesHessianMetricOracle) {
  for (const auto& q : quartics(12, 4)) {
    const ModuliCurvature mc = moduli_curvature(q.potential, q.point);
    const VectorXd x = Eigen::Map<const VectorXd>(q.point.data(), 2);
    const auto ref = oracle::riemann_from_metric(oracle::hessian_metric(q.potential), x);
    EXPECT_LE(oracle::rel_dev(mc.riemann, ref), 1e-6) << q.text;
    EXPECT_LE(oracle::rel_dev(mc.riemann, hessian_metric_riemann(q.potential, q.point)), 1e-6) << q.text;
    // Ricci is the g-contraction of Riemann.
    const MatrixXd gi = potential_jet(q.potential, q.point).hess.inverse();
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        double ric = 0;
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) ric += gi(j, l) * mc.riemann(i, j, k, l);
        EXPECT_NEAR(mc.ricci(i, k), ric, 1e-10 * std::max(1.0, std::abs(ric)));
      }
    EXPECT_LE(curvature_symmetry_defect(mc.riemann), 1e-10);
  }
}

TEST(Lagrangian, ModuliCurvatureInThreeDimensions) {
  const Potential p = Potential::parse(3, "0.5*(x1^2 + x2^2 + x3^2) + 0.2*(x1 - x2 + 0.5*x3)^4 + 0.1*(x2 + x3)^4");
  const std::vector<double> x{0.3, -0.4, 0.5};
  const VectorXd xv = Eigen::Map<const VectorXd>(x.data(), 3);
  EXPECT_LE(oracle::rel_dev(moduli_curvature(p, x).riemann, oracle::riemann_from_metric(oracle::hessian_metric(p), xv)), 1e-6);
}

TEST(Lagrangian, NonConvexPotentialIsRejected) {
  const Potential p = Potential::parse(2, "x1^2 - x2^2");
  const std::vector<double> x{0.1, 0.1};
  EXPECT_THROW((void)lagrangian_forms(p, x), NotConvexError);
  EXPECT_THROW((void)moduli_curvature(p, x), NotSpacelikeError);
  EXPECT_NEAR(ma_residual(p, x), -5.0, 1e-14);
}
