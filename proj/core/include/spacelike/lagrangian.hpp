#pragma once

// Gradient graphs M = {(x, grad F(x))} of convex potentials in null
// coordinates of R^{2m}_m, with bilinear form Q((x,y),(x',y')) = 1/2 (x.y' + x'.y).
// Tangents e_i = (d_i, F_ij d_j) and normals n_i = (d_i, -F_ij d_j) give
// <e_i, e_j> = F_ij, <n_i, n_j> = -F_ij, <e_i, n_j> = 0.

#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "spacelike/expr.hpp"
#include "spacelike/graph_map.hpp"
#include "spacelike/intrinsic.hpp"
#include "spacelike/tensor.hpp"

namespace spacelike {

struct Potential {
  int m = 0;
  Expr F;
  double c = 1.0;  // Monge-Ampere target

  static Potential parse(int m, const std::string& text, double c = 1.0);
};

/// Derivatives of F at one point. Produced from jets of an expression or from
/// finite differences of a solved grid field.
struct PotentialJet {
  int m = 0;
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  Tensor3 third;
};

PotentialJet potential_jet(const Potential& p, std::span<const double> x);

struct GradientPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // grad F
  Eigen::MatrixXd g;  // Hess F
  double min_eig = 0.0;
};

/// Throws NotConvexError when Hess F is not positive definite.
GradientPoint gradient_graph(const PotentialJet& j);
GradientPoint gradient_graph(const Potential& p, std::span<const double> x);

struct LagrangianForms {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  double det_g = 0.0;
  Eigen::VectorXd d_det_g;  // d g / d x^l
  Tensor3 B;                // (k, i, j): coefficient of n_k in B_ij
  Eigen::VectorXd H;        // coefficients of n_k
  double H_norm = 0.0;      // sqrt(H^k F_kl H^l)
  double S = 0.0;
  double log_det_defect = 0.0;  // max_l |d_l ln g - g^{ij} F_ijl|
};

LagrangianForms lagrangian_forms(const PotentialJet& j);
LagrangianForms lagrangian_forms(const Potential& p, std::span<const double> x);

double ma_residual(const PotentialJet& j, double c);
double ma_residual(const Potential& p, std::span<const double> x);

struct ModuliCurvature {
  Tensor4 riemann;  // coordinate components R_ijkl
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  double min_ricci_eig = 0.0;  // eigenvalues of Ric relative to g
};

ModuliCurvature moduli_curvature(const PotentialJet& j);
ModuliCurvature moduli_curvature(const Potential& p, std::span<const double> x);

/// Index-symmetry and first-Bianchi defects of a curvature tensor.
double curvature_symmetry_defect(const Tensor4& r);

struct StandardForm {
  /// (u; v) = T (x; y) with T^T diag(I, -I) T equal to the matrix of Q.
  Eigen::MatrixXd T;
  /// M as a graph v = phi(u) over the positive m-plane. Second order only.
  LocalGraph graph;
};

StandardForm to_standard(const PotentialJet& j);
StandardForm to_standard(const Potential& p, std::span<const double> x);

/// Coordinate Riemann tensor of the Hessian metric g = Hess F computed from
/// Christoffel symbols. Fourth derivatives of F come from central differences
/// of the exact third-derivative jets with step h.
Tensor4 hessian_metric_riemann(const Potential& p, std::span<const double> x, double h = 1e-3);

}  // namespace spacelike
