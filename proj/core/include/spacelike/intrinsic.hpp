#pragma once

// Intrinsic (coordinate) Riemannian geometry of a metric given by its
// coordinate derivatives. Independent of the frame-based extrinsic route, so it
// serves as the oracle for Gauss-equation and moduli-curvature checks.

#include <vector>

#include <Eigen/Dense>

#include "spacelike/graph_map.hpp"
#include "spacelike/tensor.hpp"

namespace spacelike {

struct MetricDerivatives {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;                // dg[k](i, j) = d_k g_ij
  std::vector<std::vector<Eigen::MatrixXd>> ddg;  // ddg[k][l](i, j) = d_k d_l g_ij (may be empty)
};

/// Christoffel symbols of the second kind, (k, i, j) = Gamma^k_ij.
Tensor3 christoffel(const MetricDerivatives& md);

/// Fully covariant Riemann tensor R_ijkl = <R(d_i, d_j) d_l, d_k>, so that
/// R_ijij / (g_ii g_jj - g_ij^2) is the sectional curvature of span{d_i, d_j}.
/// Requires second derivatives of the metric.
Tensor4 coordinate_riemann(const MetricDerivatives& md);

/// R'_abcd = C_ai C_bj C_ck C_dl R_ijkl.
Tensor4 change_frame(const Tensor4& r, const Eigen::MatrixXd& coeffs);

/// Ricci R_ik = g^{jl} R_ijkl (coordinate components).
Eigen::MatrixXd coordinate_ricci(const Tensor4& r, const Eigen::MatrixXd& g_inv);

/// Metric derivatives of g_ij = delta_ij - sum_s f^s_i f^s_j. Second
/// derivatives are filled only when the local data carries third derivatives.
MetricDerivatives graph_metric_derivatives(const LocalGraph& lg);

/// Max over all index quadruples of |R_ijkl + R_iklj + R_iljk|.
double first_bianchi_defect(const Tensor4& r);

}  // namespace spacelike
