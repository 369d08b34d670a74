#pragma once

// Pointwise extrinsic geometry of a space-like graph X(x) = (x, f(x)) in
// R^{m+n}_n, ambient form diag(+1 x m, -1 x n).
//
// Conventions:
//   * tangent frame e_a = sum_i C_ai X_i with C = L^{-1}, g = L L^T;
//     normal frame e_s = sum_t K_st N_t with N_t = sum_i f^t_i d_i + d_{y^t},
//     K = chol(I - A A^T)^{-1}; <e_a, e_b> = delta_ab, <e_s, e_t> = -delta_st.
//   * h_sij = <D_{e_i} e_j, e_s>. With this sign Hess z = 2(delta - <X,e_s> h_s)
//     for z = <X, X>, and the umbilic hyperboloid has h = -delta.
//   * R_ijkl = -(h_sik h_sjl - h_sil h_sjk), so R_ijij is a sectional curvature.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spacelike/graph_map.hpp"
#include "spacelike/lattice.hpp"
#include "spacelike/tensor.hpp"

namespace spacelike {

/// <u, v> in R^{m+n}_n.
double ambient_inner(int m, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct MetricPoint {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;  // empty when not space-like
  double det_g = 0.0;
  double min_eig = 0.0;
  bool spacelike = false;
};

struct Frames {
  Eigen::MatrixXd tangent;         // (m+n) x m, columns e_a
  Eigen::MatrixXd normal;          // (m+n) x n, columns e_s
  Eigen::MatrixXd tangent_coeffs;  // m x m, e_a = sum_i C(a, i) X_i
  Eigen::MatrixXd normal_coeffs;   // n x n
};

struct PointGeometry {
  int m = 0;
  int n = 0;
  MetricPoint metric;
  Frames frames;
  Tensor3 h;           // (s, i, j)
  Eigen::VectorXd H;   // H^s = (1/m) sum_i h_sii
  double H_norm = 0.0;
  double S = 0.0;
  // Filled by curvature().
  Tensor4 riemann;      // (i, j, k, l)
  Eigen::MatrixXd ricci;
  Tensor4 normal_curv;  // (s, t, i, j)
};

struct CovariantH {
  Tensor4 h_cov;  // (s, i, j, k): derivative index last
  double codazzi_asymmetry = 0.0;  // max |h_sijk - h_sikj|
  Eigen::MatrixXd DH;              // n x m, (1/m) sum_i h_siik
};

struct PseudoDistancePoint {
  double z = 0.0;
  Eigen::VectorXd grad_z;  // frame components
  Eigen::MatrixXd hess_z;  // frame components
  double lap_z = 0.0;
  double grad_norm = 0.0;
  double ratio = 0.0;  // |grad z| / (z + 1)
};

// Local-data entry points. Everything except induced_metric throws
// NotSpacelikeError when the metric is not positive definite.
MetricPoint induced_metric(const LocalGraph& lg);
Frames adapted_frames(const LocalGraph& lg);
PointGeometry fundamental_forms(const LocalGraph& lg);
/// fundamental_forms plus the Riemann, Ricci and normal curvature tensors.
PointGeometry curvature(const LocalGraph& lg);
void fill_curvature(PointGeometry& pg);
Eigen::VectorXd extremal_residual(const LocalGraph& lg);
/// Smallest Ricci eigenvalue minus (-m^2 |H|^2 / 4).
double ricci_bound_margin(const PointGeometry& pg);
/// Needs third derivatives in `lg`.
CovariantH covariant_h(const LocalGraph& lg);
/// `lg.y` must already be measured from the base point.
PseudoDistancePoint pseudo_distance(const LocalGraph& lg);

// GraphMap conveniences.
MetricPoint induced_metric(const GraphMap& map, std::span<const double> x);
Frames adapted_frames(const GraphMap& map, std::span<const double> x);
PointGeometry fundamental_forms(const GraphMap& map, std::span<const double> x);
PointGeometry curvature(const GraphMap& map, std::span<const double> x);
Eigen::VectorXd extremal_residual(const GraphMap& map, std::span<const double> x);
double ricci_bound_check(const GraphMap& map, std::span<const double> x);
CovariantH covariant_h(const GraphMap& map, std::span<const double> x);
/// Throws BasePointError unless X(0) = 0 (directly or via with_origin_offset()).
PseudoDistancePoint pseudo_distance(const GraphMap& map, std::span<const double> x);

struct SimonsPoint {
  std::size_t node = 0;
  double half_lap_S = 0.0;
  double rhs = 0.0;  // sum h_sijk^2 - m |H| S^{3/2} + S^2 / n
  double slack = 0.0;
  double dh_max = 0.0;  // diagnostic: max |DH|
};

struct SimonsReport {
  std::vector<SimonsPoint> points;  // interior lattice nodes
  double min_slack = 0.0;
  double max_dh = 0.0;
};

/// Laplace-Beltrami of the S field by second-order central differences on the
/// lattice, compared against the Simons-type lower bound at interior nodes.
SimonsReport simons_report(const GraphMap& map, const Lattice& lattice);

}  // namespace spacelike
