#pragma once

// Space-like m-planes of R^{m+n}_n in the slope chart over the coordinate
// m-plane, and the symmetric-space distance between them.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spacelike/graph_map.hpp"

namespace spacelike {

/// Plane spanned by the columns of [I_m; slope].
struct SpacelikePlane {
  Eigen::MatrixXd slope;  // n x m
  double sigma_max = 0.0;

  /// Throws NotSpacelikeError when sigma_max >= 1.
  static SpacelikePlane from_slope(Eigen::MatrixXd slope);
};

SpacelikePlane gauss_map(const GraphMap& map, std::span<const double> x);

/// Slope of Q after the boost that carries P to the base plane.
Eigen::MatrixXd transported_slope(const SpacelikePlane& p, const SpacelikePlane& q);

double distance(const SpacelikePlane& p, const SpacelikePlane& q);

struct PullbackReport {
  double rate = 0.0;  // (sum_{s,i} (h_sij v_j)^2)^{1/2}
  std::vector<double> eps;
  std::vector<double> quotients;  // d(gamma(x), gamma(x + eps w)) / eps, first order in eps
  std::vector<double> central;    // d(gamma(x - eps w), gamma(x + eps w)) / (2 eps), second order
  double extrapolated = 0.0;      // Richardson (4 q_fine - q_coarse) / 3 on the two finest central rungs
  double error = 0.0;             // |extrapolated - rate| / max(1, rate)
};

/// `dir` holds tangent-frame components of a unit vector. The first rung is
/// eps0 / max(1, sqrt(S)), so the ladder stays in the asymptotic regime for
/// strongly curved graphs; each further rung halves it.
///
/// The one-sided quotient behaves like |rate + b eps| and folds over when the
/// rate is small against b eps, so extrapolation uses the central quotients.
PullbackReport pullback_check(const GraphMap& map, std::span<const double> x, std::span<const double> dir,
                              double eps0 = 1e-2, int levels = 4);

/// Sum over an orthonormal frame of squared stretches, which equals S.
double pullback_trace(const GraphMap& map, std::span<const double> x, double eps0 = 1e-2, int levels = 4);

/// Largest distance from ref over the samples. Only a lower bound for the
/// supremum over the underlying region.
double max_modulus(const GraphMap& map, const std::vector<std::vector<double>>& samples,
                   const SpacelikePlane& ref);

}  // namespace spacelike
