#pragma once

// Curvature-estimate checks on geodesic balls, the curvature decay scan for
// maximal graphs over growing balls, and geodesic completeness probes.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spacelike/expr.hpp"
#include "spacelike/graph_map.hpp"
#include "spacelike/lattice.hpp"
#include "spacelike/solver.hpp"

namespace spacelike {

struct RadiusField {
  Lattice lattice;
  std::size_t source = 0;
  std::vector<double> r;  // +inf outside the mask
};

/// Intrinsic distance from the lattice node nearest x0. A Dijkstra pass over
/// the 3^m - 1 neighbor graph (midpoint-metric edge lengths) is refined by
/// Gauss-Seidel sweeps of the segment update
///   r(x) = min_t (1-t) r(a) + t r(b) + |x - a - t(b - a)|_g
/// over pairs of adjacent neighbors a, b, which removes the grid-direction
/// bias of plain graph distances.
RadiusField geodesic_radius(const GraphMap& map, const Lattice& lattice, std::span<const double> x0);

struct BallSample {
  std::size_t node = 0;
  double r = 0.0;
  double S = 0.0;
  double H_norm = 0.0;
  double mu = 0.0;  // Gauss-map distance to the plane at the center
};

struct BallReport {
  std::vector<double> center;
  double a = 0.0;
  std::vector<BallSample> samples;
  double H_bar = 0.0;   // max sampled H_norm
  double mu_max = 0.0;  // sampled maximum modulus
  double ratio29 = 0.0;
  double ratio28 = 0.0;
};

BallReport estimate_report(const GraphMap& map, std::span<const double> x0, double a, const Lattice& lattice);

struct DecayOptions {
  int m = 2;
  std::vector<double> center;  // defaults to the origin
  double spacing = 0.0;        // 0: a / nodes_per_radius
  int nodes_per_radius = 32;
  SolverOptions solver;
  int threads = 1;
  double zero_floor = 1e-10;
};

struct DecayRow {
  double a = 0.0;
  double h = 0.0;
  double S_center = 0.0;
  bool ok = false;
  std::string status;
  int iterations = 0;
  double residual = 0.0;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  bool exact_zero = false;      // every successful row has S <= zero_floor
  std::optional<double> slope;  // least-squares slope of log S against log a
};

/// Solves the maximal Dirichlet problem on balls of the given radii and
/// reports S at the ball center. Per-radius failures are recorded in the row.
DecayReport decay_scan(const Expr& boundary, const std::vector<double>& radii, const DecayOptions& opt);

struct ProbeOptions {
  double dt = 1e-2;
  double region = 1e6;  // geodesics must stay in |x|_inf <= region
};

struct ProbeSample {
  double t = 0.0;
  double z = 0.0;
  double ratio = 0.0;
};

struct ProbeReport {
  std::vector<double> direction;
  std::vector<ProbeSample> samples;
  double b_emp = 0.0;      // sup log(z + 1) / t
  double ratio_sup = 0.0;  // sup |grad z| / (z + 1) along the geodesic
};

/// Integrates geodesics from x = 0 with unit initial velocity given in the
/// tangent frame. Requires X(0) = 0.
std::vector<ProbeReport> completeness_probe(const GraphMap& map, const std::vector<std::vector<double>>& directions,
                                            double T, const ProbeOptions& opt = {});

}  // namespace spacelike
