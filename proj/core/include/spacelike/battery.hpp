#pragma once

// Example generators and the invariant suite behind `spacelike check`.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spacelike/graph_map.hpp"
#include "spacelike/lagrangian.hpp"

namespace spacelike {

struct GraphCase {
  std::string text;  // components joined by "; "
  GraphMap map;
  std::vector<double> point;
};

/// Random polynomial graph of the given degree, scaled so that the largest
/// slope singular value at `point` is uniform in [0.2, 0.7].
GraphCase random_polynomial_graph(std::mt19937_64& rng, int m, int n, int degree = 3);

struct PotentialCase {
  std::string text;
  Potential potential;
  std::vector<double> point;
};

/// 1/2 x^T Q x + sum_k a_k (w_k . x + b_k)^4 with Q positive definite and
/// a_k > 0, convex everywhere.
PotentialCase random_convex_quartic(std::mt19937_64& rng, int m);

std::string hyperboloid_text(int m, bool shifted = false);
std::string catenoid_text();

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;      // measured defect
  double tolerance = 0.0;  // pass when value <= tolerance
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_check_suite(std::uint64_t seed);

}  // namespace spacelike
