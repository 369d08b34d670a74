#pragma once

// Dirichlet solvers on lattices for the maximal-hypersurface equation
//   div( grad f / sqrt(1 - |grad f|^2) ) = 0
// and the Monge-Ampere equation det(Hess F) = c, m <= 3.
//
// Node roles: an active node lies in the mask and has its full 3^m
// neighborhood inside the box; the non-active neighbors of active nodes are
// Dirichlet nodes carrying the exact boundary expression. Residuals are only
// ever formed at active nodes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spacelike/expr.hpp"
#include "spacelike/graph_map.hpp"
#include "spacelike/lagrangian.hpp"
#include "spacelike/lattice.hpp"

namespace spacelike {

enum class NodeRole : std::uint8_t { Outside, Active, Dirichlet };

const char* to_string(NodeRole r);

struct GridField {
  Lattice lattice;
  std::vector<NodeRole> roles;
  std::vector<double> values;  // NaN at Outside nodes

  std::size_t active_count() const;
  /// True when every node of the 3^m neighborhood of `node` carries a value.
  bool has_full_stencil(std::size_t node) const;
};

/// Classifies nodes; throws LatticeError when there are no active nodes or
/// the active nodes are not face-connected.
std::vector<NodeRole> classify_nodes(const Lattice& lattice);

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 60;
  double delta_safe = 1e-6;
  double damping_floor = 1.0 / 1024.0;
  int max_continuation_steps = 64;
};

struct IterationRecord {
  int iteration = 0;
  double lambda = 1.0;  // boundary-data continuation parameter
  double residual = 0.0;
  double step = 0.0;    // accepted damping factor (0 for the initial record)
};

struct SolveResult {
  GridField field;
  std::vector<IterationRecord> log;
  double residual = 0.0;
  int iterations = 0;
  int continuation_steps = 0;
};

SolveResult solve_maximal(const Lattice& lattice, const Expr& boundary, const SolverOptions& opt = {});
SolveResult solve_ma(const Lattice& lattice, const Expr& boundary, double c, const SolverOptions& opt = {});

/// Max-norm of the discrete residuals at active nodes for a given field.
double maximal_residual_norm(const GridField& field);
double ma_residual_norm(const GridField& field, double c);

/// Largest midpoint |grad f| used by the maximal residual.
double max_midpoint_gradient(const GridField& field);
/// Smallest eigenvalue of the discrete Hessian over active nodes.
double min_discrete_hessian_eig(const GridField& field);

/// Local graph data of a scalar field at a node by central differences.
/// Third derivatives (central differences of the discrete Hessian, then
/// symmetrized) are filled when requested and the two-ring is available.
LocalGraph field_local(const GridField& field, std::size_t node, bool with_third = false);
PotentialJet field_potential_jet(const GridField& field, std::size_t node);

/// Nodes whose two-ring neighborhood carries values.
std::vector<std::size_t> deep_interior_nodes(const GridField& field);

}  // namespace spacelike
