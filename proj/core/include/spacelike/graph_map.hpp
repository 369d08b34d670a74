#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spacelike/expr.hpp"
#include "spacelike/tensor.hpp"

namespace spacelike {

/// Derivatives of a graph map f: R^m -> R^n at one point, up to third order.
/// This is everything the pointwise geometry needs; it can come from jets of
/// an expression, from finite differences of a grid field, or from a change
/// of coordinates.
struct LocalGraph {
  int m = 0;
  int n = 0;
  Eigen::VectorXd x;           // base coordinates
  Eigen::VectorXd y;           // f(x), minus the configured offset
  Eigen::MatrixXd jac;         // jac(s, i) = d f^s / d x^i
  Tensor3 second;              // (s, i, j)
  std::optional<Tensor4> third;  // (s, i, j, k)

  /// Ambient position X = (x; y).
  Eigen::VectorXd position() const;
};

/// The immersion X(x) = (x, f(x) - offset) of R^m into R^{m+n}_n.
class GraphMap {
 public:
  GraphMap(int m, std::vector<Expr> components);
  static GraphMap parse(int m, const std::vector<std::string>& components);

  int m() const { return m_; }
  int n() const { return static_cast<int>(components_.size()); }
  const std::vector<Expr>& components() const { return components_; }

  /// Copy translated along the y-axes so that X(0) = 0.
  GraphMap with_origin_offset() const;
  bool has_offset() const { return has_offset_; }
  const Eigen::VectorXd& offset() const { return offset_; }

  /// f(x) - offset.
  Eigen::VectorXd value(std::span<const double> x) const;
  /// Jacobian only (first-order forward mode).
  Eigen::MatrixXd jacobian(std::span<const double> x) const;
  /// Full third-order local data via jets.
  LocalGraph local(std::span<const double> x) const;

 private:
  int m_;
  std::vector<Expr> components_;
  bool has_offset_ = false;
  Eigen::VectorXd offset_;
};

}  // namespace spacelike
