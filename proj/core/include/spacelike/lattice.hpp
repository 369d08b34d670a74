#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace spacelike {

/// Spherical shell mask inner <= |x - center| <= outer. inner = 0 gives a ball;
/// in two dimensions a shell is an annulus.
struct Shell {
  std::vector<double> center;
  double inner = 0.0;
  double outer = 0.0;
};

/// Axis-aligned box lattice with an optional shell mask. Nodes are numbered
/// lexicographically with the last axis varying fastest.
class Lattice {
 public:
  Lattice() = default;
  /// Node counts are round((upper - lower) / spacing) + 1 per axis.
  Lattice(std::vector<double> lower, std::vector<double> upper, std::vector<double> spacing);

  Lattice with_mask(Shell mask) const;

  int dim() const { return static_cast<int>(lower_.size()); }
  std::size_t size() const { return size_; }
  int count(int axis) const { return counts_[axis]; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return lower_[axis] + spacing_[axis] * (counts_[axis] - 1); }
  double spacing(int axis) const { return spacing_[axis]; }
  const std::optional<Shell>& mask() const { return mask_; }

  std::vector<int> multi_index(std::size_t node) const;
  std::size_t linear(std::span<const int> index) const;
  std::vector<double> position(std::size_t node) const;

  /// Node reached by an integer offset, if it is inside the box.
  std::optional<std::size_t> neighbor(std::size_t node, std::span<const int> offset) const;
  bool on_box_boundary(std::size_t node) const;
  bool in_mask(std::size_t node) const;
  std::size_t nearest(std::span<const double> x) const;

  /// All offsets in {-1, 0, 1}^m except the zero offset.
  std::vector<std::vector<int>> neighbor_offsets() const;

 private:
  std::vector<double> lower_;
  std::vector<double> spacing_;
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::optional<Shell> mask_;
};

}  // namespace spacelike
