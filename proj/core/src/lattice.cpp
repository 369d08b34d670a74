#include "spacelike/lattice.hpp"

#include <cmath>

#include "spacelike/errors.hpp"

namespace spacelike {

Lattice::Lattice(std::vector<double> lower, std::vector<double> upper, std::vector<double> spacing)
    : lower_(std::move(lower)), spacing_(std::move(spacing)) {
  const std::size_t m = lower_.size();
  if (m == 0 || upper.size() != m || spacing_.size() != m)
    throw LatticeError("lattice: lower/upper/spacing must have equal nonzero length");
  counts_.resize(m);
  strides_.resize(m);
  for (std::size_t d = 0; d < m; ++d) {
    if (!(spacing_[d] > 0.0)) throw LatticeError("lattice: spacing must be positive");
    if (!(upper[d] > lower_[d])) throw LatticeError("lattice: upper must exceed lower");
    counts_[d] = static_cast<int>(std::lround((upper[d] - lower_[d]) / spacing_[d])) + 1;
    if (counts_[d] < 2) throw LatticeError("lattice: fewer than two nodes along an axis");
  }
  size_ = 1;
  for (std::size_t d = m; d-- > 0;) {
    strides_[d] = size_;
    size_ *= static_cast<std::size_t>(counts_[d]);
  }
}

Lattice Lattice::with_mask(Shell mask) const {
  if (static_cast<int>(mask.center.size()) != dim()) throw LatticeError("mask: center has wrong dimension");
  if (!(mask.outer > mask.inner) || mask.inner < 0.0) throw LatticeError("mask: need 0 <= inner < outer");
  Lattice r(*this);
  r.mask_ = std::move(mask);
  return r;
}

std::vector<int> Lattice::multi_index(std::size_t node) const {
  std::vector<int> idx(lower_.size());
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    idx[d] = static_cast<int>(node / strides_[d]);
    node %= strides_[d];
  }
  return idx;
}

std::size_t Lattice::linear(std::span<const int> index) const {
  std::size_t n = 0;
  for (std::size_t d = 0; d < lower_.size(); ++d) n += static_cast<std::size_t>(index[d]) * strides_[d];
  return n;
}

std::vector<double> Lattice::position(std::size_t node) const {
  const auto idx = multi_index(node);
  std::vector<double> x(lower_.size());
  for (std::size_t d = 0; d < lower_.size(); ++d) x[d] = lower_[d] + spacing_[d] * idx[d];
  return x;
}

std::optional<std::size_t> Lattice::neighbor(std::size_t node, std::span<const int> offset) const {
  std::size_t r = node;
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    const int i = static_cast<int>((node / strides_[d]) % static_cast<std::size_t>(counts_[d])) + offset[d];
    if (i < 0 || i >= counts_[d]) return std::nullopt;
    r = r + static_cast<std::size_t>(i) * strides_[d] -
        static_cast<std::size_t>(i - offset[d]) * strides_[d];
  }
  return r;
}

bool Lattice::on_box_boundary(std::size_t node) const {
  const auto idx = multi_index(node);
  for (std::size_t d = 0; d < idx.size(); ++d)
    if (idx[d] == 0 || idx[d] == counts_[d] - 1) return true;
  return false;
}

bool Lattice::in_mask(std::size_t node) const {
  if (!mask_) return true;
  const auto x = position(node);
  double r2 = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) r2 += (x[d] - mask_->center[d]) * (x[d] - mask_->center[d]);
  const double r = std::sqrt(r2);
  return r >= mask_->inner && r <= mask_->outer;
}

std::size_t Lattice::nearest(std::span<const double> x) const {
  std::vector<int> idx(lower_.size());
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    const long i = std::lround((x[d] - lower_[d]) / spacing_[d]);
    if (i < 0 || i >= counts_[d]) throw LatticeError("lattice: point outside the box");
    idx[d] = static_cast<int>(i);
  }
  return linear(idx);
}

std::vector<std::vector<int>> Lattice::neighbor_offsets() const {
  const int m = dim();
  std::vector<std::vector<int>> out;
  int total = 1;
  for (int d = 0; d < m; ++d) total *= 3;
  for (int c = 0; c < total; ++c) {
    std::vector<int> off(m);
    int r = c;
    bool zero = true;
    for (int d = m; d-- > 0;) {
      off[d] = r % 3 - 1;
      r /= 3;
      zero = zero && off[d] == 0;
    }
    if (!zero) out.push_back(std::move(off));
  }
  return out;
}

}  // namespace spacelike
