#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spacelike {

/// Dense row-major array of fixed rank with runtime extents.
template <int Rank>
class Tensor {
 public:
  Tensor() { dims_.fill(0); }
  template <class... Extents>
  explicit Tensor(Extents... extents) : dims_{static_cast<int>(extents)...} {
    static_assert(sizeof...(Extents) == Rank);
    std::size_t n = 1;
    for (int d : dims_) n *= static_cast<std::size_t>(d);
    data_.assign(n, 0.0);
  }

  int dim(int axis) const { return dims_[axis]; }
  std::size_t size() const { return data_.size(); }

  template <class... Idx>
  double& operator()(Idx... idx) {
    return data_[offset(idx...)];
  }
  template <class... Idx>
  double operator()(Idx... idx) const {
    return data_[offset(idx...)];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double max_abs() const {
    double r = 0.0;
    for (double v : data_) r = std::max(r, std::abs(v));
    return r;
  }

 private:
  template <class... Idx>
  std::size_t offset(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank);
    const std::array<int, Rank> ix{static_cast<int>(idx)...};
    std::size_t o = 0;
    for (int a = 0; a < Rank; ++a) o = o * static_cast<std::size_t>(dims_[a]) + ix[a];
    return o;
  }

  std::array<int, Rank> dims_;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

/// max |a - b| over entries.
template <int R>
double max_abs_diff(const Tensor<R>& a, const Tensor<R>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a.data()[i] - b.data()[i]));
  return r;
}

}  // namespace spacelike
