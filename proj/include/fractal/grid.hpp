#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fractal/error.hpp"
#include "fractal/multi_index.hpp"

namespace fractal {

/// Regular grid of reals indexed by multi-indices in [lo, lo + extent).
/// Storage is row-major: the first component selects the row.
class field_grid {
 public:
  field_grid() = default;

  field_grid(multi_index lo, multi_index extent, double fill = 0.0)
      : lo_(lo), extent_(extent) {
    if (lo.dim != extent.dim) throw error(errc::invalid_argument, "grid origin/extent dimension mismatch");
    for (int l = 0; l < extent.dim; ++l)
      if (extent[l] < 1) throw error(errc::invalid_argument, "grid extent must be positive");
    values_.assign(static_cast<std::size_t>(product(extent)), fill);
  }

  int dim() const { return extent_.dim; }
  const multi_index& lo() const { return lo_; }
  const multi_index& extent() const { return extent_; }
  std::size_t size() const { return values_.size(); }

  bool contains(const multi_index& i) const {
    for (int l = 0; l < dim(); ++l)
      if (i[l] < lo_[l] || i[l] >= lo_[l] + extent_[l]) return false;
    return true;
  }

  std::size_t offset(const multi_index& i) const {
    std::size_t off = 0;
    for (int l = 0; l < dim(); ++l)
      off = off * static_cast<std::size_t>(extent_[l]) + static_cast<std::size_t>(i[l] - lo_[l]);
    return off;
  }

  double operator[](const multi_index& i) const { return values_[offset(i)]; }
  double& operator[](const multi_index& i) { return values_[offset(i)]; }

  double at(const multi_index& i) const {
    if (i.dim != dim() || !contains(i))
      throw error(errc::out_of_bounds, "index (" + i.str() + ") outside stored grid");
    return values_[offset(i)];
  }

  /// Signed stride (in flat storage) of a displacement.
  std::int64_t stride_of(const multi_index& delta) const {
    if (dim() == 1) return delta[0];
    return delta[0] * extent_[1] + delta[1];
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  multi_index lo_;
  multi_index extent_;
  std::vector<double> values_;
};

}  // namespace fractal
