#pragma once

#include <cstddef>
#include <span>

namespace fractal {

/// Pairwise (tree) summation. The reduction tree depends only on the length
/// of the input, so the result is reproducible for a fixed element order and
/// the rounding error grows as O(log n) rather than O(n).
inline double pairwise_sum(std::span<const double> x) {
  constexpr std::size_t block = 8;
  if (x.size() <= block) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace fractal
