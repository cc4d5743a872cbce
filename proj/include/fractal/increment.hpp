#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fractal/error.hpp"
#include "fractal/grid.hpp"
#include "fractal/multi_index.hpp"

namespace fractal {

using coeff_map = std::map<multi_index, double, lex_less>;

inline constexpr double moment_tolerance = 1e-12;

/// Sum_j j^r a_j.
inline double moment(const coeff_map& coeffs, const multi_index& r) {
  double s = 0.0;
  for (const auto& [j, a] : coeffs) s += index_power(j, r) * a;
  return s;
}

/// Calls fn(r) for every nonnegative multi-index r of dimension d with |r| = q.
template <typename Fn>
void for_each_moment_index(int d, std::int64_t q, Fn&& fn) {
  if (d == 1) {
    fn(multi_index(q));
    return;
  }
  for (std::int64_t r0 = q; r0 >= 0; --r0) fn(multi_index(r0, q - r0));
}

inline int coeff_dim(const coeff_map& coeffs) {
  if (coeffs.empty()) throw error(errc::all_zero, "empty coefficient map");
  const int d = coeffs.begin()->first.dim;
  multi_index::check_dim(d);
  for (const auto& [j, a] : coeffs) {
    if (j.dim != d) throw error(errc::invalid_argument, "coefficient offsets of mixed dimension");
    if (!std::isfinite(a)) throw error(errc::invalid_argument, "non-finite coefficient at " + j.str());
  }
  return d;
}

/// Smallest p such that every moment with |r| <= p vanishes and some moment
/// with |r| = p + 1 does not.
inline int increment_order(const coeff_map& coeffs, int cap) {
  const int d = coeff_dim(coeffs);
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second == 0.0; }))
    throw error(errc::all_zero, "every coefficient is zero");
  if (std::abs(moment(coeffs, multi_index::zero(d))) > moment_tolerance)
    throw error(errc::nonvanishing_zeroth_moment,
                "coefficients do not sum to zero, so this is not an increment of any order");

  for (int q = 1; q <= cap + 1; ++q) {
    bool vanish = true;
    for_each_moment_index(d, q, [&](const multi_index& r) {
      if (std::abs(moment(coeffs, r)) > moment_tolerance) vanish = false;
    });
    if (!vanish) return q - 1;
  }
  throw error(errc::order_exceeds_cap, "all moments up to order " + std::to_string(cap + 1) + " vanish");
}

/// A finite coefficient array a = {a_j : -J <= j <= J} of verified order p.
class increment {
 public:
  static constexpr int default_order_cap = 8;

  increment() = default;

  explicit increment(coeff_map coeffs, std::string name = "custom", int cap = default_order_cap)
      : name_(std::move(name)) {
    for (auto& [j, a] : coeffs)
      if (a != 0.0) coeffs_.emplace(j, a);
    if (coeffs_.empty()) throw error(errc::all_zero, "every coefficient is zero");
    order_ = increment_order(coeffs_, cap);
    radius_ = multi_index::zero(dim());
    for (const auto& [j, a] : coeffs_)
      for (int l = 0; l < dim(); ++l) radius_[l] = std::max(radius_[l], std::abs(j[l]));
  }

  /// a_0 = -1, a_1 = 1 (order 0).
  static increment forward_difference() {
    return increment(coeff_map{{multi_index(0), -1.0}, {multi_index(1), 1.0}}, "diff0");
  }

  /// a_{-1} = 1, a_0 = -2, a_1 = 1 (order 1).
  static increment second_difference() {
    return increment(coeff_map{{multi_index(-1), 1.0}, {multi_index(0), -2.0}, {multi_index(1), 1.0}},
                     "diff1");
  }

  /// Two-dimensional "square" increment (order 1).
  static increment square() {
    return increment(coeff_map{{multi_index(0, 0), 1.0},
                               {multi_index(1, 1), 1.0},
                               {multi_index(1, 0), -1.0},
                               {multi_index(0, 1), -1.0}},
                     "square");
  }

  int dim() const { return coeffs_.begin()->first.dim; }
  int order() const { return order_; }
  const coeff_map& coeffs() const { return coeffs_; }
  const multi_index& support_radius() const { return radius_; }
  const std::string& name() const { return name_; }

 private:
  coeff_map coeffs_;
  int order_ = 0;
  multi_index radius_;
  std::string name_;
};

/// The dilation a^u: a_{j'} placed at j = j'u, zero elsewhere.
class dilated_increment {
 public:
  dilated_increment(const increment& base, int u) : base_(base), u_(u) {
    if (u < 1) throw error(errc::invalid_argument, "dilation factor must be >= 1");
    for (const auto& [j, a] : base.coeffs()) coeffs_.emplace(j * u, a);
  }

  const increment& base() const { return base_; }
  int u() const { return u_; }
  const coeff_map& coeffs() const { return coeffs_; }
  multi_index support_radius() const { return base_.support_radius() * u_; }

  /// Componentwise min and max offsets of the nonzero coefficients.
  std::pair<multi_index, multi_index> reach() const {
    const int d = base_.dim();
    auto lo = coeffs_.begin()->first;
    auto hi = lo;
    for (const auto& [j, a] : coeffs_)
      for (int l = 0; l < d; ++l) {
        lo[l] = std::min(lo[l], j[l]);
        hi[l] = std::max(hi[l], j[l]);
      }
    return {lo, hi};
  }

 private:
  increment base_;
  int u_;
  coeff_map coeffs_;
};

inline dilated_increment dilate(const increment& inc, int u) { return dilated_increment(inc, u); }

/// Sum_j a_j^u data[i + j].
inline double apply_increment(const dilated_increment& dil, const field_grid& data, const multi_index& i) {
  double s = 0.0;
  for (const auto& [j, a] : dil.coeffs()) s += a * data.at(i + j);
  return s;
}

}  // namespace fractal
