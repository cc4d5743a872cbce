#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>

#include "fractal/error.hpp"
#include "fractal/multi_index.hpp"

namespace fractal {

namespace rate {
/// var ~ C n^-1
struct inv_n {};
/// var ~ C n^-1 log n
struct inv_n_log_n {};
/// var ~ C n^exponent
struct power {
  double exponent = -1.0;
};
}  // namespace rate

using rate_class = std::variant<rate::inv_n, rate::inv_n_log_n, rate::power>;

inline std::string rate_name(const rate_class& rc) {
  if (std::holds_alternative<rate::inv_n>(rc)) return "n^-1";
  if (std::holds_alternative<rate::inv_n_log_n>(rc)) return "n^-1 log n";
  char buf[48];
  std::snprintf(buf, sizeof buf, "n^%.6g", std::get<rate::power>(rc).exponent);
  return buf;
}

/// Asymptotic order of var(alpha_hat) in terms of the total sample size n,
/// for an increment of order p in dimension d.
///
///  - 4 + 4p - 2 alpha < d: the quadratic (Wiener-Ito) regime,
///    var ~ n^{-2(2 - alpha)/d}, for affine and nonaffine g alike;
///  - 4 + 4p - 2 alpha = d: var ~ n^-1 log n;
///  - otherwise var ~ n^-1, except that for nonaffine g with 2 alpha < d the
///    n^{-alpha/d} term dominates and var ~ n^{-2 alpha/d}.
///
/// For d = 1 this gives n^-1 / n^-1 log n / n^{2 alpha - 4} for p = 0 and
/// n^-1 for p >= 1, with n^{-2 alpha} for nonaffine g below alpha = 1/2; for
/// d = 2 and p >= 1, n^-1, or n^{-alpha} for nonaffine g below alpha = 1.
inline rate_class variance_class(double alpha, int p, int d, bool affine_g) {
  multi_index::check_dim(d);
  if (!(alpha > 0.0 && alpha < 2.0))
    throw error(errc::alpha_out_of_range, "rate classes need alpha in (0, 2), got " + std::to_string(alpha));
  if (p < 0) throw error(errc::invalid_argument, "increment order must be nonnegative");

  const double quad = 4.0 + 4.0 * p - 2.0 * alpha - d;
  if (quad < 0.0) return rate::power{-2.0 * (2.0 - alpha) / d};
  if (quad == 0.0) return rate::inv_n_log_n{};
  if (!affine_g) {
    if (2.0 * alpha == static_cast<double>(d))
      throw error(errc::boundary_alpha, "alpha = " + std::to_string(alpha) +
                                            " sits on the boundary between the n^-1 and n^{-2 alpha/d} regimes");
    if (2.0 * alpha < d) return rate::power{-2.0 * alpha / d};
  }
  return rate::inv_n{};
}

/// var(n2) / var(n1) under the given rate class (n = total sample size).
inline double predicted_ratio(const rate_class& rc, double n1, double n2) {
  if (!(n1 > 1.0 && n2 > 1.0)) throw error(errc::invalid_argument, "sample sizes must exceed 1");
  const double r = n2 / n1;
  if (std::holds_alternative<rate::inv_n>(rc)) return 1.0 / r;
  if (std::holds_alternative<rate::inv_n_log_n>(rc)) return std::log(n2) / std::log(n1) / r;
  return std::pow(r, std::get<rate::power>(rc).exponent);
}

/// Same, for square grids given by their side lengths (n = side^d).
inline double predicted_ratio_sides(const rate_class& rc, double side1, double side2, int d) {
  multi_index::check_dim(d);
  return predicted_ratio(rc, std::pow(side1, d), std::pow(side2, d));
}

}  // namespace fractal
