#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "fractal/error.hpp"

namespace fractal {

/// Standard normal distribution function. Evaluated from the complementary
/// error function on the lower tail and reflected, so Phi(-x) = 1 - Phi(x)
/// holds exactly in floating point.
inline double std_normal_cdf(double x) {
  if (std::isnan(x)) return x;
  const double tail = 0.5 * std::erfc(std::abs(x) / std::numbers::sqrt2);
  return x < 0.0 ? tail : 1.0 - tail;
}

/// log(1 - Phi(x)), accurate far into the upper tail.
inline double log_std_normal_sf(double x) {
  if (x < 37.0) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  // Asymptotic Mills-ratio series; truncation error below 1e-12 for x >= 37.
  const double y = 1.0 / (x * x);
  const double series = 1.0 + y * (-1.0 + y * (3.0 + y * (-15.0 + y * 105.0)));
  return -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi)) + std::log(series);
}

/// Phi^{-1}(q) for q in (0, 1).
inline double std_normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    if (q == 0.0) return -std::numeric_limits<double>::infinity();
    if (q == 1.0) return std::numeric_limits<double>::infinity();
    throw error(errc::invalid_argument, "quantile level outside [0, 1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace fractal
