#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fractal/error.hpp"
#include "fractal/increment.hpp"
#include "fractal/multi_index.hpp"
#include "fractal/regression.hpp"

namespace fractal {

/// Topothesy used throughout the numerical work: 1 for processes, 10 for fields.
inline double default_scale(int d) { return d == 1 ? 1.0 : 10.0; }

/// Powered-exponential correlation gamma(t) = exp(-c ||t||^alpha).
struct covariance_model {
  double alpha = 1.0;
  double c = 1.0;
  int dim = 1;

  static covariance_model make(double alpha, int dim, std::optional<double> c = std::nullopt) {
    multi_index::check_dim(dim);
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw error(errc::alpha_out_of_range, "fractal index must lie in (0, 2], got " + std::to_string(alpha));
    const double scale = c.value_or(default_scale(dim));
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw error(errc::invalid_argument, "scale c must be positive");
    return covariance_model{alpha, scale, dim};
  }

  double at_norm(double r) const { return r == 0.0 ? 1.0 : std::exp(-c * std::pow(r, alpha)); }

  double operator()(std::span<const double> t) const {
    double r2 = 0.0;
    for (double x : t) r2 += x * x;
    return at_norm(std::sqrt(r2));
  }
};

inline double gamma(const covariance_model& model, std::span<const double> t) { return model(t); }

/// nu(h) = E{X(t+h) - X(t)}^2 = 2(gamma(0) - gamma(h)).
inline double theoretical_variogram(const covariance_model& model, std::span<const double> h) {
  // 2(1 - exp(-c r^alpha)) via expm1 to avoid cancellation at small lags.
  double r2 = 0.0;
  for (double x : h) r2 += x * x;
  return r2 == 0.0 ? 0.0 : -2.0 * std::expm1(-model.c * std::pow(std::sqrt(r2), model.alpha));
}

/// D = d + 1 - alpha / 2.
inline double fractal_dimension(double alpha, int d) {
  multi_index::check_dim(d);
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw error(errc::alpha_out_of_range, "fractal index must lie in (0, 2], got " + std::to_string(alpha));
  return d + 1.0 - alpha / 2.0;
}

/// Sampling layout: interior points i/n0 for 0 <= i < n0 plus `margin` extra
/// points on each side of every axis.
struct grid_spec {
  multi_index n0{1000};
  std::int64_t margin = 0;

  static grid_spec make(multi_index n0, std::int64_t margin) {
    multi_index::check_dim(n0.dim);
    for (int l = 0; l < n0.dim; ++l)
      if (n0[l] < 1) throw error(errc::invalid_argument, "n0 must be positive on every axis");
    if (margin < 0) throw error(errc::invalid_argument, "margin must be nonnegative");
    if (n0.dim == 2) {
      const double ratio = static_cast<double>(n0[0]) / static_cast<double>(n0[1]);
      if (ratio < 0.25 || ratio > 4.0)
        throw error(errc::invalid_argument, "aspect ratio n0[1]/n0[2] must lie in [1/4, 4]");
    }
    return grid_spec{n0, margin};
  }

  int dim() const { return n0.dim; }
  /// n = prod n0[l]
  std::int64_t n() const { return product(n0); }
  /// Points per axis including both margins.
  multi_index extent() const { return n0 + multi_index::filled(dim(), 2 * margin); }
  multi_index lo() const { return multi_index::filled(dim(), -margin); }
  double spacing(int l) const { return 1.0 / static_cast<double>(n0[l]); }
};

/// gamma(k / n0) for an integer lag k.
inline double gamma_at_lag(const covariance_model& model, const grid_spec& grid, const multi_index& k) {
  double r2 = 0.0;
  for (int l = 0; l < grid.dim(); ++l) {
    const double t = static_cast<double>(k[l]) * grid.spacing(l);
    r2 += t * t;
  }
  return model.at_norm(std::sqrt(r2));
}

/// mu = n^{alpha/d} sum_j sum_k a_j a_k gamma((j - k)/n0) for an arbitrary
/// (already dilated) coefficient array. Pairs are grouped by lag first.
inline double mu_u(const covariance_model& model, const coeff_map& dilated, const grid_spec& grid) {
  std::map<multi_index, double, lex_less> by_lag;
  for (const auto& [j, a] : dilated)
    for (const auto& [k, b] : dilated) by_lag[j - k] += a * b;
  double s = 0.0;
  for (const auto& [lag, w] : by_lag) s += w * gamma_at_lag(model, grid, lag);
  const double value = std::pow(static_cast<double>(grid.n()), model.alpha / grid.dim()) * s;
  if (!(value > 1e-300))
    throw error(errc::degenerate_increment, "increment variance is not positive (" + std::to_string(value) + ")");
  return value;
}

inline double mu_u(const covariance_model& model, const increment& inc, int u, const grid_spec& grid) {
  if (inc.dim() != grid.dim() || model.dim != grid.dim())
    throw error(errc::invalid_argument, "increment, model and grid dimensions differ");
  return mu_u(model, dilate(inc, u).coeffs(), grid);
}

/// alpha_n = sum_u L_u log mu_u, the finite-n centering of the estimator.
inline double alpha_centering(const covariance_model& model, const regression_weights& weights,
                              const increment& inc, const grid_spec& grid) {
  double s = 0.0;
  for (int u = 1; u <= weights.m(); ++u) s += weights.L[u - 1] * std::log(mu_u(model, inc, u, grid));
  return s;
}

}  // namespace fractal
