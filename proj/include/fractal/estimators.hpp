#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractal/covariance.hpp"
#include "fractal/error.hpp"
#include "fractal/fieldgen.hpp"
#include "fractal/increment.hpp"
#include "fractal/regression.hpp"
#include "fractal/summation.hpp"

namespace fractal {

/// Zbar_u = n^{-1} sum_{i in I_n} {sum_j a_j^u g_{i+j}}^2 for u = 1..m.
struct variogram_summary {
  std::vector<double> zbar;
  std::int64_t n = 0;
  std::string increment;
  int m() const { return static_cast<int>(zbar.size()); }
};

struct estimate_result {
  double alpha_hat = 0.0;
  double dimension_hat = 0.0;
  /// alpha_hat fell outside (0, 2] and was clamped for dimension_hat.
  bool clamped = false;
  regression_weights weights;
  std::vector<double> zbar;
  /// log Zbar_u minus the fitted line const + alpha_hat log u.
  std::vector<double> residuals;
  /// First-pass OLS estimate used to parameterize GLS weights.
  std::optional<double> pilot_alpha;
};

struct estimator_config {
  increment inc = increment::forward_difference();
  int m = 4;
  weight_scheme scheme = weight_scheme::ols;
};

namespace detail {

inline void check_margin(const grid_spec& grid, const increment& inc, int m) {
  const auto [lo, hi] = dilate(inc, m).reach();
  for (int l = 0; l < grid.dim(); ++l)
    if (-lo[l] > grid.margin || hi[l] > grid.margin)
      throw error(errc::insufficient_margin, "margin " + std::to_string(grid.margin) +
                                                 " cannot hold the increment dilated by m = " + std::to_string(m) +
                                                 " (needs " + std::to_string(std::max(-lo[l], hi[l])) + ")");
}

}  // namespace detail

inline variogram_summary empirical_variogram(const field_sample& data, const increment& inc, int m) {
  if (m < 2) throw error(errc::m_too_small, "need at least m = 2 dilations, got " + std::to_string(m));
  const grid_spec& grid = data.grid;
  if (inc.dim() != grid.dim() || data.values.dim() != grid.dim())
    throw error(errc::invalid_argument, "increment and data dimensions differ");
  detail::check_margin(grid, inc, m);

  const field_grid& g = data.values;
  const auto vals = g.values();
  const std::int64_t n = grid.n();
  const std::int64_t rows = grid.n0[0];
  const std::int64_t cols = grid.dim() == 2 ? grid.n0[1] : 1;

  variogram_summary out;
  out.n = n;
  out.increment = inc.name();
  out.zbar.resize(static_cast<std::size_t>(m));
  std::vector<double> squares(static_cast<std::size_t>(n));
  std::vector<std::pair<std::int64_t, double>> taps;

  for (int u = 1; u <= m; ++u) {
    taps.clear();
    const auto dil = dilate(inc, u);
    for (const auto& [j, a] : dil.coeffs()) taps.emplace_back(g.stride_of(j), a);
    std::size_t k = 0;
    for (std::int64_t i0 = 0; i0 < rows; ++i0) {
      const multi_index row_start = grid.dim() == 2 ? multi_index(i0, 0) : multi_index(i0);
      const auto base = static_cast<std::int64_t>(g.offset(row_start));
      for (std::int64_t i1 = 0; i1 < cols; ++i1, ++k) {
        double s = 0.0;
        for (const auto& [stride, a] : taps) s += a * vals[static_cast<std::size_t>(base + i1 + stride)];
        squares[k] = s * s;
      }
    }
    const double z = pairwise_sum(squares) / static_cast<double>(n);
    if (!(z > 0.0))
      throw error(errc::zero_variogram, "Zbar_" + std::to_string(u) +
                                            " is zero: the data are constant along the increment");
    out.zbar[static_cast<std::size_t>(u - 1)] = z;
  }
  return out;
}

/// Delta-method covariance of (log Zbar_1, ..., log Zbar_m) for Gaussian data
/// with the given covariance model:
///   cov(Zbar_u, Zbar_v) = (2/n^2) sum_{i,i'} c_uv(i - i')^2,
///   c_uv(k) = sum_{j,j'} a_j^u a_j'^v gamma((k + j - j')/n0),
/// collapsed to a single sum over lags k with multiplicity prod_l (n0[l] - |k[l]|),
/// then divided by E Zbar_u E Zbar_v = c_uu(0) c_vv(0).
inline Eigen::MatrixXd log_variogram_covariance(const covariance_model& model, const increment& inc, int m,
                                                const grid_spec& grid) {
  const int d = grid.dim();
  if (inc.dim() != d || model.dim != d) throw error(errc::invalid_argument, "increment, model and grid dimensions differ");

  std::vector<dilated_increment> dil;
  dil.reserve(static_cast<std::size_t>(m));
  for (int u = 1; u <= m; ++u) dil.push_back(dilate(inc, u));

  // gamma at every integer lag the double sum can reach.
  const multi_index reach = inc.support_radius() * (2 * m);
  multi_index half = multi_index::zero(d);
  for (int l = 0; l < d; ++l) half[l] = grid.n0[l] - 1 + reach[l];
  const std::int64_t w1 = d == 2 ? 2 * half[1] + 1 : 1;
  std::vector<double> table(static_cast<std::size_t>((2 * half[0] + 1) * w1));
  for (std::int64_t t0 = -half[0]; t0 <= half[0]; ++t0) {
    if (d == 1) {
      table[static_cast<std::size_t>(t0 + half[0])] = gamma_at_lag(model, grid, multi_index(t0));
      continue;
    }
    for (std::int64_t t1 = -half[1]; t1 <= half[1]; ++t1)
      table[static_cast<std::size_t>((t0 + half[0]) * w1 + t1 + half[1])] =
          gamma_at_lag(model, grid, multi_index(t0, t1));
  }
  auto table_offset = [&](const multi_index& t) {
    return d == 1 ? t[0] + half[0] : (t[0] + half[0]) * w1 + t[1] + half[1];
  };

  const std::int64_t k1max = d == 2 ? grid.n0[1] - 1 : 0;
  const auto n = static_cast<double>(grid.n());
  Eigen::MatrixXd cov(m, m);
  std::vector<double> mean(static_cast<std::size_t>(m));

  for (int u = 0; u < m; ++u) {
    for (int v = u; v < m; ++v) {
      std::vector<std::pair<std::int64_t, double>> pairs;
      for (const auto& [j, a] : dil[u].coeffs())
        for (const auto& [jp, b] : dil[v].coeffs()) pairs.emplace_back(table_offset(j - jp) - table_offset(multi_index::zero(d)), a * b);

      double acc = 0.0;
      double at_zero = 0.0;
      for (std::int64_t k0 = -(grid.n0[0] - 1); k0 <= grid.n0[0] - 1; ++k0) {
        for (std::int64_t k1 = -k1max; k1 <= k1max; ++k1) {
          const multi_index k = d == 2 ? multi_index(k0, k1) : multi_index(k0);
          const std::int64_t base = table_offset(k);
          double c = 0.0;
          for (const auto& [off, w] : pairs) c += w * table[static_cast<std::size_t>(base + off)];
          double mult = static_cast<double>(grid.n0[0] - std::abs(k0));
          if (d == 2) mult *= static_cast<double>(grid.n0[1] - std::abs(k1));
          acc += mult * c * c;
          if (k0 == 0 && k1 == 0) at_zero = c;
        }
      }
      cov(u, v) = cov(v, u) = 2.0 * acc / (n * n);
      if (u == v) mean[static_cast<std::size_t>(u)] = at_zero;
    }
  }
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) cov(u, v) /= mean[static_cast<std::size_t>(u)] * mean[static_cast<std::size_t>(v)];
  return cov;
}

/// GLS weights under a Gaussian plug-in covariance at the pilot model. For
/// m = 2 the two constraints determine L, so the OLS weights are returned.
inline regression_weights gls_weights(int m, const covariance_model& pilot, const increment& inc,
                                      const grid_spec& grid) {
  if (m < 2) throw error(errc::m_too_small, "need at least m = 2 dilations, got " + std::to_string(m));
  if (m == 2) {
    auto w = ols_weights(2);
    w.scheme = weight_scheme::gls;
    return w;
  }
  return constrained_weights(log_variogram_covariance(pilot, inc, m, grid));
}

inline double weighted_log_sum(const std::vector<double>& zbar, const regression_weights& w) {
  double s = 0.0;
  for (int u = 1; u <= w.m(); ++u) s += w.L[u - 1] * std::log(zbar[u - 1]);
  return s;
}

inline estimate_result estimate_from_variogram(const variogram_summary& vg, const regression_weights& weights,
                                               int dim) {
  if (weights.m() != vg.m())
    throw error(errc::invalid_argument, "weights have length " + std::to_string(weights.m()) +
                                            " but the variogram has " + std::to_string(vg.m()) + " dilations");
  estimate_result r;
  r.weights = weights;
  r.zbar = vg.zbar;
  r.alpha_hat = weighted_log_sum(vg.zbar, weights);

  double a = r.alpha_hat;
  if (!(a > 0.0)) {
    a = std::numeric_limits<double>::min();
    r.clamped = true;
  } else if (a > 2.0) {
    a = 2.0;
    r.clamped = true;
  }
  r.dimension_hat = fractal_dimension(a, dim);

  const int m = vg.m();
  double intercept = 0.0;
  for (int u = 1; u <= m; ++u) intercept += std::log(vg.zbar[u - 1]) - r.alpha_hat * std::log(static_cast<double>(u));
  intercept /= m;
  r.residuals.resize(static_cast<std::size_t>(m));
  for (int u = 1; u <= m; ++u)
    r.residuals[u - 1] = std::log(vg.zbar[u - 1]) - intercept - r.alpha_hat * std::log(static_cast<double>(u));
  return r;
}

/// alpha_hat = sum_u L_u log Zbar_u.
inline estimate_result estimate_alpha(const field_sample& data, const increment& inc,
                                      const regression_weights& weights) {
  return estimate_from_variogram(empirical_variogram(data, inc, weights.m()), weights, data.grid.dim());
}

/// Full estimator: OLS directly, or GLS with a pilot OLS estimate (clamped
/// to [0.05, 1.95]) plugged into the powered-exponential model with scale c.
inline estimate_result estimate(const field_sample& data, const estimator_config& cfg, double c) {
  const auto vg = empirical_variogram(data, cfg.inc, cfg.m);
  const auto ols = ols_weights(cfg.m);
  if (cfg.scheme == weight_scheme::ols) return estimate_from_variogram(vg, ols, data.grid.dim());

  const double pilot = std::clamp(weighted_log_sum(vg.zbar, ols), 0.05, 1.95);
  regression_weights w;
  try {
    w = gls_weights(cfg.m, covariance_model::make(pilot, data.grid.dim(), c), cfg.inc, data.grid);
  } catch (const error& e) {
    if (e.code() != errc::singular_weight_matrix) throw;
    w = ols;
    w.fallback = true;
  }
  auto r = estimate_from_variogram(vg, w, data.grid.dim());
  r.pilot_alpha = pilot;
  return r;
}

}  // namespace fractal
