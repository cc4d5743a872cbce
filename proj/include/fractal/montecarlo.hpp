#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fractal/asymptotics.hpp"
#include "fractal/covariance.hpp"
#include "fractal/error.hpp"
#include "fractal/estimators.hpp"
#include "fractal/fieldgen.hpp"
#include "fractal/normal.hpp"
#include "fractal/rng.hpp"
#include "fractal/summation.hpp"
#include "fractal/transforms.hpp"

namespace fractal {

struct experiment_spec {
  covariance_model model;
  grid_spec grid;
  point_transform transform = transform::identity{};
  estimator_config estimator;
  int replications = 100;
  std::uint64_t master_seed = 0;
  /// Worker threads; results do not depend on this.
  int jobs = 1;
  embedding_options embedding;
};

/// Smallest margin that holds the increment dilated m times.
inline std::int64_t required_margin(const increment& inc, int m) {
  std::int64_t r = 0;
  for (int l = 0; l < inc.dim(); ++l) r = std::max(r, inc.support_radius()[l] * m);
  return r;
}

/// Runs task(r) for r = 0..count-1 on `jobs` threads. The first exception
/// (lowest replication index) is rethrown after all workers stop.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
  jobs = std::max(1, std::min(jobs, count));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  int err_index = count;
  std::exception_ptr err;

  auto worker = [&] {
    for (int r = next++; r < count && !failed.load(); r = next++) {
      try {
        task(r);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (r < err_index) {
          err_index = r;
          err = std::current_exception();
        }
        failed = true;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (err) std::rethrow_exception(err);
}

/// alphas[t][e][r]: every transform and every estimator applied to the same
/// simulated Gaussian field of replication r (seeded by replication_seed).
inline std::vector<std::vector<std::vector<double>>> run_batch(const covariance_model& model, const grid_spec& grid,
                                                               const std::vector<point_transform>& transforms,
                                                               const std::vector<estimator_config>& estimators,
                                                               int replications, std::uint64_t master_seed,
                                                               int jobs = 1, const embedding_options& eopts = {}) {
  if (replications < 1) throw error(errc::too_few_replications, "need at least one replication");
  for (const auto& e : estimators) detail::check_margin(grid, e.inc, e.m);
  const embedding emb = build_embedding(model, grid, eopts);

  std::vector<std::vector<std::vector<double>>> out(
      transforms.size(), std::vector<std::vector<double>>(estimators.size(), std::vector<double>(replications)));

  parallel_for(replications, jobs, [&](int r) {
    try {
      const auto seed = replication_seed(master_seed, static_cast<std::uint64_t>(r));
      const field_sample gauss = sample_field(emb, seed).first;
      for (std::size_t t = 0; t < transforms.size(); ++t) {
        const field_sample data = transform_field(gauss, transforms[t]);
        for (std::size_t e = 0; e < estimators.size(); ++e)
          out[t][e][static_cast<std::size_t>(r)] = estimate(data, estimators[e], model.c).alpha_hat;
      }
    } catch (const error& e) {
      throw error(e.code(), "replication " + std::to_string(r) + ": " + e.message());
    }
  });
  return out;
}

/// alpha_hat for replications 0..R-1; deterministic given the master seed.
inline std::vector<double> run_experiment(const experiment_spec& spec) {
  if (spec.replications < 2) throw error(errc::too_few_replications, "need R >= 2");
  return run_batch(spec.model, spec.grid, {spec.transform}, {spec.estimator}, spec.replications, spec.master_seed,
                   spec.jobs, spec.embedding)[0][0];
}

struct summary_stats {
  double bias = 0.0;
  double sd = 0.0;
  double mse = 0.0;
  double mean_alpha = 0.0;
  int R = 0;
};

inline summary_stats summarize(std::span<const double> alphas, double alpha_true) {
  if (alphas.size() < 2) throw error(errc::too_few_replications, "summary statistics need R >= 2");
  const auto R = static_cast<double>(alphas.size());
  summary_stats s;
  s.R = static_cast<int>(alphas.size());
  s.mean_alpha = pairwise_sum(alphas) / R;
  std::vector<double> dev2(alphas.size()), err2(alphas.size());
  for (std::size_t r = 0; r < alphas.size(); ++r) {
    dev2[r] = (alphas[r] - s.mean_alpha) * (alphas[r] - s.mean_alpha);
    err2[r] = (alphas[r] - alpha_true) * (alphas[r] - alpha_true);
  }
  s.bias = s.mean_alpha - alpha_true;
  s.sd = std::sqrt(pairwise_sum(dev2) / (R - 1.0));
  s.mse = pairwise_sum(err2) / R;
  return s;
}

inline double sample_variance(std::span<const double> x) {
  const double sd = summarize(x, 0.0).sd;
  return sd * sd;
}

struct ratio_row {
  /// Side length per axis (n0 = side for d = 1, (side, side) for d = 2).
  std::int64_t side = 0;
  std::int64_t n = 0;
  double variance = 0.0;
  /// var(alpha_hat; this size) / var(alpha_hat; first size)
  double empirical_ratio = 1.0;
  /// Asymptotic annotation; absent at a regime boundary.
  std::optional<double> asymptotic_ratio;
  std::string rate;
};

/// Empirical variance ratios against the first (smallest) size, annotated
/// with the predicted asymptotic ratio. The regime is affine when the experiment's
/// transform is identity or affine.
inline std::vector<ratio_row> variance_ratio_report(const experiment_spec& spec, const std::vector<std::int64_t>& sides) {
  if (sides.size() < 2) throw error(errc::invalid_argument, "need at least two sample sizes");
  const int d = spec.grid.dim();
  std::optional<rate_class> rc;
  std::string rate_label = "boundary";
  try {
    rc = variance_class(spec.model.alpha, spec.estimator.inc.order(), d, is_affine(spec.transform));
    rate_label = rate_name(*rc);
  } catch (const error& e) {
    if (e.code() != errc::boundary_alpha) throw;
  }

  std::vector<ratio_row> rows;
  for (const auto side : sides) {
    experiment_spec s = spec;
    const multi_index n0 = d == 1 ? multi_index(side) : multi_index(side, side);
    s.grid = grid_spec::make(n0, spec.grid.margin);
    ratio_row row;
    row.side = side;
    row.n = s.grid.n();
    row.variance = sample_variance(run_experiment(s));
    row.rate = rate_label;
    rows.push_back(row);
  }
  for (auto& row : rows) {
    row.empirical_ratio = row.variance / rows.front().variance;
    if (rc) row.asymptotic_ratio = predicted_ratio(*rc, static_cast<double>(rows.front().n), static_cast<double>(row.n));
  }
  return rows;
}

/// sup_x |F_emp(x) - F(x)| for an ascending sample, checking both sides of
/// every jump of the empirical distribution function.
template <typename Cdf>
double ks_statistic(std::span<const double> sorted, Cdf&& cdf) {
  const auto R = static_cast<double>(sorted.size());
  double D = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    D = std::max({D, static_cast<double>(i + 1) / R - F, F - static_cast<double>(i) / R});
  }
  return D;
}

/// P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // P(K <= lambda) = sqrt(2 pi)/lambda sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(c * (2 * k - 1) * (2 * k - 1));
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s;
  }
  // 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2)
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

struct ks_result {
  double statistic = 0.0;
  double p_value = 1.0;
  /// The mean and SD were estimated from the sample, so the asymptotic
  /// Kolmogorov p-value is anti-conservative (Lilliefors' caveat).
  bool estimated_parameters = true;
};

/// KS distance between the standardized sample and N(0, 1), with the p-value
/// of the asymptotic Kolmogorov law at sqrt(R) D.
inline ks_result ks_normality(std::span<const double> alphas) {
  if (alphas.size() < 5) throw error(errc::too_few_replications, "KS normality check needs R >= 5");
  const auto st = summarize(alphas, 0.0);
  if (!(st.sd > 0.0)) throw error(errc::invalid_argument, "sample has zero spread");
  std::vector<double> z(alphas.begin(), alphas.end());
  for (double& v : z) v = (v - st.mean_alpha) / st.sd;
  std::sort(z.begin(), z.end());
  ks_result r;
  r.statistic = ks_statistic(z, std_normal_cdf);
  r.p_value = kolmogorov_sf(std::sqrt(static_cast<double>(z.size())) * r.statistic);
  return r;
}

/// Sample quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7), on an ascending sample.
inline double sample_quantile(std::span<const double> sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct qq_result {
  /// (Phi^{-1}((r - 0.5)/R), r-th smallest value)
  std::vector<std::pair<double, double>> points;
  /// Reference line through the first and third sample quartiles plotted
  /// against the corresponding standard normal quartiles.
  double slope = 0.0;
  double intercept = 0.0;
};

inline qq_result qq_points(std::span<const double> alphas) {
  if (alphas.size() < 2) throw error(errc::too_few_replications, "QQ points need R >= 2");
  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  const auto R = static_cast<double>(sorted.size());
  qq_result q;
  for (std::size_t r = 0; r < sorted.size(); ++r)
    q.points.emplace_back(std_normal_quantile((static_cast<double>(r) + 0.5) / R), sorted[r]);
  const double q1 = sample_quantile(sorted, 0.25);
  const double q3 = sample_quantile(sorted, 0.75);
  const double z1 = std_normal_quantile(0.25);
  const double z3 = std_normal_quantile(0.75);
  q.slope = (q3 - q1) / (z3 - z1);
  q.intercept = q1 - q.slope * z1;
  return q;
}

}  // namespace fractal
