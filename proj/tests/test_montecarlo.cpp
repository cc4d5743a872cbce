#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fractal/montecarlo.hpp"

using namespace fractal;

TEST(Summarize, Examples) {
  const std::vector<double> a{1.0, 1.1, 1.2};
  const auto s = summarize(a, 1.0);
  EXPECT_NEAR(s.bias, 0.1, 1e-15);
  EXPECT_NEAR(s.sd, 0.1, 1e-15);
  EXPECT_NEAR(s.mse, 0.05 / 3.0, 1e-15);
  EXPECT_EQ(s.R, 3);

  const std::vector<double> same(10, 0.7);
  const auto z = summarize(same, 0.7);
  EXPECT_EQ(z.bias, 0.0);
  EXPECT_EQ(z.sd, 0.0);
  EXPECT_EQ(z.mse, 0.0);
  EXPECT_THROW(summarize(std::vector<double>{1.0}, 1.0), error);
}

TEST(Summarize, MseIdentity) {
  // mse = bias^2 + sd^2 (R - 1)/R.
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(1.0, 0.05);
  for (int R : {2, 5, 100, 1000}) {
    std::vector<double> a(static_cast<std::size_t>(R));
    for (double& v : a) v = z(gen);
    const auto s = summarize(a, 0.97);
    EXPECT_NEAR(s.mse, s.bias * s.bias + s.sd * s.sd * (R - 1.0) / R, 1e-12);
  }
}

TEST(RunExperiment, ManualPipeline) {
  experiment_spec spec;
  spec.model = covariance_model::make(1.0, 1);
  spec.grid = grid_spec::make(multi_index(500), 4);
  spec.replications = 2;
  spec.master_seed = 77;
  const auto alphas = run_experiment(spec);
  const auto emb = build_embedding(spec.model, spec.grid);
  for (int r = 0; r < 2; ++r) {
    const auto y = sample_field(emb, replication_seed(77, static_cast<std::uint64_t>(r))).first;
    EXPECT_EQ(alphas[r], estimate_alpha(y, increment::forward_difference(), ols_weights(4)).alpha_hat);
  }
  spec.replications = 1;
  try {
    run_experiment(spec);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::too_few_replications);
  }
}

TEST(RunExperiment, DeterministicAndJobInvariant) {
  experiment_spec spec;
  spec.model = covariance_model::make(0.6, 1);
  spec.grid = grid_spec::make(multi_index(400), 10);
  spec.transform = transform::chi_squared{};
  spec.estimator = {increment::second_difference(), 10, weight_scheme::gls};
  spec.replications = 24;
  spec.master_seed = 123;
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  spec.jobs = 4;
  const auto c = run_experiment(spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  spec.master_seed = 124;
  EXPECT_NE(a, run_experiment(spec));
}

TEST(RunExperiment, ReplicationFailureAborts) {
  experiment_spec spec;
  spec.model = covariance_model::make(1.0, 1);
  spec.grid = grid_spec::make(multi_index(100), 4);
  spec.transform = transform::affine{1.0, 0.0};
  spec.replications = 3;
  // Margin too small for m = 8.
  spec.estimator = {increment::forward_difference(), 8, weight_scheme::ols};
  try {
    run_experiment(spec);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::insufficient_margin);
  }
  EXPECT_EQ(required_margin(increment::forward_difference(), 8), 8);
  EXPECT_EQ(required_margin(increment::second_difference(), 10), 10);
  EXPECT_EQ(required_margin(increment::square(), 4), 4);
}

TEST(ParallelFor, LowestIndexErrorWins) {
  try {
    parallel_for(50, 4, [](int r) {
      if (r == 7 || r == 30) throw error(errc::zero_variogram, std::to_string(r));
    });
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.message(), "7");
  }
}

TEST(VarianceRatio, Report) {
  experiment_spec spec;
  spec.model = covariance_model::make(1.9, 1);
  spec.grid = grid_spec::make(multi_index(1000), 4);
  spec.replications = 10;
  spec.master_seed = 5;
  const auto rows = variance_ratio_report(spec, {1000, 1000});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].empirical_ratio, 1.0);
  EXPECT_EQ(*rows[1].asymptotic_ratio, 1.0);

  const auto big = variance_ratio_report(spec, {1000, 10000});
  EXPECT_EQ(big[1].n, 10000);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", *big[1].asymptotic_ratio);
  EXPECT_STREQ(buf, "0.63");

  // Nonaffine at alpha = 1/2 sits on a regime boundary: no annotation.
  spec.model = covariance_model::make(0.5, 1);
  spec.transform = transform::uniform{};
  spec.estimator.inc = increment::second_difference();
  const auto boundary = variance_ratio_report(spec, {200, 400});
  EXPECT_FALSE(boundary[1].asymptotic_ratio.has_value());
  EXPECT_EQ(boundary[1].rate, "boundary");
}

namespace {

/// sup over sample points of max(|F_emp(x-) - F(x)|, |F_emp(x) - F(x)|),
/// counting ties and left limits directly.
double brute_ks(const std::vector<double>& x) {
  double D = 0.0;
  const double R = static_cast<double>(x.size());
  for (double xi : x) {
    int below = 0, at_or_below = 0;
    for (double xj : x) {
      if (xj < xi) ++below;
      if (xj <= xi) ++at_or_below;
    }
    const double F = std_normal_cdf(xi);
    D = std::max({D, std::abs(below / R - F), std::abs(at_or_below / R - F)});
  }
  return D;
}

}  // namespace

TEST(Ks, StatisticMatchesBruteForce) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> z;
  for (int R : {5, 17, 100}) {
    std::vector<double> x(static_cast<std::size_t>(R));
    for (double& v : x) v = 3.0 + 0.2 * z(gen);
    const auto res = ks_normality(x);
    // Oracle on the standardized sample.
    const auto st = summarize(x, 0.0);
    std::vector<double> s(x);
    for (double& v : s) v = (v - st.mean_alpha) / st.sd;
    EXPECT_NEAR(res.statistic, brute_ks(s), 1e-14);
    EXPECT_TRUE(res.estimated_parameters);
    EXPECT_GE(res.p_value, 0.0);
    EXPECT_LE(res.p_value, 1.0);
  }
  EXPECT_THROW(ks_normality(std::vector<double>{1, 2, 3, 4}), error);
}

TEST(Ks, SinglePointAtZero) {
  const std::vector<double> x{0.0};
  EXPECT_EQ(ks_statistic(x, std_normal_cdf), 0.5);
}

TEST(Ks, PValueMonotone) {
  double prev = 1.0;
  for (int k = 1; k <= 300; ++k) {
    const double D = k * 0.003;
    const double p = kolmogorov_sf(std::sqrt(100.0) * D);
    EXPECT_LT(p, prev + 1e-15);
    if (p > 1e-300 && prev < 1.0) {
      EXPECT_LT(p, prev);
    }
    prev = p;
  }
  // Continuity across the two series.
  EXPECT_NEAR(kolmogorov_sf(1.18 - 1e-9), kolmogorov_sf(1.18 + 1e-9), 1e-8);
  // Reference values of the Kolmogorov distribution.
  EXPECT_NEAR(kolmogorov_sf(1.3580986393225505), 0.05, 1e-9);
  EXPECT_NEAR(kolmogorov_sf(0.8275735551899077), 0.5, 1e-9);
}

TEST(Qq, Points) {
  const std::vector<double> a{0.4, 0.1, 0.3, 0.2};
  const auto q = qq_points(a);
  ASSERT_EQ(q.points.size(), 4u);
  for (std::size_t r = 1; r < 4; ++r) {
    EXPECT_GT(q.points[r].first, q.points[r - 1].first);
    EXPECT_GE(q.points[r].second, q.points[r - 1].second);
  }
  EXPECT_NEAR(q.points[0].first, std_normal_quantile(0.125), 1e-15);
  // Type-7 quartiles of {0.1, 0.2, 0.3, 0.4}: 0.175 and 0.325; normal
  // quartiles -+0.674489750196081743.
  const double z3 = 0.674489750196081743;
  EXPECT_NEAR(q.slope, 0.15 / (2.0 * z3), 1e-14);
  EXPECT_NEAR(q.intercept, 0.25, 1e-14);
  EXPECT_THROW(qq_points(std::vector<double>{1.0}), error);
}
