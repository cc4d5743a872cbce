#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fractal/covariance.hpp"
#include "fractal/regression.hpp"

using namespace fractal;

TEST(Gamma, Examples) {
  const auto m1 = covariance_model::make(1.0, 1);
  const double zero[] = {0.0};
  const double one[] = {1.0};
  const double minus_one[] = {-1.0};
  EXPECT_EQ(m1(zero), 1.0);
  EXPECT_NEAR(m1(one), 0.36787944117144233, 1e-15);
  EXPECT_EQ(m1(one), m1(minus_one));
  EXPECT_EQ(m1.c, 1.0);

  const auto m2 = covariance_model::make(0.5, 2);
  EXPECT_EQ(m2.c, 10.0);
  const double t[] = {0.01, 0.0};
  EXPECT_NEAR(m2(t), std::exp(-1.0), 1e-15);
}

TEST(Gamma, ValidCorrelation) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0), a(0.05, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = covariance_model::make(a(gen), 2);
    const double t[] = {unif(gen), unif(gen)};
    const double v = m(t);
    EXPECT_LE(std::abs(v), 1.0);
    const double neg[] = {-t[0], -t[1]};
    EXPECT_EQ(v, m(neg));
  }
  EXPECT_THROW(covariance_model::make(0.0, 1), error);
  EXPECT_THROW(covariance_model::make(2.5, 1), error);
  EXPECT_NO_THROW(covariance_model::make(2.0, 1));
}

TEST(Variogram, Examples) {
  const auto m = covariance_model::make(1.0, 1);
  const double zero[] = {0.0};
  EXPECT_EQ(theoretical_variogram(m, zero), 0.0);
  const double h[] = {0.001};
  // 2(1 - exp(-0.001)), evaluated in extended precision.
  EXPECT_NEAR(theoretical_variogram(m, h), 0.00199900033325001666, 1e-17);

  for (const double alpha : {1.0, 1.7}) {
    const auto mm = covariance_model::make(alpha, 1);
    const double tiny[] = {1e-6};
    EXPECT_NEAR(theoretical_variogram(mm, tiny) / (2.0 * std::pow(1e-6, alpha)), 1.0, 1e-4);
  }
}

TEST(Variogram, NonnegativeAndMonotone) {
  for (const double alpha : {0.1, 0.7, 1.3, 1.9}) {
    const auto m = covariance_model::make(alpha, 1);
    double prev = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double h[] = {k * 0.01};
      const double v = theoretical_variogram(m, h);
      EXPECT_GE(v, 0.0);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(FractalDimension, Examples) {
  EXPECT_EQ(fractal_dimension(1.0, 1), 1.5);
  EXPECT_EQ(fractal_dimension(2.0, 2), 2.0);
  EXPECT_EQ(fractal_dimension(0.5, 2), 2.75);
  EXPECT_THROW(fractal_dimension(0.0, 1), error);
  EXPECT_THROW(fractal_dimension(2.01, 1), error);
  double prev = 3.0;
  for (int k = 1; k <= 200; ++k) {
    const double D = fractal_dimension(k * 0.01, 1);
    EXPECT_LT(D, prev);
    EXPECT_GE(D, 1.0);
    EXPECT_LT(D, 2.0);
    prev = D;
  }
}

namespace {

/// E{(sum_j a_j^u X((i+j)/n0))^2} written as the full double sum over pairs
/// of coefficients, multiplied by n^(alpha/d).
double mu_brute(const covariance_model& model, const increment& inc, int u, const grid_spec& grid) {
  const auto dil = dilate(inc, u);
  double s = 0.0;
  for (const auto& [j, a] : dil.coeffs())
    for (const auto& [jp, b] : dil.coeffs()) {
      std::vector<double> t(static_cast<std::size_t>(grid.dim()));
      for (int l = 0; l < grid.dim(); ++l) t[l] = static_cast<double>(j[l] - jp[l]) / static_cast<double>(grid.n0[l]);
      s += a * b * model(t);
    }
  return std::pow(static_cast<double>(grid.n()), model.alpha / grid.dim()) * s;
}

}  // namespace

TEST(MuU, Examples) {
  const auto model = covariance_model::make(1.0, 1);
  const auto grid = grid_spec::make(multi_index(1000), 4);
  const auto inc = increment::forward_difference();
  // 1000 * 2(1 - exp(-0.001)), extended precision.
  EXPECT_NEAR(mu_u(model, inc, 1, grid), 1.99900033325001666, 1e-13);

  // mu_u = n^alpha nu(u/n) for the forward difference.
  for (const double alpha : {0.1, 0.9, 1.9})
    for (int u = 1; u <= 6; ++u) {
      const auto m = covariance_model::make(alpha, 1);
      const double h[] = {u / 1000.0};
      EXPECT_NEAR(mu_u(m, inc, u, grid), std::pow(1000.0, alpha) * theoretical_variogram(m, h),
                  1e-10 * mu_u(m, inc, u, grid));
    }
}

TEST(MuU, BruteForceOracle) {
  const std::vector<std::pair<increment, grid_spec>> cases = {
      {increment::forward_difference(), grid_spec::make(multi_index(1000), 10)},
      {increment::second_difference(), grid_spec::make(multi_index(2000), 10)},
      {increment::square(), grid_spec::make(multi_index(50, 50), 4)},
      {increment::square(), grid_spec::make(multi_index(40, 80), 4)}};
  for (const auto& [inc, grid] : cases)
    for (const double alpha : {0.1, 1.0, 1.9}) {
      const auto model = covariance_model::make(alpha, grid.dim());
      for (int u = 1; u <= 4; ++u) {
        const double oracle = mu_brute(model, inc, u, grid);
        EXPECT_NEAR(mu_u(model, inc, u, grid), oracle, 1e-10 * oracle) << inc.name() << " alpha=" << alpha;
      }
    }
}

TEST(MuU, Degenerate) {
  // Dilation of a valid increment never vanishes; the degenerate check guards
  // raw coefficient maps whose quadratic form collapses.
  const auto model = covariance_model::make(1.0, 1);
  const auto grid = grid_spec::make(multi_index(100), 4);
  try {
    mu_u(model, coeff_map{{multi_index(0), 0.0}}, grid);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_increment);
  }
}

TEST(AlphaCentering, Examples) {
  const auto grid = grid_spec::make(multi_index(1000), 4);
  const auto inc = increment::forward_difference();
  const auto model = covariance_model::make(1.0, 1);
  const double an = alpha_centering(model, ols_weights(4), inc, grid);
  EXPECT_NEAR(an, 1.0, 0.01);
  // Extended-precision evaluation of sum_u L_u log mu_u.
  EXPECT_NEAR(an, 0.998947961071598538, 1e-12);

  // m = 2: (log mu_2 - log mu_1) / log 2.
  const double a2 = alpha_centering(model, ols_weights(2), inc, grid);
  EXPECT_NEAR(a2, (std::log(mu_u(model, inc, 2, grid)) - std::log(mu_u(model, inc, 1, grid))) / std::log(2.0), 1e-12);

  // Exact power law mu_u = 2c u^alpha gives alpha exactly.
  const auto w = ols_weights(6);
  for (const double alpha : {0.2, 1.0, 1.8}) {
    double s = 0.0;
    for (int u = 1; u <= 6; ++u) s += w.L[u - 1] * std::log(2.0 * std::pow(u, alpha));
    EXPECT_NEAR(s, alpha, 1e-12);
  }

  // Centering error shrinks toward zero as alpha grows (smaller remainder).
  const double e_small = alpha_centering(covariance_model::make(0.1, 1), ols_weights(4), inc, grid) - 0.1;
  const double e_big = alpha_centering(covariance_model::make(1.9, 1), ols_weights(4), inc, grid) - 1.9;
  EXPECT_NEAR(e_small, -0.02443, 5e-5);
  EXPECT_NEAR(e_big, -8.76e-6, 5e-8);
}

TEST(GridSpec, Validation) {
  const auto g = grid_spec::make(multi_index(50, 100), 4);
  EXPECT_EQ(g.n(), 5000);
  EXPECT_EQ(g.extent(), multi_index(58, 108));
  EXPECT_EQ(g.lo(), multi_index(-4, -4));
  EXPECT_THROW(grid_spec::make(multi_index(10, 100), 4), error);
  EXPECT_THROW(grid_spec::make(multi_index(0), 4), error);
  EXPECT_THROW(grid_spec::make(multi_index(10), -1), error);
}
