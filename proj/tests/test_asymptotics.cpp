#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "fractal/asymptotics.hpp"

using namespace fractal;

namespace {

std::string two_places(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct annotated_row {
  double alpha;
  int p;
  bool affine;
  const char* expected[3];
};

}  // namespace

TEST(VarianceClass, Examples) {
  const auto a = variance_class(1.9, 0, 1, true);
  ASSERT_TRUE(std::holds_alternative<rate::power>(a));
  EXPECT_NEAR(std::get<rate::power>(a).exponent, -0.2, 1e-12);
  EXPECT_NEAR(predicted_ratio(a, 1000, 2000), 0.87, 0.005);

  const auto b = variance_class(0.1, 0, 1, false);
  ASSERT_TRUE(std::holds_alternative<rate::power>(b));
  EXPECT_NEAR(std::get<rate::power>(b).exponent, -0.2, 1e-12);

  const auto c = variance_class(1.0, 1, 1, true);
  EXPECT_EQ(predicted_ratio(c, 1000, 2000), 0.5);
  EXPECT_EQ(predicted_ratio(variance_class(1.0, 1, 1, false), 1000, 2000), 0.5);

  EXPECT_TRUE(std::holds_alternative<rate::inv_n_log_n>(variance_class(1.5, 0, 1, true)));
  EXPECT_NEAR(predicted_ratio(rate::inv_n_log_n{}, 1000, 2000), std::log(2000.0) / std::log(1000.0) / 2.0, 1e-15);
  EXPECT_EQ(rate_name(rate::inv_n{}), "n^-1");
}

TEST(VarianceClass, Errors) {
  for (const double alpha : {0.0, 2.0, -1.0}) {
    try {
      variance_class(alpha, 1, 1, true);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::alpha_out_of_range);
    }
  }
  try {
    variance_class(0.5, 1, 1, false);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::boundary_alpha);
  }
  try {
    variance_class(1.0, 1, 2, false);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::boundary_alpha);
  }
  EXPECT_NO_THROW(variance_class(0.5, 1, 1, true));
}

TEST(PredictedRatio, Examples) {
  EXPECT_NEAR(predicted_ratio(rate::inv_n{}, 1000, 10000), 0.10, 1e-15);
  EXPECT_EQ(two_places(predicted_ratio(rate::power{-0.2}, 1000, 10000)), "0.63");
  EXPECT_EQ(predicted_ratio_sides(variance_class(1.0, 1, 2, true), 50, 100, 2), 0.25);
  EXPECT_EQ(predicted_ratio(rate::inv_n{}, 1000, 1000), 1.0);
}

TEST(PredictedRatio, Multiplicative) {
  for (const double e : {-1.0, -0.2, -0.8, -1.7}) {
    const rate_class rc = rate::power{e};
    EXPECT_NEAR(predicted_ratio(rc, 1000, 10000), predicted_ratio(rc, 1000, 2000) * predicted_ratio(rc, 2000, 10000),
                1e-12);
  }
}

TEST(PredictedRatio, OneDimensionalPublishedAnnotations) {
  // Sizes 1000 -> 2000, 4000, 10000; annotations as printed (two places).
  const annotated_row rows[] = {
      {0.1, 0, true, {"0.50", "0.25", "0.10"}},  {0.4, 0, true, {"0.50", "0.25", "0.10"}},
      {1.0, 0, true, {"0.50", "0.25", "0.10"}},  {1.3, 0, true, {"0.50", "0.25", "0.10"}},
      {1.6, 0, true, {"0.57", "0.33", "0.16"}},  {1.9, 0, true, {"0.87", "0.76", "0.63"}},
      {1.9, 1, true, {"0.50", "0.25", "0.10"}},  {0.1, 0, false, {"0.87", "0.76", "0.63"}},
      {0.4, 0, false, {"0.57", "0.33", "0.16"}}, {0.7, 0, false, {"0.50", "0.25", "0.10"}},
      {1.6, 0, false, {"0.57", "0.33", "0.16"}}, {1.9, 0, false, {"0.87", "0.76", "0.63"}},
      {0.1, 1, false, {"0.87", "0.76", "0.63"}}, {0.4, 1, false, {"0.57", "0.33", "0.16"}},
      {1.9, 1, false, {"0.50", "0.25", "0.10"}}};
  const double sizes[] = {2000, 4000, 10000};
  for (const auto& r : rows) {
    const auto rc = variance_class(r.alpha, r.p, 1, r.affine);
    for (int k = 0; k < 3; ++k)
      EXPECT_EQ(two_places(predicted_ratio(rc, 1000, sizes[k])), r.expected[k])
          << "alpha=" << r.alpha << " p=" << r.p << " affine=" << r.affine;
  }
}

TEST(PredictedRatio, TwoDimensionalPublishedAnnotations) {
  // Sides 50 -> 100, 50 -> 500, 100 -> 500 with the square increment (p = 1).
  const annotated_row rows[] = {{0.1, 1, true, {"0.25", "0.01", "0.04"}},  {1.9, 1, true, {"0.25", "0.01", "0.04"}},
                                {0.1, 1, false, {"0.87", "0.63", "0.72"}}, {0.4, 1, false, {"0.57", "0.16", "0.28"}},
                                {0.7, 1, false, {"0.38", "0.04", "0.11"}}, {1.3, 1, false, {"0.25", "0.01", "0.04"}},
                                {1.9, 1, false, {"0.25", "0.01", "0.04"}}};
  const double pairs[3][2] = {{50, 100}, {50, 500}, {100, 500}};
  for (const auto& r : rows) {
    const auto rc = variance_class(r.alpha, r.p, 2, r.affine);
    for (int k = 0; k < 3; ++k)
      EXPECT_EQ(two_places(predicted_ratio_sides(rc, pairs[k][0], pairs[k][1], 2)), r.expected[k])
          << "alpha=" << r.alpha << " affine=" << r.affine;
  }
}
