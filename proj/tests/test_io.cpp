#include <gtest/gtest.h>

#include <sstream>

#include "fractal/io.hpp"

using namespace fractal;

TEST(IncrementLiteral, Parse) {
  const auto a = parse_increment("-1:1,0:-2,1:1");
  EXPECT_EQ(a.order(), 1);
  EXPECT_EQ(a.coeffs(), increment::second_difference().coeffs());
  const auto b = parse_increment("0,0:1;1,1:1;1,0:-1;0,1:-1");
  EXPECT_EQ(b.order(), 1);
  EXPECT_EQ(b.coeffs(), increment::square().coeffs());
  EXPECT_EQ(parse_increment(" diff0 ").name(), "diff0");
}

TEST(IncrementLiteral, Errors) {
  // A single coefficient has nonzero sum.
  EXPECT_THROW(parse_increment("0:-1, 3"), error);
  EXPECT_THROW(parse_increment("bogus"), error);
  EXPECT_THROW(parse_increment("0:1,0:-1"), error);
  EXPECT_THROW(parse_increment("0:1;1,0:-1"), error);
  try {
    parse_increment("0:1,1:1");
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::nonvanishing_zeroth_moment);
  }
  EXPECT_EQ(increment_literal(increment::second_difference()), "-1:1,0:-2,1:1");
  EXPECT_EQ(parse_increment(increment_literal(increment::square())).coeffs(), increment::square().coeffs());
}

namespace {

field_sample sample(int d, double alpha, std::uint64_t seed) {
  const auto grid = d == 1 ? grid_spec::make(multi_index(137), 5) : grid_spec::make(multi_index(13, 21), 3);
  auto s = sample_field(build_embedding(covariance_model::make(alpha, d), grid), seed).first;
  return transform_field(s, transform::log_normal{1.0});
}

void expect_same(const field_sample& a, const field_sample& b) {
  EXPECT_EQ(a.grid.n0, b.grid.n0);
  EXPECT_EQ(a.grid.margin, b.grid.margin);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.transform, b.transform);
  EXPECT_EQ(a.model.alpha, b.model.alpha);
  EXPECT_EQ(a.model.c, b.model.c);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t k = 0; k < a.values.size(); ++k) ASSERT_EQ(a.values.values()[k], b.values.values()[k]);
}

}  // namespace

TEST(FieldFiles, CsvRoundTrip) {
  for (int d : {1, 2})
    for (std::uint64_t seed : {1ULL, 99ULL, 12345678901ULL}) {
      const auto s = sample(d, 0.3 + 0.5 * d, seed);
      std::stringstream buf;
      write_field_csv(buf, s, json{{"note", "x"}});
      expect_same(s, read_field_csv(buf));
    }
}

TEST(FieldFiles, BinaryRoundTrip) {
  for (int d : {1, 2})
    for (std::uint64_t seed : {2ULL, 77ULL}) {
      const auto s = sample(d, 1.7, seed);
      std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
      write_field_binary(buf, s);
      const std::string bytes = buf.str();
      // Header is little-endian int64 dim first.
      EXPECT_EQ(bytes[0], static_cast<char>(d));
      for (int k = 1; k < 8; ++k) EXPECT_EQ(bytes[k], '\0');
      expect_same(s, read_field_binary(buf));
    }
}

TEST(FieldFiles, MalformedInput) {
  std::stringstream empty("index,value\n");
  EXPECT_THROW(read_field_csv(empty), error);
  std::stringstream gap("index,value\n0,1.0\n2,1.0\n");
  EXPECT_THROW(read_field_csv(gap), error);
  std::stringstream truncated(std::string("\x01\0\0\0\0\0\0\0", 8));
  EXPECT_THROW(read_field_binary(truncated), error);
  EXPECT_THROW(read_field("/nonexistent/file.csv"), error);
}

TEST(EstimateReport, Fields) {
  estimate_result r;
  r.alpha_hat = 1.25;
  r.dimension_hat = 1.375;
  r.weights = ols_weights(2);
  r.zbar = {0.1, 0.2};
  r.residuals = {0.0, 0.0};
  const auto j = estimate_report(r, json{{"m", 2}});
  for (const char* key : {"config", "alpha_hat", "dimension_hat", "m", "scheme", "zbar", "weights", "clamped"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["scheme"], "ols");
  EXPECT_EQ(j["m"], 2);
}
