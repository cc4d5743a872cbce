#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>

#include "fractal/error.hpp"
#include "fractal/normal.hpp"

namespace fractal {

namespace transform {
struct identity {};
struct affine {
  double a = 1.0;
  double b = 0.0;
};
/// g(x) = Phi(x)
struct uniform {};
/// g(x) = -log{1 - Phi(x)}
struct exponential {};
/// g(x) = x^2
struct chi_squared {};
/// g(x) = exp(tau x)
struct log_normal {
  double tau = 1.0;
};
}  // namespace transform

using point_transform = std::variant<transform::identity, transform::affine, transform::uniform,
                                     transform::exponential, transform::chi_squared, transform::log_normal>;

inline double apply(const point_transform& g, double x) {
  struct visitor {
    double x;
    double operator()(const transform::identity&) const { return x; }
    double operator()(const transform::affine& t) const { return t.a * x + t.b; }
    double operator()(const transform::uniform&) const { return std_normal_cdf(x); }
    // 1 - Phi(x) = Phi(-x); the log is taken without forming 1 - Phi(x).
    double operator()(const transform::exponential&) const { return -log_std_normal_sf(x); }
    double operator()(const transform::chi_squared&) const { return x * x; }
    double operator()(const transform::log_normal& t) const { return std::exp(t.tau * x); }
  };
  return std::visit(visitor{x}, g);
}

/// Identity and affine maps leave the estimator's law unchanged.
inline bool is_affine(const point_transform& g) {
  return std::holds_alternative<transform::identity>(g) || std::holds_alternative<transform::affine>(g);
}

namespace detail {
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw error(errc::parse_error, "cannot parse " + what + " from '" + s + "'");
  }
}
}  // namespace detail

/// Names: identity, affine:a,b, uniform, exp1, chisq1, lognormal:tau.
inline std::string transform_name(const point_transform& g) {
  struct visitor {
    std::string operator()(const transform::identity&) const { return "identity"; }
    std::string operator()(const transform::affine& t) const {
      return "affine:" + detail::format_real(t.a) + "," + detail::format_real(t.b);
    }
    std::string operator()(const transform::uniform&) const { return "uniform"; }
    std::string operator()(const transform::exponential&) const { return "exp1"; }
    std::string operator()(const transform::chi_squared&) const { return "chisq1"; }
    std::string operator()(const transform::log_normal& t) const {
      return "lognormal:" + detail::format_real(t.tau);
    }
  };
  return std::visit(visitor{}, g);
}

inline point_transform parse_transform(const std::string& s) {
  if (s == "identity" || s == "gaussian") return transform::identity{};
  if (s == "uniform") return transform::uniform{};
  if (s == "exp1") return transform::exponential{};
  if (s == "chisq1") return transform::chi_squared{};
  if (s.rfind("lognormal:", 0) == 0) {
    const double tau = detail::parse_real(s.substr(10), "log-normal tau");
    if (!(tau > 0.0)) throw error(errc::parse_error, "log-normal tau must be positive");
    return transform::log_normal{tau};
  }
  if (s.rfind("affine:", 0) == 0) {
    const auto body = s.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw error(errc::parse_error, "affine transform needs 'affine:a,b'");
    const double a = detail::parse_real(body.substr(0, comma), "affine slope");
    const double b = detail::parse_real(body.substr(comma + 1), "affine offset");
    if (a == 0.0) throw error(errc::parse_error, "affine slope must be nonzero");
    return transform::affine{a, b};
  }
  throw error(errc::parse_error,
              "unknown transform '" + s + "' (expected identity|affine:a,b|uniform|exp1|chisq1|lognormal:tau)");
}

}  // namespace fractal
