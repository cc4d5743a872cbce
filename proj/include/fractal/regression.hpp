#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fractal/error.hpp"

namespace fractal {

enum class weight_scheme { ols, gls };

inline const char* scheme_name(weight_scheme s) { return s == weight_scheme::ols ? "ols" : "gls"; }

inline weight_scheme parse_scheme(const std::string& s) {
  if (s == "ols") return weight_scheme::ols;
  if (s == "gls") return weight_scheme::gls;
  throw error(errc::parse_error, "unknown weight scheme '" + s + "' (expected ols|gls)");
}

/// Log-log regression weights L_1..L_m with sum L_u = 0 and sum L_u log u = 1,
/// so that sum L_u log Z_u extracts the slope of log Z_u against log u.
struct regression_weights {
  std::vector<double> L;
  weight_scheme scheme = weight_scheme::ols;
  /// Set when GLS was requested but the covariance was singular and OLS used.
  bool fallback = false;

  int m() const { return static_cast<int>(L.size()); }
};

inline double constraint_sum(const regression_weights& w) {
  double s = 0.0;
  for (double l : w.L) s += l;
  return s;
}

inline double constraint_log_sum(const regression_weights& w) {
  double s = 0.0;
  for (int u = 1; u <= w.m(); ++u) s += w.L[u - 1] * std::log(static_cast<double>(u));
  return s;
}

inline regression_weights ols_weights(int m) {
  if (m < 2) throw error(errc::m_too_small, "need at least m = 2 dilations, got " + std::to_string(m));
  double mean_log = 0.0;
  for (int v = 1; v <= m; ++v) mean_log += std::log(static_cast<double>(v));
  mean_log /= m;
  double ss = 0.0;
  for (int u = 1; u <= m; ++u) {
    const double dev = std::log(static_cast<double>(u)) - mean_log;
    ss += dev * dev;
  }
  regression_weights w;
  w.scheme = weight_scheme::ols;
  w.L.resize(static_cast<std::size_t>(m));
  for (int u = 1; u <= m; ++u) w.L[u - 1] = (std::log(static_cast<double>(u)) - mean_log) / ss;
  return w;
}

/// Minimizes L^T W L subject to A L = (0, 1)^T, A = [1 ... 1; log 1 ... log m]:
///   L = W^{-1} A^T (A W^{-1} A^T)^{-1} (0, 1)^T.
inline regression_weights constrained_weights(const Eigen::MatrixXd& W) {
  const auto m = static_cast<int>(W.rows());
  if (m < 2) throw error(errc::m_too_small, "need at least m = 2 dilations");
  if (W.cols() != m) throw error(errc::invalid_argument, "weight matrix must be square");

  // Scale-free: normalize before factorizing.
  const double scale = W.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw error(errc::singular_weight_matrix, "covariance matrix is zero or non-finite");
  const Eigen::MatrixXd Ws = W / scale;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(Ws);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw error(errc::singular_weight_matrix, "covariance of log variograms is singular");

  Eigen::MatrixXd At(m, 2);
  for (int u = 1; u <= m; ++u) {
    At(u - 1, 0) = 1.0;
    At(u - 1, 1) = std::log(static_cast<double>(u));
  }
  const Eigen::MatrixXd WinvAt = lu.solve(At);
  const Eigen::Matrix2d gram = At.transpose() * WinvAt;
  Eigen::FullPivLU<Eigen::Matrix2d> glu(gram);
  if (!glu.isInvertible()) throw error(errc::singular_weight_matrix, "constraint Gram matrix is singular");
  const Eigen::Vector2d lambda = glu.solve(Eigen::Vector2d(0.0, 1.0));
  const Eigen::VectorXd L = WinvAt * lambda;

  regression_weights w;
  w.scheme = weight_scheme::gls;
  w.L.assign(L.data(), L.data() + m);
  return w;
}

}  // namespace fractal
