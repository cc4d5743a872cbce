#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fractal {

/// SplitMix64 finalizer (Steele, Lea and Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replication r: a pure function of (master, r), independent of
/// the order in which replications are executed.
inline std::uint64_t replication_seed(std::uint64_t master, std::uint64_t r) {
  return splitmix64(master ^ splitmix64(r));
}

/// Standard normal source.
///
/// Bits come from std::mt19937_64 (whose output sequence is fixed by the C++
/// standard). Uniforms on the open interval (0, 1) are formed from the top 53
/// bits as (k + 0.5) * 2^-53, and Gaussians by the Box-Muller transform:
///   r = sqrt(-2 log u1), (r cos 2 pi u2, r sin 2 pi u2).
/// No rejection step is used, so each pair consumes exactly two words.
class gaussian_source {
 public:
  explicit gaussian_source(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
  }

  /// Two independent N(0, 1) variates.
  void pair(double& z0, double& z1) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double z0 = 0.0;
    pair(z0, spare_);
    has_spare_ = true;
    return z0;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fractal
