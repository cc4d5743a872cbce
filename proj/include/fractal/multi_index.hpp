#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "fractal/error.hpp"

namespace fractal {

/// Integer lattice point in d = 1 or 2 dimensions. Unused trailing
/// components are kept at zero so equality and hashing stay simple.
struct multi_index {
  int dim = 1;
  std::array<std::int64_t, 2> c{0, 0};

  multi_index() = default;
  explicit multi_index(std::int64_t i0) : dim(1), c{i0, 0} {}
  multi_index(std::int64_t i0, std::int64_t i1) : dim(2), c{i0, i1} {}

  static multi_index zero(int d) {
    check_dim(d);
    multi_index r;
    r.dim = d;
    return r;
  }

  static multi_index filled(int d, std::int64_t v) {
    multi_index r = zero(d);
    for (int l = 0; l < d; ++l) r.c[l] = v;
    return r;
  }

  static void check_dim(int d) {
    if (d != 1 && d != 2)
      throw error(errc::invalid_argument, "dimension must be 1 or 2, got " + std::to_string(d));
  }

  std::int64_t operator[](int l) const { return c[static_cast<std::size_t>(l)]; }
  std::int64_t& operator[](int l) { return c[static_cast<std::size_t>(l)]; }

  friend bool operator==(const multi_index&, const multi_index&) = default;

  friend multi_index operator+(multi_index a, const multi_index& b) {
    for (int l = 0; l < a.dim; ++l) a.c[l] += b.c[l];
    return a;
  }
  friend multi_index operator-(multi_index a, const multi_index& b) {
    for (int l = 0; l < a.dim; ++l) a.c[l] -= b.c[l];
    return a;
  }
  friend multi_index operator-(multi_index a) {
    for (int l = 0; l < a.dim; ++l) a.c[l] = -a.c[l];
    return a;
  }
  friend multi_index operator*(multi_index a, std::int64_t s) {
    for (int l = 0; l < a.dim; ++l) a.c[l] *= s;
    return a;
  }

  std::string str() const {
    std::string s = std::to_string(c[0]);
    if (dim == 2) s += "," + std::to_string(c[1]);
    return s;
  }
};

/// Partial order: j <= k iff j[l] <= k[l] for every l.
inline bool componentwise_le(const multi_index& j, const multi_index& k) {
  for (int l = 0; l < j.dim; ++l)
    if (j[l] > k[l]) return false;
  return true;
}

inline bool componentwise_lt(const multi_index& j, const multi_index& k) {
  for (int l = 0; l < j.dim; ++l)
    if (j[l] >= k[l]) return false;
  return true;
}

/// Total order used only for keyed storage.
struct lex_less {
  bool operator()(const multi_index& a, const multi_index& b) const {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.c < b.c;
  }
};

/// |r|
inline std::int64_t abs_order(const multi_index& r) {
  std::int64_t s = 0;
  for (int l = 0; l < r.dim; ++l) s += r[l];
  return s;
}

/// j^r = prod_l j[l]^r[l] with 0^0 = 1.
inline double index_power(const multi_index& j, const multi_index& r) {
  double p = 1.0;
  for (int l = 0; l < j.dim; ++l) {
    const auto base = static_cast<double>(j[l]);
    for (std::int64_t e = 0; e < r[l]; ++e) p *= base;
  }
  return p;
}

inline std::int64_t product(const multi_index& j) {
  std::int64_t p = 1;
  for (int l = 0; l < j.dim; ++l) p *= j[l];
  return p;
}

}  // namespace fractal
