#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fractal/covariance.hpp"
#include "fractal/error.hpp"
#include "fractal/fft.hpp"
#include "fractal/grid.hpp"
#include "fractal/rng.hpp"
#include "fractal/transforms.hpp"

namespace fractal {

/// Values g{X(i/n0)} for -margin <= i < n0 + margin, with provenance.
struct field_sample {
  field_grid values;
  grid_spec grid;
  covariance_model model;
  std::uint64_t seed = 0;
  std::string transform = "identity";
};

struct embedding_options {
  /// Relative tolerance below which negative eigenvalues are clamped to zero.
  double negative_tolerance = 1e-10;
  int max_doublings = 4;
  /// Lower bound on the torus length per axis (0 = minimal embedding).
  std::int64_t min_torus = 0;
};

/// Circulant (d = 1) or block-circulant (d = 2) embedding of the grid
/// covariance into a torus of size M, diagonalized by the DFT.
struct embedding {
  covariance_model model;
  grid_spec grid;
  multi_index torus;
  /// d-dimensional DFT of the wrapped covariance, row-major over the torus.
  std::vector<double> eigenvalues;
  std::int64_t clamp_count = 0;
  /// Most negative eigenvalue seen before clamping (0 if none).
  double min_eigenvalue = 0.0;
  int doublings = 0;
  std::shared_ptr<const detail::fft_plan> forward;

  std::int64_t torus_size() const { return product(torus); }

  /// Covariance implied by the sampling construction at every torus lag:
  /// inverse DFT of the stored eigenvalues.
  std::vector<double> implied_covariance() const {
    detail::fft_plan backward(torus, detail::fft_plan::direction::backward);
    std::vector<std::complex<double>> buf(eigenvalues.begin(), eigenvalues.end());
    backward.execute(buf);
    std::vector<double> out(buf.size());
    const auto total = static_cast<double>(torus_size());
    for (std::size_t f = 0; f < buf.size(); ++f) out[f] = buf[f].real() / total;
    return out;
  }
};

namespace detail {

inline std::int64_t next_pow2(std::int64_t v) {
  std::int64_t p = 1;
  while (p < v) p *= 2;
  return p;
}

/// c_k = gamma(h o min(k, M - k)) laid out row-major over the torus.
inline std::vector<std::complex<double>> wrapped_covariance(const covariance_model& model, const grid_spec& grid,
                                                            const multi_index& torus) {
  const int d = grid.dim();
  const std::int64_t M0 = torus[0];
  const std::int64_t M1 = d == 2 ? torus[1] : 1;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(M0 * M1));
  for (std::int64_t k0 = 0; k0 < M0; ++k0) {
    const double t0 = static_cast<double>(std::min(k0, M0 - k0)) * grid.spacing(0);
    for (std::int64_t k1 = 0; k1 < M1; ++k1) {
      double r2 = t0 * t0;
      if (d == 2) {
        const double t1 = static_cast<double>(std::min(k1, M1 - k1)) * grid.spacing(1);
        r2 += t1 * t1;
      }
      c[static_cast<std::size_t>(k0 * M1 + k1)] = model.at_norm(std::sqrt(r2));
    }
  }
  return c;
}

}  // namespace detail

inline embedding build_embedding(const covariance_model& model, const grid_spec& grid,
                                 const embedding_options& opts = {}) {
  const int d = grid.dim();
  if (model.dim != d) throw error(errc::invalid_argument, "model and grid dimensions differ");
  const multi_index N = grid.extent();
  multi_index M = multi_index::zero(d);
  for (int l = 0; l < d; ++l) {
    if (N[l] < 2) throw error(errc::invalid_argument, "need at least two grid points per axis");
    M[l] = std::max(detail::next_pow2(2 * (N[l] - 1)), detail::next_pow2(opts.min_torus));
  }

  for (int attempt = 0;; ++attempt) {
    auto plan = std::make_shared<const detail::fft_plan>(M, detail::fft_plan::direction::forward);
    auto buf = detail::wrapped_covariance(model, grid, M);
    plan->execute(buf);

    double max_re = 0.0, max_im = 0.0, min_re = 0.0;
    for (const auto& z : buf) {
      max_re = std::max(max_re, z.real());
      min_re = std::min(min_re, z.real());
      max_im = std::max(max_im, std::abs(z.imag()));
    }
    if (max_im > 1e-10 * max_re)
      throw error(errc::invalid_argument, "embedding spectrum is not real (imaginary residue " +
                                              std::to_string(max_im / max_re) + ")");

    if (min_re < -opts.negative_tolerance * max_re) {
      if (attempt == opts.max_doublings)
        throw error(errc::not_nonnegative_definite,
                    "circulant embedding has a negative eigenvalue " + std::to_string(min_re) + " (relative " +
                        std::to_string(min_re / max_re) + ") after " + std::to_string(attempt) +
                        " doublings; exact simulation is unavailable");
      int smallest = 0;
      for (int l = 1; l < d; ++l)
        if (M[l] < M[smallest]) smallest = l;
      M[smallest] *= 2;
      continue;
    }

    embedding emb;
    emb.model = model;
    emb.grid = grid;
    emb.torus = M;
    emb.doublings = attempt;
    emb.min_eigenvalue = min_re;
    emb.eigenvalues.resize(buf.size());
    for (std::size_t f = 0; f < buf.size(); ++f) {
      double lam = buf[f].real();
      if (lam < 0.0) {
        lam = 0.0;
        ++emb.clamp_count;
      }
      emb.eigenvalues[f] = lam;
    }
    emb.forward = std::move(plan);
    return emb;
  }
}

/// Two independent exact samples of the stationary Gaussian field on the
/// grid: the real and imaginary parts of DFT(sqrt(lambda / |M|) * Z) for a
/// complex standard Gaussian array Z on the torus.
inline std::pair<field_sample, field_sample> sample_field(const embedding& emb, std::uint64_t seed) {
  const auto total = static_cast<std::size_t>(emb.torus_size());
  const double inv_total = 1.0 / static_cast<double>(total);
  std::vector<std::complex<double>> buf(total);
  gaussian_source gauss(seed);
  for (std::size_t f = 0; f < total; ++f) {
    double z0 = 0.0, z1 = 0.0;
    gauss.pair(z0, z1);
    const double s = std::sqrt(emb.eigenvalues[f] * inv_total);
    buf[f] = {s * z0, s * z1};
  }
  emb.forward->execute(buf);

  const grid_spec& grid = emb.grid;
  const multi_index N = grid.extent();
  const std::int64_t M1 = grid.dim() == 2 ? emb.torus[1] : 1;
  const std::int64_t N1 = grid.dim() == 2 ? N[1] : 1;

  std::pair<field_sample, field_sample> out;
  for (auto* s : {&out.first, &out.second}) {
    s->values = field_grid(grid.lo(), N);
    s->grid = grid;
    s->model = emb.model;
    s->seed = seed;
  }
  auto re = out.first.values.values();
  auto im = out.second.values.values();
  std::size_t k = 0;
  for (std::int64_t p0 = 0; p0 < N[0]; ++p0)
    for (std::int64_t p1 = 0; p1 < N1; ++p1, ++k) {
      const auto& z = buf[static_cast<std::size_t>(p0 * M1 + p1)];
      re[k] = z.real();
      im[k] = z.imag();
    }
  return out;
}

inline field_sample transform_field(field_sample sample, const point_transform& g) {
  for (double& v : sample.values.values()) v = apply(g, v);
  const std::string name = transform_name(g);
  sample.transform = sample.transform == "identity" ? name : name + "(" + sample.transform + ")";
  return sample;
}

}  // namespace fractal
