#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "fractal/error.hpp"
#include "fractal/multi_index.hpp"

namespace fractal::detail {

// FFTW's planner is not reentrant; plan execution on new arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place complex DFT of a fixed row-major shape, executable concurrently
/// on caller-owned buffers.
class fft_plan {
 public:
  enum class direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

  fft_plan(const multi_index& shape, direction dir) : size_(static_cast<std::size_t>(product(shape))) {
    int n[2] = {static_cast<int>(shape[0]), shape.dim == 2 ? static_cast<int>(shape[1]) : 1};
    std::lock_guard lock(fftw_planner_mutex());
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
    plan_ = fftw_plan_dft(shape.dim, n, scratch, scratch, static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan_ == nullptr) throw error(errc::invalid_argument, "FFTW could not create a plan");
  }

  fft_plan(const fft_plan&) = delete;
  fft_plan& operator=(const fft_plan&) = delete;

  ~fft_plan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::size_t size() const { return size_; }

  void execute(std::vector<std::complex<double>>& data) const {
    if (data.size() != size_) throw error(errc::invalid_argument, "FFT buffer has the wrong length");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_, p, p);
  }

 private:
  std::size_t size_;
  fftw_plan plan_ = nullptr;
};

}  // namespace fractal::detail
