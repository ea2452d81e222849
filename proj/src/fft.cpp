#include "wigner/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>
#include <vector>

#include "wigner/errors.hpp"

namespace wigner {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(int n, bool two_dimensional) : n_(n), two_d_(two_dimensional) {
  if (n < 2) throw ParameterError("RealFft: transform length must be at least 2");
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<double> real(static_cast<std::size_t>(sample_size()));
  std::vector<fftw_complex> spec(static_cast<std::size_t>(spectrum_size()));
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (two_d_) {
    forward_plan_ = fftw_plan_dft_r2c_2d(n, n, real.data(), spec.data(), flags);
    backward_plan_ = fftw_plan_dft_c2r_2d(n, n, spec.data(), real.data(), flags);
  } else {
    forward_plan_ = fftw_plan_dft_r2c_1d(n, real.data(), spec.data(), flags);
    backward_plan_ = fftw_plan_dft_c2r_1d(n, spec.data(), real.data(), flags);
  }
  if (!forward_plan_ || !backward_plan_) throw Error("RealFft: FFTW planning failed");
}

RealFft::~RealFft() {
  if (!forward_plan_ && !backward_plan_) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

RealFft::RealFft(RealFft&& other) noexcept
    : n_(other.n_),
      two_d_(other.two_d_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

RealFft& RealFft::operator=(RealFft&& other) noexcept {
  if (this != &other) {
    std::swap(n_, other.n_);
    std::swap(two_d_, other.two_d_);
    std::swap(forward_plan_, other.forward_plan_);
    std::swap(backward_plan_, other.backward_plan_);
  }
  return *this;
}

int RealFft::spectrum_size() const noexcept { return two_d_ ? n_ * (n_ / 2 + 1) : n_ / 2 + 1; }

void RealFft::forward(const double* in, std::complex<double>* out) const {
  // r2c never writes its input
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void RealFft::backward(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_plan_), reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace wigner
