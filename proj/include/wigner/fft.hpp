#pragma once

#include <complex>

namespace wigner {

/// Thin RAII wrapper over FFTW real-to-complex plans of a fixed shape.
///
/// Plans are created with FFTW_ESTIMATE so that results do not depend on
/// run-time timing measurements. Execution is thread safe; the arrays passed in
/// need not be aligned.
class RealFft {
public:
  /// One-dimensional transform of length n, or a square n x n transform when
  /// `two_dimensional` is set (the last axis is halved in the spectrum).
  explicit RealFft(int n, bool two_dimensional = false);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  int size() const noexcept { return n_; }
  /// Number of complex outputs: n/2+1 (1-D) or n*(n/2+1) (2-D).
  int spectrum_size() const noexcept;
  /// Number of real samples: n or n*n.
  int sample_size() const noexcept { return two_d_ ? n_ * n_ : n_; }

  /// Unnormalized forward transform, sum_j f_j exp(-2 pi i s j / n).
  void forward(const double* in, std::complex<double>* out) const;
  /// Unnormalized inverse. Overwrites `in`.
  void backward(std::complex<double>* in, double* out) const;

private:
  int n_ = 0;
  bool two_d_ = false;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Process-wide plan cache keyed by shape; plans live until exit.
const RealFft& cached_fft(int n, bool two_dimensional = false);

}  // namespace wigner
