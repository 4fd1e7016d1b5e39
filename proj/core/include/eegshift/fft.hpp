#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eegshift {

/// Fixed-algorithm DFT of arbitrary length: iterative radix-2 for powers of two,
/// Bluestein's chirp-z reduction to a power-of-two transform otherwise.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// In place, X[k] = sum_t x[t] exp(-2 pi i k t / n).
  void forward(std::span<std::complex<double>> data) const;
  /// In place, includes the 1/n factor.
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void radix2(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  bool pow2_;
  std::size_t m_;  // radix-2 working length
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i k / m), k < m/2
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> chirp_;     // exp(-i pi k^2 / n), k < n
  std::vector<std::complex<double>> kernel_fft_;
};

}  // namespace eegshift
