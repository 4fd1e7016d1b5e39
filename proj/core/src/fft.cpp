#include "eegshift/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eegshift {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  m_ = pow2_ ? n : next_pow2(2 * n - 1);

  twiddles_.resize(m_ / 2);
  for (std::size_t k = 0; k < m_ / 2; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_);
    twiddles_[k] = {std::cos(a), std::sin(a)};
  }
  bitrev_.resize(m_);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < m_) ++bits;
  for (std::size_t i = 0; i < m_; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }

  if (!pow2_) {
    chirp_.resize(n_);
    const std::size_t period = 2 * n_;
    for (std::size_t k = 0; k < n_; ++k) {
      // k^2 mod 2n keeps the argument small; exp(-i pi k^2 / n) has period 2n in k^2.
      const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % period);
      const double a = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n_);
      chirp_[k] = {std::cos(a), std::sin(a)};
    }
    kernel_fft_.assign(m_, {0.0, 0.0});
    kernel_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      kernel_fft_[k] = std::conj(chirp_[k]);
      kernel_fft_[m_ - k] = std::conj(chirp_[k]);
    }
    radix2(kernel_fft_, false);
  }
}

void FftPlan::radix2(std::span<std::complex<double>> a, bool inverse) const {
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = m_ / len;
    for (std::size_t start = 0; start < m_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

void FftPlan::forward(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT input length does not match plan");
  if (pow2_) {
    radix2(data, false);
    return;
  }
  std::vector<std::complex<double>> work(m_, {0.0, 0.0});
  for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
  radix2(work, false);
  for (std::size_t k = 0; k < m_; ++k) work[k] *= kernel_fft_[k];
  radix2(work, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * chirp_[k];
}

void FftPlan::inverse(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT input length does not match plan");
  for (auto& v : data) v = std::conj(v);
  forward(data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v = std::conj(v) * scale;
}

}  // namespace eegshift
