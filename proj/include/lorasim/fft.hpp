#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lorasim/types.hpp"

namespace lorasim {

/// In-place iterative radix-2 forward DFT, X[n] = sum_k x[k] e^{-2j pi n k / N}.
class Radix2Fft {
 public:
  explicit Radix2Fft(std::size_t n) : n_(n) {
    if (n < 2 || !std::has_single_bit(n)) {
      throw std::domain_error("FFT size must be a power of two >= 2");
    }
    const int bits = std::countr_zero(n);
    reversed_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      reversed_[i] = static_cast<std::uint32_t>(r);
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddles_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
  }

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<cplx> data) const {
    if (data.size() != n_) throw std::domain_error("FFT input length mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = reversed_[i];
      if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const cplx t = mul(twiddles_[k * stride], data[start + k + half]);
          const cplx u = data[start + k];
          data[start + k] = u + t;
          data[start + k + half] = u - t;
        }
      }
    }
  }

 private:
  // plain product; skips the inf/nan recovery of operator*
  static cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }

  std::size_t n_;
  std::vector<std::uint32_t> reversed_;
  std::vector<cplx> twiddles_;
};

}  // namespace lorasim
