#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lorasim/fft.hpp"
#include "lorasim/types.hpp"

namespace lorasim {

namespace detail {

// x_a[k] = exp(j pi/M (k^2 + 2ka - kM)). The bracket is an integer, so the
// phase is reduced exactly modulo 2M before any floating point happens; -kM
// and +kM agree mod 2M. x_a is M-periodic in k, which gives x_a[M-n] = x_a[-n].
inline std::uint64_t chirp_phase_index(std::uint64_t a, long long k, std::uint64_t m) {
  const auto mm = static_cast<long long>(m);
  long long kk = k % mm;
  if (kk < 0) kk += mm;
  const auto ku = static_cast<std::uint64_t>(kk);
  return (ku * ku + 2 * ku * a + ku * m) % (2 * m);
}

inline cplx unit_phase(std::uint64_t index, std::uint64_t m) {
  return std::polar(1.0, kPi * static_cast<double>(index) / static_cast<double>(m));
}

}  // namespace detail

/// Sample k of the chirp carrying symbol a; k may be any integer.
inline cplx chirp_sample(Symbol a, long long k, const LoRaParams& p) {
  return detail::unit_phase(detail::chirp_phase_index(a.value, k, p.m()), p.m());
}

inline ChirpFrame modulate(Symbol a, const LoRaParams& p) {
  check_symbol(a, p);
  ChirpFrame out{std::vector<cplx>(p.m())};
  for (std::size_t k = 0; k < p.m(); ++k) out[k] = chirp_sample(a, static_cast<long long>(k), p);
  return out;
}

/// Multiplies by the conjugate base up-chirp x_0.
inline ChirpFrame dechirp(const ChirpFrame& frame, const LoRaParams& p) {
  if (frame.size() != p.m()) throw std::domain_error("dechirp: frame length must equal M");
  ChirpFrame out{std::vector<cplx>(p.m())};
  for (std::size_t k = 0; k < p.m(); ++k) {
    out[k] = frame[k] * std::conj(chirp_sample(Symbol{0}, static_cast<long long>(k), p));
  }
  return out;
}

/// Spreading parameters implied by a raw frame length.
inline LoRaParams params_for_length(std::size_t length) {
  if (!std::has_single_bit(length)) throw std::domain_error("frame length must be a power of two");
  return LoRaParams(std::countr_zero(length));
}

/// Dechirps the raw received frame and returns its M-point DFT.
inline DftSpectrum demod_dft(const ChirpFrame& frame) {
  const LoRaParams p = params_for_length(frame.size());
  ChirpFrame d = dechirp(frame, p);
  Radix2Fft(p.m()).forward(d.samples);
  return DftSpectrum{std::move(d.samples)};
}

// Ties go to the lowest index.
inline Symbol detect_noncoherent(std::span<const cplx> bins) {
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t n = 0; n < bins.size(); ++n) {
    const double v = std::norm(bins[n]);
    if (v > best_val) {
      best_val = v;
      best = n;
    }
  }
  return Symbol{static_cast<std::uint32_t>(best)};
}

inline Symbol detect_coherent(std::span<const cplx> bins) {
  std::size_t best = 0;
  for (std::size_t n = 1; n < bins.size(); ++n) {
    if (bins[n].real() > bins[best].real()) best = n;
  }
  return Symbol{static_cast<std::uint32_t>(best)};
}

inline Symbol detect_noncoherent(const DftSpectrum& s) { return detect_noncoherent(s.bins); }
inline Symbol detect_coherent(const DftSpectrum& s) { return detect_coherent(s.bins); }

inline Symbol detect(const DftSpectrum& s, Detector d) {
  return d == Detector::Coherent ? detect_coherent(s) : detect_noncoherent(s);
}

/// Precomputed tables for the transmit/receive hot path of the simulators.
/// Produces bit-identical samples to chirp_sample().
class ChirpTable {
 public:
  explicit ChirpTable(const LoRaParams& p) : p_(p), unit_(2 * p.m()) {
    for (std::size_t i = 0; i < unit_.size(); ++i) unit_[i] = detail::unit_phase(i, p.m());
  }

  const LoRaParams& params() const noexcept { return p_; }

  cplx sample(std::uint32_t a, long long k) const {
    return unit_[detail::chirp_phase_index(a, k, p_.m())];
  }

 private:
  LoRaParams p_;
  std::vector<cplx> unit_;
};

class ChirpReceiver {
 public:
  explicit ChirpReceiver(const LoRaParams& p) : p_(p), fft_(p.m()), down_(p.m()) {
    for (std::size_t k = 0; k < p.m(); ++k) {
      down_[k] = std::conj(chirp_sample(Symbol{0}, static_cast<long long>(k), p));
    }
  }

  const LoRaParams& params() const noexcept { return p_; }

  /// Dechirp + DFT of `frame` into `bins` (both length M; may alias).
  void demodulate(std::span<const cplx> frame, std::span<cplx> bins) const {
    if (frame.size() != p_.m() || bins.size() != p_.m()) {
      throw std::domain_error("demodulate: length must equal M");
    }
    for (std::size_t k = 0; k < p_.m(); ++k) bins[k] = frame[k] * down_[k];
    fft_.forward(bins);
  }

  DftSpectrum demodulate(const ChirpFrame& frame) const {
    DftSpectrum out{std::vector<cplx>(p_.m())};
    demodulate(frame.samples, out.bins);
    return out;
  }

 private:
  LoRaParams p_;
  Radix2Fft fft_;
  std::vector<cplx> down_;
};

}  // namespace lorasim
