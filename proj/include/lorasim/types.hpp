#pragma once

#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorasim {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// LoRa modulation parameters.
///
/// The sample period is normalized to one chip, so a symbol spans exactly
/// m() = 2^sf samples. With a bandwidth B a tap delay of k samples is k/B
/// seconds (k = 3 is 6 us at 500 kHz).
class LoRaParams {
 public:
  static constexpr int kMinSf = 7;
  static constexpr int kMaxSf = 12;

  explicit LoRaParams(int sf) : sf_(sf) {
    if (sf < kMinSf || sf > kMaxSf) {
      throw std::domain_error("spreading factor must be in [7, 12], got " + std::to_string(sf));
    }
    m_ = std::size_t{1} << sf;
  }

  int sf() const noexcept { return sf_; }
  std::size_t m() const noexcept { return m_; }
  double md() const noexcept { return static_cast<double>(m_); }

  friend bool operator==(const LoRaParams&, const LoRaParams&) = default;

 private:
  int sf_;
  std::size_t m_ = 0;
};

/// Index of a chirp symbol, valid when < M.
struct Symbol {
  std::uint32_t value = 0;

  constexpr Symbol() = default;
  constexpr explicit Symbol(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

inline void check_symbol(Symbol a, const LoRaParams& p) {
  if (a.value >= p.m()) {
    throw std::domain_error("symbol " + std::to_string(a.value) + " out of range for M=" +
                            std::to_string(p.m()));
  }
}

/// (a + delta) mod M.
inline Symbol shifted(Symbol a, long long delta, const LoRaParams& p) {
  const auto m = static_cast<long long>(p.m());
  long long v = (static_cast<long long>(a.value) + delta) % m;
  if (v < 0) v += m;
  return Symbol{static_cast<std::uint32_t>(v)};
}

/// One symbol interval of complex baseband samples.
struct ChirpFrame {
  std::vector<cplx> samples;

  std::size_t size() const noexcept { return samples.size(); }
  cplx& operator[](std::size_t k) { return samples[k]; }
  const cplx& operator[](std::size_t k) const { return samples[k]; }
};

/// The M output bins of the dechirp + DFT front-end.
struct DftSpectrum {
  std::vector<cplx> bins;

  std::size_t size() const noexcept { return bins.size(); }
  cplx& operator[](std::size_t n) { return bins[n]; }
  const cplx& operator[](std::size_t n) const { return bins[n]; }
};

enum class Detector { NonCoherent, Coherent };

inline const char* to_string(Detector d) {
  return d == Detector::Coherent ? "coherent" : "noncoherent";
}

// SNR is 1/sigma^2 with sigma^2 the complex noise variance per sample.
inline double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }
inline double sigma2_to_snr_db(double sigma2) { return -10.0 * std::log10(sigma2); }

}  // namespace lorasim
