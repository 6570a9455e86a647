#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "lorasim/types.hpp"

namespace lorasim {

/// 64-bit Mersenne Twister (same sequence as std::mt19937_64, faster here).
using Rng = boost::random::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of an independent stream identified by (seed, stream, substream).
/// Workers derive their generators from their batch coordinates so results
/// do not depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (stream + 0x632BE59BD9B4E019ull));
  h = splitmix64(h ^ (substream + 0x85157AF5ull));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
  return Rng(derive_seed(seed, stream, substream));
}

/// Uniform symbol in [0, 2^sf).
inline std::uint32_t draw_symbol(Rng& rng, const LoRaParams& p) {
  return static_cast<std::uint32_t>(rng() >> (64 - p.sf()));
}

/// Adds circular complex Gaussian noise of total variance sigma2
/// (sigma2 / 2 per real component).
inline void add_complex_noise(std::span<cplx> samples, double sigma2, Rng& rng) {
  boost::random::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  for (auto& s : samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    s += cplx(re, im);
  }
}

}  // namespace lorasim
