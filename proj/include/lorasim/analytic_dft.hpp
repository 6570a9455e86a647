#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lorasim/channel.hpp"
#include "lorasim/types.hpp"
#include "lorasim/waveform.hpp"

// Closed-form DFT outputs of the dechirped window, noiseless. Bin indices are
// reduced mod M throughout.

namespace lorasim {

/// alpha_i x_abar[M - k_i]: the rotated echo gain seen after dechirping.
inline cplx alpha_tilde(cplx alpha, int k_i, Symbol a_bar, const LoRaParams& p) {
  if (k_i <= 0 || static_cast<std::size_t>(k_i) >= p.m()) {
    throw std::domain_error("alpha_tilde: echo delay must be in (0, M)");
  }
  check_symbol(a_bar, p);
  return alpha * chirp_sample(a_bar, static_cast<long long>(p.m()) - k_i, p);
}

/// Same quantity through the factored form alpha e^{-2j pi k_i abar / M} x_0[M - k_i].
inline cplx alpha_tilde_factored(cplx alpha, int k_i, Symbol a_bar, const LoRaParams& p) {
  if (k_i <= 0 || static_cast<std::size_t>(k_i) >= p.m()) {
    throw std::domain_error("alpha_tilde: echo delay must be in (0, M)");
  }
  check_symbol(a_bar, p);
  const double rot = -2.0 * kPi * static_cast<double>(k_i) * a_bar.value / p.md();
  return alpha * std::polar(1.0, rot) * chirp_sample(Symbol{0}, static_cast<long long>(p.m()) - k_i, p);
}

/// M_i[n; abar] = alpha_tilde * sum_{k<k_i} exp(2j pi k (abar - k_i - n) / M), by direct summation.
inline cplx mi_term(cplx alpha_t, int k_i, Symbol a_bar, std::size_t n, const LoRaParams& p) {
  const auto m = static_cast<long long>(p.m());
  long long q = (static_cast<long long>(a_bar.value) - k_i - static_cast<long long>(n)) % m;
  if (q < 0) q += m;
  cplx sum{};
  for (long long k = 0; k < k_i; ++k) {
    sum += std::polar(1.0, 2.0 * kPi * static_cast<double>((k * q) % m) / p.md());
  }
  return alpha_t * sum;
}

/// Previous symbol equal to the current one: the channel acts circularly.
inline DftSpectrum dft_self_isi(Symbol a, const MultipathChannel& ch, const LoRaParams& p) {
  check_symbol(a, p);
  DftSpectrum out{std::vector<cplx>(p.m())};
  out[a.value] += p.md() * ch.direct().gain;
  for (const Tap& t : ch.echoes()) {
    out[shifted(a, -t.delay, p).value] += p.md() * alpha_tilde(t.gain, t.delay, a, p);
  }
  return out;
}

/// Exact spectrum with inter-symbol interference from a_prev.
inline DftSpectrum dft_isi(Symbol a, Symbol a_prev, const MultipathChannel& ch, const LoRaParams& p) {
  check_symbol(a, p);
  check_symbol(a_prev, p);
  DftSpectrum out{std::vector<cplx>(p.m())};
  out[a.value] += p.md() * ch.direct().gain;
  for (const Tap& t : ch.echoes()) {
    const cplx at_cur = alpha_tilde(t.gain, t.delay, a, p);
    const cplx at_prev = alpha_tilde(t.gain, t.delay, a_prev, p);
    const std::size_t peak = shifted(a, -t.delay, p).value;
    for (std::size_t n = 0; n < p.m(); ++n) {
      const cplx from_prev = mi_term(at_prev, t.delay, a_prev, n, p);
      if (n == peak) {
        out[n] += (p.md() - t.delay) * at_cur + from_prev;
      } else {
        out[n] += from_prev - mi_term(at_cur, t.delay, a, n, p);
      }
    }
  }
  return out;
}

/// dft_isi with every M_i term dropped.
inline DftSpectrum dft_isi_approx(Symbol a, const MultipathChannel& ch, const LoRaParams& p) {
  check_symbol(a, p);
  DftSpectrum out{std::vector<cplx>(p.m())};
  out[a.value] += p.md() * ch.direct().gain;
  for (const Tap& t : ch.echoes()) {
    out[shifted(a, -t.delay, p).value] += (p.md() - t.delay) * alpha_tilde(t.gain, t.delay, a, p);
  }
  return out;
}

/// Interferer gain after dechirping for interferer symbol a2. At tau = 0 the
/// interferer is not rotated.
inline cplx interferer_alpha_tilde(const InterfererConfig& cfg, Symbol a2, const LoRaParams& p) {
  if (cfg.tau == 0) return cfg.gain();
  return alpha_tilde(cfg.gain(), cfg.tau, a2, p);
}

/// Exact spectrum of desired symbol a1 with an interferer whose symbols
/// a2_prev, a2 straddle the window at delay tau.
inline DftSpectrum dft_interference(Symbol a1, Symbol a2_prev, Symbol a2, const InterfererConfig& cfg,
                                    const LoRaParams& p) {
  check_symbol(a1, p);
  check_symbol(a2_prev, p);
  check_symbol(a2, p);
  cfg.validate(p);
  const double m = p.md();
  const double tau = cfg.tau;
  DftSpectrum out{std::vector<cplx>(p.m())};
  out[a1.value] += m;

  const cplx at_cur = interferer_alpha_tilde(cfg, a2, p);
  const cplx at_prev = interferer_alpha_tilde(cfg, a2_prev, p);
  const std::size_t peak_cur = shifted(a2, -cfg.tau, p).value;
  const std::size_t peak_prev = shifted(a2_prev, -cfg.tau, p).value;
  auto m_tau = [&](cplx at, Symbol a, std::size_t n) {
    return cfg.tau == 0 ? cplx{} : mi_term(at, cfg.tau, a, n, p);
  };

  for (std::size_t n = 0; n < p.m(); ++n) {
    const bool on_cur = n == peak_cur;
    const bool on_prev = n == peak_prev;
    if (!on_cur && !on_prev) {
      out[n] += m_tau(at_prev, a2_prev, n) - m_tau(at_cur, a2, n);
      continue;
    }
    // both deltas land on the same bin when a2_prev == a2
    if (on_cur) out[n] += (m - tau) * at_cur + m_tau(at_prev, a2_prev, n);
    if (on_prev) out[n] += tau * at_prev - m_tau(at_cur, a2, n);
  }
  return out;
}

}  // namespace lorasim
