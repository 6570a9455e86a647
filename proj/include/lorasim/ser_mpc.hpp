#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lorasim/analytic_dft.hpp"
#include "lorasim/channel.hpp"
#include "lorasim/parallel.hpp"
#include "lorasim/special_fn.hpp"
#include "lorasim/types.hpp"

// Semi-analytical SER under multipath. All conditional probabilities take the
// noise W on the transmitted bin in the DFT domain, W ~ CN(0, M sigma2).

namespace lorasim {

/// SelfIsi: previous symbol equal to the current one. Isi: different.
enum class CaseTag { SelfIsi = 1, Isi = 2 };

inline double echo_amplitude_factor(const Tap& t, CaseTag c, const LoRaParams& p) {
  return c == CaseTag::SelfIsi ? p.md() : p.md() - t.delay;
}

/// Non-centrality of the squared, normalized echo bin.
inline double noncentrality(const Tap& t, CaseTag c, double sigma2, const LoRaParams& p) {
  const double f = echo_amplitude_factor(t, c, p);
  return 2.0 * f * f * std::norm(t.gain) / (p.md() * sigma2);
}

/// Rician non-centrality of the echo bin magnitude.
inline double rice_noncentrality(const Tap& t, CaseTag c, const LoRaParams& p) {
  return echo_amplitude_factor(t, c, p) * std::abs(t.gain);
}

/// Noiseless echo bin value for transmitted symbol a.
inline cplx d_amplitude(const Tap& t, Symbol a, CaseTag c, const LoRaParams& p) {
  return echo_amplitude_factor(t, c, p) * alpha_tilde(t.gain, t.delay, a, p);
}

/// 2 |M alpha0 + W|^2 / (M sigma2): the transmitted bin, normalized.
inline double detection_arg(cplx w, cplx alpha0, double sigma2, const LoRaParams& p) {
  return 2.0 * std::norm(p.md() * alpha0 + w) / (p.md() * sigma2);
}

/// log P_{d|W} for the non-coherent detector.
inline double log_pd_given_w_noncoherent(cplx w, const MultipathChannel& ch, double sigma2, CaseTag c,
                                         const LoRaParams& p) {
  const double x = detection_arg(w, ch.direct().gain, sigma2, p);
  if (x == 0.0) return -INFINITY;
  double acc = static_cast<double>(p.m() - ch.size()) * log_chi2_cdf_2dof(x);
  for (const Tap& t : ch.echoes()) acc += log_noncentral_chi2_cdf_2dof(x, noncentrality(t, c, sigma2, p));
  return acc;
}

inline double pd_given_w_noncoherent(cplx w, const MultipathChannel& ch, double sigma2, CaseTag c,
                                     const LoRaParams& p) {
  return std::exp(log_pd_given_w_noncoherent(w, ch, sigma2, c, p));
}

/// Same probability written with Rician and Rayleigh magnitude CDFs.
inline double pd_given_w_noncoherent_rician(cplx w, const MultipathChannel& ch, double sigma2, CaseTag c,
                                            const LoRaParams& p) {
  const double s = std::sqrt(p.md() * sigma2 / 2.0);
  const double r = std::abs(p.md() * ch.direct().gain + w);
  double pd = std::pow(rician_cdf(r, 0.0, s), static_cast<double>(p.m() - ch.size()));
  for (const Tap& t : ch.echoes()) pd *= rician_cdf(r, rice_noncentrality(t, c, p), s);
  return pd;
}

/// log P_{d|W} for the coherent detector, which compares real parts.
inline double log_pd_given_w_coherent(cplx w, Symbol a, const MultipathChannel& ch, double sigma2, CaseTag c,
                                      const LoRaParams& p) {
  const double s = std::sqrt(p.md() * sigma2 / 2.0);
  const double z0 = (p.md() * ch.direct().gain + w).real();
  double acc = static_cast<double>(p.m() - ch.size()) * log_std_normal_cdf(z0 / s);
  for (const Tap& t : ch.echoes()) acc += log_std_normal_cdf((z0 - d_amplitude(t, a, c, p).real()) / s);
  return acc;
}

inline double pd_given_w_coherent(cplx w, Symbol a, const MultipathChannel& ch, double sigma2, CaseTag c,
                                  const LoRaParams& p) {
  return std::exp(log_pd_given_w_coherent(w, a, ch, sigma2, c, p));
}

/// (1/pi) sum_{n,m} g(sigma sqrt(M) (x_n + j x_m)) w_n w_m, i.e. E[g(W)].
template <class G>
double gh_expectation(G&& g, double sigma2, const GaussHermiteRule& rule, const LoRaParams& p) {
  const double scale = std::sqrt(sigma2 * p.md());
  double acc = 0.0;
  for (std::size_t n = 0; n < rule.size(); ++n) {
    double row = 0.0;
    for (std::size_t m = 0; m < rule.size(); ++m) {
      row += g(cplx{scale * rule.nodes[n], scale * rule.nodes[m]}) * rule.weights[m];
    }
    acc += row * rule.weights[n];
  }
  return acc / kPi;
}

/// Error probability of one case, 1 - P_{d|W}, computed from the log so that
/// tiny values keep their digits.
inline double error_given_w_noncoherent(cplx w, const MultipathChannel& ch, double sigma2, CaseTag c,
                                        const LoRaParams& p) {
  return -std::expm1(log_pd_given_w_noncoherent(w, ch, sigma2, c, p));
}

inline double error_given_w_coherent(cplx w, Symbol a, const MultipathChannel& ch, double sigma2, CaseTag c,
                                     const LoRaParams& p) {
  return -std::expm1(log_pd_given_w_coherent(w, a, ch, sigma2, c, p));
}

inline void check_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || std::isinf(sigma2)) throw std::domain_error("sigma2 must be finite and > 0");
}

inline double ser_mpc_noncoherent(const MultipathChannel& ch, double sigma2, const LoRaParams& p,
                                  const GaussHermiteRule& rule) {
  check_sigma2(sigma2);
  const auto pe = [&](CaseTag c) {
    return gh_expectation([&](cplx w) { return error_given_w_noncoherent(w, ch, sigma2, c, p); }, sigma2, rule,
                          p);
  };
  const double pe1 = pe(CaseTag::SelfIsi);
  const double pe2 = ch.size() == 1 ? pe1 : pe(CaseTag::Isi);
  return (pe1 + (p.md() - 1.0) * pe2) / p.md();
}

/// Averages over every transmitted symbol; M times the non-coherent cost.
inline double ser_mpc_coherent(const MultipathChannel& ch, double sigma2, const LoRaParams& p,
                               const GaussHermiteRule& rule) {
  check_sigma2(sigma2);
  const auto per_symbol = [&](Symbol a) {
    const auto pe = [&](CaseTag c) {
      return gh_expectation([&](cplx w) { return error_given_w_coherent(w, a, ch, sigma2, c, p); }, sigma2,
                            rule, p);
    };
    const double pe1 = pe(CaseTag::SelfIsi);
    const double pe2 = ch.size() == 1 ? pe1 : pe(CaseTag::Isi);
    return pe1 + (p.md() - 1.0) * pe2;
  };
  if (ch.size() == 1) return per_symbol(Symbol{0}) / p.md();
  const auto terms = parallel_map<double>(p.m(), [&](std::size_t a) {
    return per_symbol(Symbol{static_cast<std::uint32_t>(a)});
  });
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc / (p.md() * p.md());
}

/// 1 - P_{d|W} for the two-path channel 1 + alpha1 z^{-k1}, non-coherent.
inline std::function<double(cplx)> g_two_path(CaseTag c, cplx alpha1, int k1, double sigma2,
                                              const LoRaParams& p) {
  check_sigma2(sigma2);
  auto ch = MultipathChannel::two_path(alpha1, k1, p);
  return [ch = std::move(ch), c, sigma2, p](cplx w) { return error_given_w_noncoherent(w, ch, sigma2, c, p); };
}

/// 1 - P_{d|W} for the exponential-decay channel, non-coherent.
inline std::function<double(cplx)> g_exp_decay(CaseTag c, double rho, double sigma2, const LoRaParams& p) {
  check_sigma2(sigma2);
  auto ch = exp_decay_channel(rho, p);
  return [ch = std::move(ch), c, sigma2, p](cplx w) { return error_given_w_noncoherent(w, ch, sigma2, c, p); };
}

inline double ser_mpc(const MultipathChannel& ch, double sigma2, const LoRaParams& p, const GaussHermiteRule& rule,
                      Detector d) {
  return d == Detector::Coherent ? ser_mpc_coherent(ch, sigma2, p, rule) : ser_mpc_noncoherent(ch, sigma2, p, rule);
}

/// One-path SER.
inline double ser_awgn(double sigma2, const LoRaParams& p, const GaussHermiteRule& rule,
                       Detector d = Detector::NonCoherent) {
  return ser_mpc(MultipathChannel::one_path(p), sigma2, p, rule, d);
}

}  // namespace lorasim
