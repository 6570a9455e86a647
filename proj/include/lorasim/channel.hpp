#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorasim/rng.hpp"
#include "lorasim/types.hpp"
#include "lorasim/waveform.hpp"

namespace lorasim {

/// One discrete path: integer delay in samples and complex gain.
struct Tap {
  int delay = 0;
  cplx gain{1.0, 0.0};

  friend bool operator==(const Tap&, const Tap&) = default;
};

/// c[k] = sum_i alpha_i delta[k - k_i], receiver synchronized on the first
/// path (k_0 = 0). Delays are strictly increasing and shorter than a symbol.
class MultipathChannel {
 public:
  MultipathChannel(std::vector<Tap> taps, const LoRaParams& p) : taps_(std::move(taps)) {
    if (taps_.empty()) throw std::domain_error("channel needs at least one tap");
    if (taps_.front().delay != 0) throw std::domain_error("first tap delay must be 0");
    for (std::size_t i = 1; i < taps_.size(); ++i) {
      if (taps_[i].delay <= taps_[i - 1].delay) {
        throw std::domain_error("tap delays must be strictly increasing");
      }
    }
    if (static_cast<std::size_t>(taps_.back().delay) >= p.m()) {
      throw std::domain_error("tap delay must be smaller than M");
    }
  }

  static MultipathChannel one_path(const LoRaParams& p) { return MultipathChannel({Tap{0, 1.0}}, p); }

  /// 1 + alpha1 z^{-k1}; alpha1 == 0 degenerates to the one-path channel.
  static MultipathChannel two_path(cplx alpha1, int k1, const LoRaParams& p) {
    if (alpha1 == cplx{}) return one_path(p);
    return MultipathChannel({Tap{0, 1.0}, Tap{k1, alpha1}}, p);
  }

  const std::vector<Tap>& taps() const noexcept { return taps_; }
  std::size_t size() const noexcept { return taps_.size(); }
  const Tap& direct() const noexcept { return taps_.front(); }
  std::span<const Tap> echoes() const noexcept { return std::span<const Tap>(taps_).subspan(1); }

  double sum_abs_gain() const {
    double s = 0.0;
    for (const auto& t : taps_) s += std::abs(t.gain);
    return s;
  }

 private:
  std::vector<Tap> taps_;
};

struct NoiseConfig {
  double sigma2 = 1.0;  // complex variance; SNR = 1 / sigma2
  std::uint64_t seed = 0;

  void validate() const {
    if (!(sigma2 > 0.0)) throw std::domain_error("noise variance must be > 0");
  }
};

/// Same-SF interferer: aligned delay tau, power P_I = 1/SIR, phase offset phi.
struct InterfererConfig {
  int tau = 0;
  double p_i = 1.0;
  double phi = 0.0;

  static InterfererConfig from_sir_db(int tau, double sir_db, double phi = 0.0) {
    return InterfererConfig{tau, std::pow(10.0, -sir_db / 10.0), phi};
  }

  cplx gain() const { return std::polar(std::sqrt(p_i), phi); }

  void validate(const LoRaParams& p) const {
    if (tau < 0 || static_cast<std::size_t>(tau) >= p.m()) {
      throw std::domain_error("interferer delay must be in [0, M)");
    }
    if (!(p_i > 0.0)) throw std::domain_error("interferer power must be > 0");
  }
};

/// C2(z) = sum_{i<K} rho^i z^{-i}, K the smallest integer with rho^K <= 0.2.
inline MultipathChannel exp_decay_channel(double rho, const LoRaParams& p) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("rho must be in (0, 1)");
  std::vector<Tap> taps;
  double g = 1.0;
  for (int i = 0;; ++i) {
    taps.push_back(Tap{i, g});
    g *= rho;
    // relative slack so that rho = 0.2 stops at K = 1
    if (g <= 0.2 * (1.0 + 1e-12)) break;
  }
  return MultipathChannel(std::move(taps), p);
}

namespace detail {

// Delayed copy of the two-segment signal seen in the current window: the
// previous symbol's tail for k < delay, the current symbol afterwards.
template <class SampleFn>
void accumulate_delayed(std::span<cplx> out, int delay, cplx gain, std::uint32_t prev,
                        std::uint32_t cur, std::size_t m, SampleFn&& sample) {
  const auto d = static_cast<std::size_t>(delay);
  for (std::size_t k = 0; k < d; ++k) {
    out[k] += gain * sample(prev, static_cast<long long>(m - d + k));
  }
  for (std::size_t k = d; k < m; ++k) {
    out[k] += gain * sample(cur, static_cast<long long>(k - d));
  }
}

}  // namespace detail

inline void add_awgn(ChirpFrame& frame, double sigma2, Rng& rng) {
  if (!(sigma2 > 0.0)) throw std::domain_error("noise variance must be > 0");
  add_complex_noise(frame.samples, sigma2, rng);
}

/// Deterministic in `noise.seed`.
inline ChirpFrame add_awgn(ChirpFrame frame, const NoiseConfig& noise) {
  noise.validate();
  Rng rng = make_rng(noise.seed);
  add_complex_noise(frame.samples, noise.sigma2, rng);
  return frame;
}

/// Detection window of `a_cur` after the multipath channel, with the
/// previous symbol `a_prev` leaking in through the delayed paths.
inline ChirpFrame received_window_mpc(Symbol a_prev, Symbol a_cur, const MultipathChannel& ch,
                                      const std::optional<NoiseConfig>& noise, const LoRaParams& p) {
  check_symbol(a_prev, p);
  check_symbol(a_cur, p);
  ChirpFrame out{std::vector<cplx>(p.m())};
  auto sample = [&p](std::uint32_t a, long long k) { return chirp_sample(Symbol{a}, k, p); };
  for (const Tap& t : ch.taps()) {
    detail::accumulate_delayed(out.samples, t.delay, t.gain, a_prev.value, a_cur.value, p.m(), sample);
  }
  if (noise) return add_awgn(std::move(out), *noise);
  return out;
}

/// Desired symbol a1 plus one aligned interferer delayed by tau whose
/// symbols a2_prev / a2 straddle the window.
inline ChirpFrame received_window_interference(Symbol a1, Symbol a2_prev, Symbol a2,
                                               const InterfererConfig& cfg,
                                               const std::optional<NoiseConfig>& noise,
                                               const LoRaParams& p) {
  check_symbol(a1, p);
  check_symbol(a2_prev, p);
  check_symbol(a2, p);
  cfg.validate(p);
  ChirpFrame out{std::vector<cplx>(p.m())};
  auto sample = [&p](std::uint32_t a, long long k) { return chirp_sample(Symbol{a}, k, p); };
  detail::accumulate_delayed(out.samples, 0, 1.0, a1.value, a1.value, p.m(), sample);
  detail::accumulate_delayed(out.samples, cfg.tau, cfg.gain(), a2_prev.value, a2.value, p.m(), sample);
  if (noise) return add_awgn(std::move(out), *noise);
  return out;
}

// Channel description text: one "delay gain_re gain_im" tap per line,
// delays ascending from 0. Blank lines and '#' comments are ignored.

inline MultipathChannel parse_channel_text(std::istream& in, const LoRaParams& p) {
  std::vector<Tap> taps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long delay = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(ls >> delay)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::invalid_argument("channel line " + std::to_string(lineno) + ": bad delay");
    }
    if (!(ls >> re >> im)) {
      throw std::invalid_argument("channel line " + std::to_string(lineno) + ": expected 'delay re im'");
    }
    std::string rest;
    if (ls >> rest) throw std::invalid_argument("channel line " + std::to_string(lineno) + ": trailing text");
    if (delay < 0 || delay > 1 << 20) {
      throw std::invalid_argument("channel line " + std::to_string(lineno) + ": delay out of range");
    }
    taps.push_back(Tap{static_cast<int>(delay), cplx(re, im)});
  }
  return MultipathChannel(std::move(taps), p);
}

inline MultipathChannel read_channel_file(const std::string& path, const LoRaParams& p) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open channel file '" + path + "'");
  return parse_channel_text(in, p);
}

inline void write_channel_text(std::ostream& out, const MultipathChannel& ch) {
  std::ostringstream os;
  os.precision(17);
  for (const Tap& t : ch.taps()) os << t.delay << ' ' << t.gain.real() << ' ' << t.gain.imag() << '\n';
  out << os.str();
}

/// Compact "delay:re[:im],..." list, e.g. "0:1,1:0.7".
inline MultipathChannel parse_taps(const std::string& spec, const LoRaParams& p) {
  std::vector<Tap> taps;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(is, field, ':')) fields.push_back(field);
    if (fields.size() < 2 || fields.size() > 3) {
      throw std::invalid_argument("tap '" + item + "' must be delay:re or delay:re:im");
    }
    try {
      std::size_t used = 0;
      const int delay = std::stoi(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
      const double re = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
      double im = 0.0;
      if (fields.size() == 3) {
        im = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
      }
      taps.push_back(Tap{delay, cplx(re, im)});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("tap '" + item + "' is not numeric");
    }
  }
  return MultipathChannel(std::move(taps), p);
}

}  // namespace lorasim
