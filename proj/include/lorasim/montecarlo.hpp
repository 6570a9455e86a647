#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lorasim/channel.hpp"
#include "lorasim/parallel.hpp"
#include "lorasim/rng.hpp"
#include "lorasim/types.hpp"
#include "lorasim/waveform.hpp"

namespace lorasim {

struct SimConfig {
  std::uint64_t trials = 100000;  // exact count, or the cap when min_errors > 0
  std::uint64_t seed = 1;
  Detector detector = Detector::NonCoherent;
  bool warmup = true;              // random previous symbol; otherwise the window starts a burst
  std::uint64_t min_errors = 0;    // > 0: stop at the first batch boundary with this many errors
  std::uint64_t batch_size = 2048; // results depend on it, never on the thread count

  void validate() const {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    if (batch_size < 1) throw std::domain_error("batch_size must be >= 1");
  }
};

struct SerPoint {
  double snr_db = 0.0;
  double ser = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ci95 = 0.0;  // half-width, binomial normal approximation

  static SerPoint from_counts(double snr_db, std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) throw std::domain_error("SerPoint: no trials");
    const double p = static_cast<double>(errors) / static_cast<double>(trials);
    return {snr_db, p, errors, trials, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
  }
};

namespace detail {

struct BatchCount {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
};

// Runs batches of `trial_fn(rng, count) -> errors` until the budget or the
// error target is reached. Batch b of grid point `stream` always uses the
// same generator, and batches are accumulated in index order.
template <class TrialFn>
SerPoint run_point(double snr_db, std::uint64_t stream, const SimConfig& cfg, TrialFn&& trial_fn) {
  cfg.validate();
  const std::uint64_t total_batches = (cfg.trials + cfg.batch_size - 1) / cfg.batch_size;
  const std::uint64_t round = cfg.min_errors > 0 ? 16 : total_batches;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  for (std::uint64_t first = 0; first < total_batches; first += round) {
    const std::uint64_t n = std::min(round, total_batches - first);
    const auto counts = parallel_map<BatchCount>(n, [&](std::size_t i) {
      const std::uint64_t b = first + i;
      const std::uint64_t count = std::min(cfg.batch_size, cfg.trials - b * cfg.batch_size);
      Rng rng = make_rng(cfg.seed, stream, b);
      return BatchCount{trial_fn(rng, count), count};
    });
    for (const BatchCount& c : counts) {
      errors += c.errors;
      trials += c.trials;
      if (cfg.min_errors > 0 && errors >= cfg.min_errors) return SerPoint::from_counts(snr_db, errors, trials);
    }
  }
  return SerPoint::from_counts(snr_db, errors, trials);
}

// Reusable per-batch buffers for window simulation.
struct WindowWorkspace {
  explicit WindowWorkspace(const LoRaParams& p) : table(p), rx(p), frame(p.m()), bins(p.m()) {}
  ChirpTable table;
  ChirpReceiver rx;
  std::vector<cplx> frame;
  std::vector<cplx> bins;
};

inline Symbol detect_bins(std::span<const cplx> bins, Detector d) {
  return d == Detector::Coherent ? detect_coherent(bins) : detect_noncoherent(bins);
}

// Delayed path whose earlier segment is silent (start of a burst).
inline void accumulate_first(std::span<cplx> out, int delay, cplx gain, std::uint32_t cur, const ChirpTable& t) {
  const auto d = static_cast<std::size_t>(delay);
  for (std::size_t k = d; k < out.size(); ++k) out[k] += gain * t.sample(cur, static_cast<long long>(k - d));
}

}  // namespace detail

inline std::vector<SerPoint> simulate_mpc(const MultipathChannel& ch, std::span<const double> snr_grid,
                                          const SimConfig& cfg, const LoRaParams& p) {
  cfg.validate();
  std::vector<SerPoint> out;
  out.reserve(snr_grid.size());
  for (std::size_t s = 0; s < snr_grid.size(); ++s) {
    const double sigma2 = snr_db_to_sigma2(snr_grid[s]);
    out.push_back(detail::run_point(snr_grid[s], s, cfg, [&](Rng& rng, std::uint64_t count) {
      detail::WindowWorkspace ws(p);
      const auto sample = [&ws](std::uint32_t a, long long k) { return ws.table.sample(a, k); };
      std::uint64_t errors = 0;
      for (std::uint64_t t = 0; t < count; ++t) {
        const std::uint32_t a_prev = draw_symbol(rng, p);
        const std::uint32_t a = draw_symbol(rng, p);
        std::fill(ws.frame.begin(), ws.frame.end(), cplx{});
        for (const Tap& tap : ch.taps()) {
          if (cfg.warmup) {
            detail::accumulate_delayed(ws.frame, tap.delay, tap.gain, a_prev, a, p.m(), sample);
          } else {
            detail::accumulate_first(ws.frame, tap.delay, tap.gain, a, ws.table);
          }
        }
        add_complex_noise(ws.frame, sigma2, rng);
        ws.rx.demodulate(ws.frame, ws.bins);
        if (detail::detect_bins(ws.bins, cfg.detector).value != a) ++errors;
      }
      return errors;
    }));
  }
  return out;
}

/// Desired user with unit gain plus one interferer; the detector decides a1.
inline std::vector<SerPoint> simulate_interference(const InterfererConfig& icfg, std::span<const double> snr_grid,
                                                   const SimConfig& cfg, const LoRaParams& p) {
  cfg.validate();
  icfg.validate(p);
  const cplx gain = icfg.gain();
  std::vector<SerPoint> out;
  out.reserve(snr_grid.size());
  for (std::size_t s = 0; s < snr_grid.size(); ++s) {
    const double sigma2 = snr_db_to_sigma2(snr_grid[s]);
    out.push_back(detail::run_point(snr_grid[s], s, cfg, [&](Rng& rng, std::uint64_t count) {
      detail::WindowWorkspace ws(p);
      const auto sample = [&ws](std::uint32_t a, long long k) { return ws.table.sample(a, k); };
      std::uint64_t errors = 0;
      for (std::uint64_t t = 0; t < count; ++t) {
        const std::uint32_t a1 = draw_symbol(rng, p);
        const std::uint32_t a2_prev = draw_symbol(rng, p);
        const std::uint32_t a2 = draw_symbol(rng, p);
        for (std::size_t k = 0; k < p.m(); ++k) ws.frame[k] = ws.table.sample(a1, static_cast<long long>(k));
        if (cfg.warmup) {
          detail::accumulate_delayed(ws.frame, icfg.tau, gain, a2_prev, a2, p.m(), sample);
        } else {
          detail::accumulate_first(ws.frame, icfg.tau, gain, a2, ws.table);
        }
        add_complex_noise(ws.frame, sigma2, rng);
        ws.rx.demodulate(ws.frame, ws.bins);
        if (detail::detect_bins(ws.bins, cfg.detector).value != a1) ++errors;
      }
      return errors;
    }));
  }
  return out;
}

/// Streams `symbol_count` symbols through the channel by linear convolution
/// and detects each symbol on its own window. Every batch is an independent
/// burst, preceded by a random symbol when cfg.warmup is set.
inline SerPoint simulate_stream_mpc(std::uint64_t symbol_count, const MultipathChannel& ch, double snr_db,
                                    const SimConfig& cfg, const LoRaParams& p) {
  SimConfig stream_cfg = cfg;
  stream_cfg.trials = symbol_count;
  stream_cfg.validate();
  const double sigma2 = snr_db_to_sigma2(snr_db);
  const std::size_t m = p.m();
  return detail::run_point(snr_db, 0, stream_cfg, [&](Rng& rng, std::uint64_t count) {
    ChirpTable table(p);
    ChirpReceiver rx(p);
    const std::size_t lead = cfg.warmup ? 1 : 0;
    const std::size_t n_sym = lead + static_cast<std::size_t>(count);
    std::vector<std::uint32_t> symbols(n_sym);
    for (auto& a : symbols) a = draw_symbol(rng, p);

    std::vector<cplx> tx(n_sym * m);
    for (std::size_t l = 0; l < n_sym; ++l) {
      for (std::size_t k = 0; k < m; ++k) tx[l * m + k] = table.sample(symbols[l], static_cast<long long>(k));
    }
    // r[k] = sum_i alpha_i s[k - k_i], truncated to the transmitted span
    std::vector<cplx> rxs(tx.size());
    for (const Tap& tap : ch.taps()) {
      const auto d = static_cast<std::size_t>(tap.delay);
      for (std::size_t k = d; k < rxs.size(); ++k) rxs[k] += tap.gain * tx[k - d];
    }
    add_complex_noise(rxs, sigma2, rng);

    std::vector<cplx> bins(m);
    std::uint64_t errors = 0;
    for (std::size_t l = lead; l < n_sym; ++l) {
      rx.demodulate(std::span<const cplx>(rxs).subspan(l * m, m), bins);
      if (detail::detect_bins(bins, cfg.detector).value != symbols[l]) ++errors;
    }
    return errors;
  });
}

}  // namespace lorasim
