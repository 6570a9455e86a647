#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <stdexcept>
#include <utility>

#include "lorasim/analytic_dft.hpp"
#include "lorasim/channel.hpp"
#include "lorasim/parallel.hpp"
#include "lorasim/ser_mpc.hpp"
#include "lorasim/special_fn.hpp"
#include "lorasim/types.hpp"

// Non-coherent SER of a desired user (unit gain) with one aligned same-SF
// interferer. A cases: interferer symbols differ across the window; B cases:
// they are equal. A2, A3 and B2 are the cases where an interferer peak lands
// on the desired bin a1.

namespace lorasim {

enum class InterfCase { A1, A2, A3, B1, B2 };

inline const char* to_string(InterfCase c) {
  switch (c) {
    case InterfCase::A1: return "A1";
    case InterfCase::A2: return "A2";
    case InterfCase::A3: return "A3";
    case InterfCase::B1: return "B1";
    case InterfCase::B2: return "B2";
  }
  return "?";
}

inline bool depends_on_a1(InterfCase c) {
  return c == InterfCase::A2 || c == InterfCase::A3 || c == InterfCase::B2;
}

struct InterfLambdas {
  double l1;  // peak of the current interferer symbol, amplitude (M - tau)
  double l2;  // peak of the previous interferer symbol, amplitude tau
  double l3;  // both symbols on one bin, amplitude M
};

inline InterfLambdas interf_lambdas(const InterfererConfig& cfg, double sigma2, const LoRaParams& p) {
  const double m = p.md();
  const double t = cfg.tau;
  const double k = 2.0 * cfg.p_i / (m * sigma2);
  return {k * (m - t) * (m - t), k * t * t, k * m * m};
}

/// Interferer contribution added to the desired peak M in a reinforced case.
inline cplx reinforcement(InterfCase c, Symbol a1, const InterfererConfig& cfg, const LoRaParams& p) {
  const Symbol a2 = shifted(a1, cfg.tau, p);
  const cplx at = interferer_alpha_tilde(cfg, a2, p);
  switch (c) {
    case InterfCase::A2: return (p.md() - cfg.tau) * at;
    case InterfCase::A3: return static_cast<double>(cfg.tau) * at;
    case InterfCase::B2: return p.md() * at;
    default: throw std::domain_error("reinforcement: case has no additive interference");
  }
}

/// Normalized desired-bin statistics: d without interference and the three
/// reinforced variants for symbol a1.
struct InterfDArgs {
  double d;
  double dA2;
  double dA3;
  double dB2;
};

inline InterfDArgs interf_d_args(Symbol a1, cplx w, const InterfererConfig& cfg, double sigma2,
                                 const LoRaParams& p) {
  const double m = p.md();
  const auto arg = [&](cplx extra) { return 2.0 * std::norm(m + extra + w) / (m * sigma2); };
  return {arg(0.0), arg(reinforcement(InterfCase::A2, a1, cfg, p)), arg(reinforcement(InterfCase::A3, a1, cfg, p)),
          arg(reinforcement(InterfCase::B2, a1, cfg, p))};
}

inline double log_pd_case(InterfCase c, std::optional<Symbol> a1, cplx w, const InterfererConfig& cfg,
                          double sigma2, const LoRaParams& p) {
  if (depends_on_a1(c) != a1.has_value()) {
    throw std::domain_error(std::string("pd_case: symbol a1 must be given exactly for A2, A3, B2 (case ") +
                            to_string(c) + ")");
  }
  const double m = p.md();
  const InterfLambdas lam = interf_lambdas(cfg, sigma2, p);
  const double x = a1 ? 2.0 * std::norm(m + reinforcement(c, *a1, cfg, p) + w) / (m * sigma2)
                      : 2.0 * std::norm(m + w) / (m * sigma2);
  if (x == 0.0) return -INFINITY;
  const double lf = log_chi2_cdf_2dof(x);
  switch (c) {
    case InterfCase::A1:
      return log_noncentral_chi2_cdf_2dof(x, lam.l1) + log_noncentral_chi2_cdf_2dof(x, lam.l2) + (m - 3.0) * lf;
    case InterfCase::A2: return log_noncentral_chi2_cdf_2dof(x, lam.l2) + (m - 2.0) * lf;
    case InterfCase::A3: return log_noncentral_chi2_cdf_2dof(x, lam.l1) + (m - 2.0) * lf;
    case InterfCase::B1: return log_noncentral_chi2_cdf_2dof(x, lam.l3) + (m - 2.0) * lf;
    case InterfCase::B2: return (m - 1.0) * lf;
  }
  return -INFINITY;
}

inline double pd_case(InterfCase c, std::optional<Symbol> a1, cplx w, const InterfererConfig& cfg, double sigma2,
                      const LoRaParams& p) {
  return std::exp(log_pd_case(c, a1, w, cfg, sigma2, p));
}

/// E[1 - P_{d|W}] for one case.
inline double pe_case(InterfCase c, std::optional<Symbol> a1, const InterfererConfig& cfg, double sigma2,
                      const LoRaParams& p, const GaussHermiteRule& rule) {
  return gh_expectation([&](cplx w) { return -std::expm1(log_pd_case(c, a1, w, cfg, sigma2, p)); }, sigma2, rule,
                        p);
}

namespace detail {

struct ReinforcedSums {
  double a2 = 0.0;
  double a3 = 0.0;
  double b2 = 0.0;
};

// Sums of the a1-dependent cases over a1 in [0, count), scaled by `repeat`.
inline ReinforcedSums reinforced_sums(std::size_t count, double repeat, const InterfererConfig& cfg, double sigma2,
                                      const LoRaParams& p, const GaussHermiteRule& rule) {
  struct Row {
    double a2, a3, b2;
  };
  const auto rows = parallel_map<Row>(count, [&](std::size_t i) {
    const Symbol a1{static_cast<std::uint32_t>(i)};
    return Row{pe_case(InterfCase::A2, a1, cfg, sigma2, p, rule), pe_case(InterfCase::A3, a1, cfg, sigma2, p, rule),
               pe_case(InterfCase::B2, a1, cfg, sigma2, p, rule)};
  });
  ReinforcedSums s;
  for (const Row& r : rows) {
    s.a2 += r.a2;
    s.a3 += r.a3;
    s.b2 += r.b2;
  }
  s.a2 *= repeat;
  s.a3 *= repeat;
  s.b2 *= repeat;
  return s;
}

inline double combine(const InterfererConfig& cfg, const ReinforcedSums& s, double sigma2, const LoRaParams& p,
                      const GaussHermiteRule& rule) {
  const double m = p.md();
  const double b1 = pe_case(InterfCase::B1, std::nullopt, cfg, sigma2, p, rule);
  const double a1 = pe_case(InterfCase::A1, std::nullopt, cfg, sigma2, p, rule);
  const double pa = (m * (m - 1.0) * (m - 2.0) * a1 + (m - 1.0) * (s.a2 + s.a3)) / (m * m * m);
  const double pb = (m * (m - 1.0) * b1 + s.b2) / (m * m * m);
  return pa + pb;
}

// tau = k 2^n with k odd; returns n.
inline int two_adic_order(int tau) {
  int n = 0;
  while (tau % 2 == 0) {
    tau /= 2;
    ++n;
  }
  return n;
}

}  // namespace detail

inline double ser_interference(const InterfererConfig& cfg, double sigma2, const LoRaParams& p,
                               const GaussHermiteRule& rule) {
  cfg.validate(p);
  check_sigma2(sigma2);
  if (cfg.tau == 0) {
    // the reinforced peak M(1 + alpha) no longer depends on a1
    const double b1 = pe_case(InterfCase::B1, std::nullopt, cfg, sigma2, p, rule);
    const double b2 = pe_case(InterfCase::B2, Symbol{0}, cfg, sigma2, p, rule);
    return ((p.md() - 1.0) * b1 + b2) / p.md();
  }
  return detail::combine(cfg, detail::reinforced_sums(p.m(), 1.0, cfg, sigma2, p, rule), sigma2, p, rule);
}

/// Same value for even tau = k 2^n, summing a1 over one period M / 2^n.
inline double ser_interference_reduced(const InterfererConfig& cfg, double sigma2, const LoRaParams& p,
                                       const GaussHermiteRule& rule) {
  cfg.validate(p);
  check_sigma2(sigma2);
  if (cfg.tau == 0 || cfg.tau % 2 != 0) {
    throw std::domain_error("ser_interference_reduced: tau must be a nonzero even delay");
  }
  const int n = detail::two_adic_order(cfg.tau);
  const std::size_t m1 = p.m() >> n;
  const double repeat = static_cast<double>(std::size_t{1} << n);
  return detail::combine(cfg, detail::reinforced_sums(m1, repeat, cfg, sigma2, p, rule), sigma2, p, rule);
}

/// Period M1 = M / 2^n of the reinforcement phases for tau = k 2^n, k odd.
inline std::size_t phase_period(int tau, const LoRaParams& p) {
  if (tau <= 0 || static_cast<std::size_t>(tau) >= p.m()) throw std::domain_error("phase_period: tau must be in (0, M)");
  return p.m() >> detail::two_adic_order(tau);
}

/// Interferer phases giving the worst (first) and best (second) performance.
inline std::pair<double, double> phi_extremes(int tau, const LoRaParams& p) {
  if (tau <= 0 || static_cast<std::size_t>(tau) >= p.m()) {
    throw std::domain_error("phi_extremes: tau must be in (0, M)");
  }
  if (tau % 2 != 0) return {kPi / p.md(), 0.0};
  return {0.0, kPi / static_cast<double>(phase_period(tau, p))};
}

}  // namespace lorasim
