#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorasim {

struct SnrRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  void validate() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
      throw std::invalid_argument("SNR range must be finite");
    }
    if (!(step > 0.0)) throw std::invalid_argument("SNR step must be > 0");
    if (!(start < stop)) throw std::invalid_argument("SNR start must be below stop");
  }

  /// Inclusive grid start, start + step, ..., up to stop (with rounding slack).
  std::vector<double> points() const {
    validate();
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
  }
};

/// "start:stop:step" in dB.
inline SnrRange parse_snr_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw std::invalid_argument("SNR range '" + text + "' must be start:stop:step");
  }
  const auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + s + "' in SNR range");
    }
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in SNR range");
    return v;
  };
  SnrRange r{num(text.substr(0, c1)), num(text.substr(c1 + 1, c2 - c1 - 1)), num(text.substr(c2 + 1))};
  r.validate();
  return r;
}

/// SNR (dB) at which a non-increasing SER curve crosses `target`, read on a
/// grid of spacing `step` inside [lo, hi] and interpolated linearly in
/// log10(SER). Returns nullopt when the crossing is outside the bracket.
inline std::optional<double> snr_at_ser(const std::function<double(double)>& ser, double target, double lo,
                                        double hi, double step = 0.1) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("snr_at_ser: target must be in (0, 1)");
  if (!(step > 0.0) || !(lo < hi)) throw std::invalid_argument("snr_at_ser: bad bracket");
  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  const auto at = [&](long long i) { return lo + static_cast<double>(i) * step; };
  if (ser(at(0)) <= target || ser(at(n)) > target) return std::nullopt;
  // invariant: ser(at(i0)) > target >= ser(at(i1))
  long long i0 = 0;
  long long i1 = n;
  while (i1 - i0 > 1) {
    const long long mid = (i0 + i1) / 2;
    (ser(at(mid)) > target ? i0 : i1) = mid;
  }
  const double y0 = std::log10(ser(at(i0)));
  const double y1 = std::log10(ser(at(i1)));
  const double lt = std::log10(target);
  if (!std::isfinite(y1) || y0 == y1) return at(i1);
  return at(i0) + (lt - y0) / (y1 - y0) * step;
}

}  // namespace lorasim
