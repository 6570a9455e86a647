#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace lorasim {

/// Lower and upper tail of a distribution at one point, each computed
/// directly so that the small one keeps full relative precision.
struct Tails {
  double lower;  // P[X <= x]
  double upper;  // P[X > x]
};

// ---------------------------------------------------------------------------
// Chi-square with 2 degrees of freedom
// ---------------------------------------------------------------------------

inline double chi2_cdf_2dof(double x) {
  if (!(x >= 0.0)) throw std::domain_error("chi2_cdf_2dof: x must be >= 0");
  return -std::expm1(-0.5 * x);
}

/// log(1 - e^{-x/2}), -inf at x = 0.
inline double log_chi2_cdf_2dof(double x) {
  const double h = 0.5 * x;
  if (h > std::numbers::ln2) return std::log1p(-std::exp(-h));
  return std::log(-std::expm1(-h));
}

// ---------------------------------------------------------------------------
// Marcum Q_1
// ---------------------------------------------------------------------------

/// Both tails of the first-order Marcum function: upper = Q_1(a, b),
/// lower = 1 - Q_1(a, b).
///
/// The series
///   Q_1     = e^{-(a^2+b^2)/2} sum_{k>=0} (a/b)^k I_k(ab)   (a < b)
///   1 - Q_1 = e^{-(a^2+b^2)/2} sum_{k>=1} (b/a)^k I_k(ab)   (a >= b)
/// is evaluated with exponentially scaled Bessel functions, so
/// e^{-(a^2+b^2)/2} I_k(ab) = e^{-(a-b)^2/2} [e^{-ab} I_k(ab)] never overflows.
/// The I_k come from Miller's backward recurrence normalized by
/// e^x = I_0(x) + 2 sum_{k>=1} I_k(x); the sums are accumulated in the same
/// backward pass (Horner), so no table is stored. Both series have positive
/// terms, giving full relative accuracy on the small tail.
inline Tails marcum_q1_tails(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q1: arguments must be >= 0");
  if (std::isinf(a) || std::isinf(b)) throw std::domain_error("marcum_q1: arguments must be finite");
  if (b == 0.0) return {0.0, 1.0};
  if (a == 0.0) return {-std::expm1(-0.5 * b * b), std::exp(-0.5 * b * b)};

  const double x = a * b;
  const bool upper_series = a < b;
  const double r = upper_series ? a / b : b / a;
  const double gap = a - b;
  const double envelope = std::exp(-0.5 * gap * gap);
  if (envelope == 0.0) return upper_series ? Tails{1.0, 0.0} : Tails{0.0, 1.0};

  if (x < 1e-30) {  // I_0 ~ 1, I_1 ~ x/2, the rest below rounding
    if (upper_series) {
      const double upper = std::min(1.0, envelope);
      return {1.0 - upper, upper};
    }
    const double lower = envelope * r * 0.5 * x;
    return {lower, 1.0 - lower};
  }

  // e^{-ab} I_k(ab) / e^{-ab} I_0(ab) ~ exp(-k^2 / (2ab)) once k exceeds a few,
  // and it falls off factorially when ab is small; start well past 1e-20.
  const int start = 30 + static_cast<int>(std::ceil(std::sqrt(100.0 * x)));

  constexpr double kBig = 1e250;
  double i_next = 0.0;  // I_{k+1}, unnormalized
  double i_cur = 1e-30; // I_k
  double horner = 0.0;  // sum_{j=k..start} r^{j-k} I_j, built downwards
  double norm = 0.0;    // 2 sum_{j>=k} I_j
  for (int k = start; k >= 1; --k) {
    horner = horner * r + i_cur;
    norm += 2.0 * i_cur;
    const double i_prev = i_next + (2.0 * k / x) * i_cur;
    i_next = i_cur;
    i_cur = i_prev;
    if (i_cur > kBig) {
      i_cur /= kBig;
      i_next /= kBig;
      horner /= kBig;
      norm /= kBig;
    }
  }
  norm += i_cur;  // + I_0

  if (upper_series) {
    const double upper = std::min(1.0, envelope * (i_cur + r * horner) / norm);
    return {1.0 - upper, upper};
  }
  const double lower = std::min(1.0, envelope * (r * horner) / norm);
  return {lower, 1.0 - lower};
}

inline double marcum_q1(double a, double b) { return marcum_q1_tails(a, b).upper; }

// ---------------------------------------------------------------------------
// Non-central chi-square (2 dof), Rician, normal
// ---------------------------------------------------------------------------

inline Tails noncentral_chi2_tails_2dof(double x, double lambda) {
  if (!(x >= 0.0) || !(lambda >= 0.0)) {
    throw std::domain_error("noncentral_chi2_cdf_2dof: x and lambda must be >= 0");
  }
  return marcum_q1_tails(std::sqrt(lambda), std::sqrt(x));
}

inline double noncentral_chi2_cdf_2dof(double x, double lambda) {
  return noncentral_chi2_tails_2dof(x, lambda).lower;
}

inline double log_noncentral_chi2_cdf_2dof(double x, double lambda) {
  if (lambda == 0.0) return log_chi2_cdf_2dof(x);
  const Tails t = noncentral_chi2_tails_2dof(x, lambda);
  return t.upper < 0.5 ? std::log1p(-t.upper) : std::log(t.lower);
}

/// CDF of |v + n| with n circular Gaussian of per-component deviation sigma.
inline double rician_cdf(double x, double v, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("rician_cdf: sigma must be > 0");
  if (!(x >= 0.0) || !(v >= 0.0)) throw std::domain_error("rician_cdf: x and v must be >= 0");
  return marcum_q1_tails(v / sigma, x / sigma).lower;
}

inline double normal_cdf(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("normal_cdf: sigma must be > 0");
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

/// log Phi(z) for the standard normal.
inline double log_std_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
}

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature
// ---------------------------------------------------------------------------

/// N-point physicists' rule: int f(x) e^{-x^2} dx ~ sum_i w_i f(x_i).
/// Nodes ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Newton iteration on the orthonormal Hermite recurrence, with the usual
/// asymptotic initial guesses for the largest roots.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1 || n > 64) throw std::domain_error("gauss_hermite: n must be in [1, 64]");
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const int half = (n + 1) / 2;
  std::vector<double> x(n), w(n);
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("gauss_hermite: Newton iteration did not converge");
    if (n % 2 == 1 && i == half - 1) z = 0.0;
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return GaussHermiteRule{std::move(x), std::move(w)};
}

}  // namespace lorasim
