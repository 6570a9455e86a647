#include <gtest/gtest.h>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "lorasim/special_fn.hpp"
#include "lorasim/types.hpp"

using namespace lorasim;

namespace {

// Rician density of |a + n|, n ~ CN(0, 2): x exp(-(x^2 + a^2)/2) I0(ax).
double rician_pdf(double x, double a) {
  const double i0 = boost::math::cyl_bessel_i(0, a * x);
  return x * std::exp(-(x * x + a * a) / 2.0 + std::log(i0));
}

double integrate(double lo, double hi, double a) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [a](double x) { return rician_pdf(x, a); }, lo, hi, 15, 1e-14);
}

}  // namespace

TEST(Marcum, MatchesQuadratureOfRicianDensity) {
  const double as[] = {0.0, 0.3, 1.0, 2.5, 6.0};
  const double bs[] = {0.2, 1.0, 3.0, 8.0};
  for (double a : as) {
    for (double b : bs) {
      const Tails t = marcum_q1_tails(a, b);
      const double upper = integrate(b, std::max(a, b) + 40.0, a);
      const double lower = integrate(0.0, b, a);
      if (upper < lower) {
        EXPECT_NEAR(t.upper, upper, 1e-9 * upper) << a << ' ' << b;
        EXPECT_NEAR(t.lower, lower, 1e-9) << a << ' ' << b;
      } else {
        EXPECT_NEAR(t.lower, lower, 1e-9 * lower) << a << ' ' << b;
        EXPECT_NEAR(t.upper, upper, 1e-9) << a << ' ' << b;
      }
    }
  }
}

TEST(Marcum, MatchesBoostNonCentralChiSquare) {
  for (double lam : {0.5, 3.0, 40.0, 400.0, 5000.0}) {
    for (double x : {0.1, 2.0, 30.0, 500.0, 6000.0}) {
      const boost::math::non_central_chi_squared d(2, lam);
      const double lo = boost::math::cdf(d, x);
      const double hi = boost::math::cdf(boost::math::complement(d, x));
      const Tails t = noncentral_chi2_tails_2dof(x, lam);
      if (lo > 1e-290) EXPECT_NEAR(t.lower, lo, 1e-10 * lo) << lam << ' ' << x;
      if (hi > 1e-290) EXPECT_NEAR(t.upper, hi, 1e-10 * hi) << lam << ' ' << x;
    }
  }
}

TEST(Marcum, SpecialValues) {
  EXPECT_EQ(marcum_q1(3.0, 0.0), 1.0);
  EXPECT_NEAR(marcum_q1(0.0, 2.0), std::exp(-2.0), 1e-16);
  EXPECT_THROW(marcum_q1(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(marcum_q1(1.0, -1.0), std::domain_error);
  EXPECT_THROW(marcum_q1(INFINITY, 1.0), std::domain_error);
  // tails always sum to one and sit in [0, 1]
  for (double a : {1e-20, 1e-5, 0.7, 30.0, 300.0}) {
    for (double b : {1e-20, 1e-5, 0.7, 30.0, 300.0}) {
      const Tails t = marcum_q1_tails(a, b);
      EXPECT_NEAR(t.lower + t.upper, 1.0, 1e-15);
      EXPECT_GE(t.lower, 0.0);
      EXPECT_GE(t.upper, 0.0);
    }
  }
}

TEST(Chi2, CentralForm) {
  EXPECT_EQ(chi2_cdf_2dof(0.0), 0.0);
  EXPECT_NEAR(chi2_cdf_2dof(2.0), 1.0 - std::exp(-1.0), 1e-16);
  EXPECT_THROW(chi2_cdf_2dof(-1.0), std::domain_error);
  EXPECT_NEAR(log_chi2_cdf_2dof(80.0), std::log1p(-std::exp(-40.0)), 1e-30);
  EXPECT_NEAR(log_chi2_cdf_2dof(1e-6), std::log(-std::expm1(-5e-7)), 1e-12);
}

TEST(Chi2, NonCentralProperties) {
  for (double x : {0.0, 0.5, 4.0, 20.0}) EXPECT_NEAR(noncentral_chi2_cdf_2dof(x, 0.0), chi2_cdf_2dof(x), 1e-15);
  double prev = 0.0;
  for (double x = 0.0; x < 60.0; x += 0.5) {
    const double f = noncentral_chi2_cdf_2dof(x, 10.0);
    EXPECT_GE(f, prev);
    prev = f;
  }
  prev = 1.0;
  for (double lam = 0.0; lam < 60.0; lam += 0.5) {
    const double f = noncentral_chi2_cdf_2dof(8.0, lam);
    EXPECT_LE(f, prev);
    prev = f;
  }
  EXPECT_THROW(noncentral_chi2_cdf_2dof(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(noncentral_chi2_cdf_2dof(1.0, -1.0), std::domain_error);
}

TEST(Chi2, NonCentralAgainstSimulation) {
  // |sqrt(lambda) + n|^2 with n ~ CN(0, 2) is chi-square(2, lambda)
  const double lam = 2.0;
  const double x = 4.0;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 2000000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double re = std::sqrt(lam) + g(rng);
    const double im = g(rng);
    below += re * re + im * im <= x;
  }
  const double p = noncentral_chi2_cdf_2dof(x, lam);
  EXPECT_NEAR(static_cast<double>(below) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Rician, Forms) {
  for (double x : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(rician_cdf(x, 0.0, 1.5), 1.0 - std::exp(-x * x / (2 * 1.5 * 1.5)), 1e-15);
    for (double v : {0.5, 2.0}) {
      EXPECT_NEAR(rician_cdf(x, v, 1.5), noncentral_chi2_cdf_2dof(x * x / 2.25, v * v / 2.25), 1e-14);
    }
  }
  EXPECT_EQ(rician_cdf(0.0, 1.0, 1.0), 0.0);
  EXPECT_THROW(rician_cdf(1.0, 1.0, 0.0), std::domain_error);
}

TEST(Normal, Cdf) {
  EXPECT_DOUBLE_EQ(normal_cdf(2.0, 2.0, 3.0), 0.5);
  EXPECT_NEAR(normal_cdf(4.0, 1.0, 3.0), 0.8413447460685429, 1e-15);
  for (double z : {-5.0, -1.0, 0.3, 2.0}) EXPECT_NEAR(normal_cdf(-z, 0, 1), 1.0 - normal_cdf(z, 0, 1), 1e-15);
  EXPECT_THROW(normal_cdf(0.0, 0.0, 0.0), std::domain_error);
  EXPECT_NEAR(log_std_normal_cdf(-30.0), std::log(normal_cdf(-30.0, 0, 1)), 1e-12);
  EXPECT_NEAR(log_std_normal_cdf(9.0), -0.5 * std::erfc(9.0 / std::sqrt(2.0)), 1e-30);
}

TEST(GaussHermite, SmallRules) {
  const auto r1 = gauss_hermite(1);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1.nodes[0], 0.0);
  EXPECT_NEAR(r1.weights[0], std::sqrt(kPi), 1e-14);
  const auto r2 = gauss_hermite(2);
  EXPECT_NEAR(r2.nodes[0], -1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r2.weights[0], std::sqrt(kPi) / 2.0, 1e-14);
  EXPECT_THROW(gauss_hermite(0), std::domain_error);
  EXPECT_THROW(gauss_hermite(65), std::domain_error);
}

TEST(GaussHermite, ExactForPolynomials) {
  // int x^k e^{-x^2} dx = Gamma((k+1)/2) for even k, 0 for odd k
  for (int n : {5, 15, 31, 64}) {
    const auto r = gauss_hermite(n);
    for (int k = 0; k <= 2 * n - 1 && k <= 40; ++k) {
      double s = 0.0;
      double scale = 0.0;  // odd moments cancel; measure error against the absolute sum
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r.weights[i] * std::pow(r.nodes[i], k);
        scale += r.weights[i] * std::pow(std::abs(r.nodes[i]), k);
      }
      const double exact = k % 2 ? 0.0 : std::tgamma((k + 1) / 2.0);
      EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, scale)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussHermite, NodesAreHermiteRoots) {
  for (int n : {15, 40}) {
    const auto r = gauss_hermite(n);
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    for (double x : r.nodes) {
      // H_n by its recurrence, scaled to avoid overflow; check a sign change
      // in a 1e-13 bracket around the node
      const auto h = [n](double t) {
        double h0 = 1.0, h1 = 2.0 * t;
        for (int k = 1; k < n; ++k) {
          const double h2 = 2.0 * t * h1 - 2.0 * k * h0;
          h0 = h1 / 16.0;
          h1 = h2 / 16.0;
        }
        return h1;
      };
      const double d = 1e-13 * std::max(1.0, std::abs(x));
      EXPECT_LE(h(x - d) * h(x + d), 0.0) << "n=" << n << " x=" << x;
    }
  }
}
