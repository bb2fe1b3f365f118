#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qtoa/numerics/polynomial.hpp"
#include "qtoa/numerics/quadrature.hpp"
#include "qtoa/numerics/special.hpp"
#include "test_support.hpp"

namespace qn = qtoa::numerics;
using qtoa::test::kPi;

TEST(Hermite, LowOrders) {
  EXPECT_EQ(qn::hermite(0, 3.7), 1.0);
  EXPECT_EQ(qn::hermite(1, 2.0), 4.0);
  EXPECT_EQ(qn::hermite(3, 1.0), -4.0);
}

TEST(Hermite, MatchesExplicitPolynomials) {
  // H4 = 16x^4 - 48x^2 + 12, H5 = 32x^5 - 160x^3 + 120x
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    EXPECT_NEAR(qn::hermite(4, x), 16 * std::pow(x, 4) - 48 * x * x + 12, 1e-11);
    EXPECT_NEAR(qn::hermite(5, x), 32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x, 1e-10);
  }
}

TEST(Hermite, PolynomialAgreesWithRecurrence) {
  for (int n = 0; n <= 15; ++n)
    for (double x : {-2.5, -0.3, 0.7, 1.9})
      EXPECT_NEAR(qn::hermite_polynomial(n)(x), qn::hermite(n, x),
                  1e-12 * (1 + std::abs(qn::hermite(n, x))));
}

TEST(Hermite, DerivativeIdentityRandomPoints) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  for (int n = 1; n <= 12; ++n) {
    for (int t = 0; t < 10; ++t) {
      const double x = ux(rng), h = 1e-5;
      const double fd = (qn::hermite(n, x + h) - qn::hermite(n, x - h)) / (2 * h);
      const double exact = 2.0 * n * qn::hermite(n - 1, x);
      EXPECT_LT(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact))) << n << " " << x;
    }
  }
}

TEST(DoubleFactorial, ValuesAndGuard) {
  EXPECT_EQ(qn::double_factorial(-1), 1.0);
  EXPECT_EQ(qn::double_factorial(0), 1.0);
  EXPECT_EQ(qn::double_factorial(7), 105.0);
  EXPECT_EQ(qn::double_factorial(8), 384.0);
  EXPECT_THROW(qn::double_factorial(301), qtoa::Overflow);
}

TEST(GaussianMoment, Examples) {
  EXPECT_EQ(qn::gaussian_moment(0), 1.0);
  EXPECT_EQ(qn::gaussian_moment(1), 0.0);
  EXPECT_EQ(qn::gaussian_moment(4), 3.0);
  EXPECT_EQ(qn::gaussian_moment(6), 15.0);
  EXPECT_THROW(qn::gaussian_moment(302), qtoa::Overflow);
}

TEST(GaussianMoment, MatchesQuadrature) {
  for (int k = 0; k <= 16; ++k) {
    auto f = [k](double x) { return std::pow(x, k) * qn::standard_normal_density(x); };
    const double scale = std::max(1.0, qn::gaussian_moment(k));
    const auto r = qn::integrate(f, -INFINITY, INFINITY, 1e-12 * scale);
    EXPECT_NEAR(r.value, qn::gaussian_moment(k), 1e-9 * scale) << k;
  }
}

TEST(Polynomial, DerivativeMatchesFiniteDifference) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  for (int deg = 0; deg <= 20; ++deg) {
    std::vector<std::complex<double>> c(deg + 1);
    for (auto& v : c) v = {uc(rng), uc(rng)};
    const qn::ComplexPolynomial p(c);
    const auto dp = p.derivative();
    for (double x : {-0.8, 0.1, 0.9}) {
      const double h = 1e-6;
      const auto fd = (p(x + h) - p(x - h)) / (2 * h);
      const auto ex = dp(x);
      EXPECT_LT(std::abs(fd - ex), 1e-6 * std::max(1.0, std::abs(ex))) << deg;
    }
  }
}

TEST(Polynomial, ArithmeticAndTrim) {
  const qn::RealPolynomial p({1.0, 2.0});
  const qn::RealPolynomial q({1.0, -2.0});
  const auto prod = p * q;  // 1 - 4x^2
  EXPECT_EQ(prod.degree(), 2);
  EXPECT_EQ(prod.coefficient(2), -4.0);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(qn::gaussian_expectation(prod).value, 1.0 - 4.0);
}

TEST(Quadrature, InfiniteRangeExamples) {
  const auto norm = qn::integrate(qn::standard_normal_density, -INFINITY, INFINITY, 1e-10);
  EXPECT_NEAR(norm.value, 1.0, 1e-10);

  // (d sqrt(Phi)/dx)^2 = x^2 Phi / 4
  auto grad2 = [](double x) { return 0.25 * x * x * qn::standard_normal_density(x); };
  EXPECT_NEAR(qn::integrate(grad2, -INFINITY, INFINITY, 1e-12).value, 0.25, 1e-11);

  auto odd = [](double x) { return x * qn::standard_normal_density(x); };
  const auto r = qn::integrate(odd, -INFINITY, INFINITY, 1e-12);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Quadrature, SemiInfiniteAndReversed) {
  const auto half = qn::integrate(qn::standard_normal_density, 0.0, INFINITY, 1e-12);
  EXPECT_NEAR(half.value, 0.5, 1e-12);
  const auto left = qn::integrate(qn::standard_normal_density, -INFINITY, 0.0, 1e-12);
  EXPECT_NEAR(left.value, 0.5, 1e-12);
  auto sq = [](double x) { return x * x; };
  EXPECT_NEAR(qn::integrate(sq, 2.0, 0.0, 1e-12).value, -8.0 / 3.0, 1e-12);
}

TEST(Quadrature, RejectsBadTolerance) {
  auto f = [](double x) { return x; };
  EXPECT_THROW(qn::integrate_finite(f, 0.0, 1.0, 0.0), qtoa::InvalidParameter);
}

TEST(Quadrature, SegmentCapRaisesWithEstimate) {
  // 1/sqrt(x) cannot reach 1e-15 with two segments
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  qn::QuadratureOptions opt;
  opt.max_segments = 2;
  try {
    qn::integrate_finite(f, 0.0, 1.0, 1e-15, opt);
    FAIL() << "expected NumericalFailure";
  } catch (const qtoa::NumericalFailure& e) {
    EXPECT_NEAR(e.best_estimate(), 2.0, 0.1);
    EXPECT_GT(e.error_estimate(), 1e-15);
  }
}

TEST(OscillatoryQuadrature, GaussianFourierTransform) {
  const auto zero = qn::integrate_oscillatory(qn::standard_normal_density, 0.0, -INFINITY,
                                              INFINITY, 1e-12);
  EXPECT_NEAR(zero.value.real(), 1.0, 1e-12);

  const double tol = 1e-13;
  const auto r = qn::integrate_oscillatory(qn::standard_normal_density, 10.0, -INFINITY,
                                           INFINITY, tol);
  EXPECT_NEAR(std::abs(r.value), std::exp(-50.0), tol);
  EXPECT_LE(r.error_estimate, tol);
}

TEST(OscillatoryQuadrature, StopsAtRoundingLevel) {
  // A tolerance far below double rounding returns with an honest, larger error estimate.
  const auto r = qn::integrate_oscillatory(qn::standard_normal_density, 10.0, -INFINITY,
                                           INFINITY, 1e-25);
  EXPECT_GT(r.error_estimate, 1e-25);
  EXPECT_LT(r.error_estimate, 1e-14);
  EXPECT_LE(std::abs(std::abs(r.value) - std::exp(-50.0)), 10 * r.error_estimate);
}

TEST(OscillatoryQuadrature, FullPeriodVanishes) {
  const double kappa = 5.0;
  auto one = [](double) { return 1.0; };
  const auto r = qn::integrate_oscillatory(one, kappa, 0.0, 2 * kPi / kappa, 1e-13);
  EXPECT_LT(std::abs(r.value), 1e-13);
}

TEST(OscillatoryQuadrature, AgreesWithSimpsonOracle) {
  // integral of x^2 Phi(x) cos(3x) over the line = (1 - 9) e^{-9/2}
  auto f = [](double x) { return x * x * qn::standard_normal_density(x); };
  const auto r = qn::integrate_oscillatory(f, 3.0, -INFINITY, INFINITY, 1e-13);
  const double oracle = static_cast<double>(qtoa::test::simpson(
      [](long double x) {
        return x * x * std::exp(-x * x / 2) / std::sqrt(2 * 3.14159265358979323846L) *
               std::cos(3 * x);
      },
      -14.0L, 14.0L, 40000));
  EXPECT_NEAR(oracle, -8.0 * std::exp(-4.5), 1e-12);
  EXPECT_NEAR(r.value.real(), oracle, 1e-12);
  EXPECT_NEAR(r.value.imag(), 0.0, 1e-13);
}
