#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "critpoly/chebyshev.hpp"
#include "critpoly/errors.hpp"

using namespace critpoly;

namespace {

double trig_t(int n, double x) { return std::cos(n * std::acos(x)); }

}  // namespace

TEST(ChebSeries, BasisMatchesTrigonometricDefinition) {
  for (int n : {0, 1, 2, 7, 64, 301}) {
    const ChebSeries t = ChebSeries::basis(n);
    for (double x : {-1.0, -0.93, -0.2, 0.0, 0.41, 0.999, 1.0}) {
      EXPECT_NEAR(t(x), trig_t(n, x), 1e-12) << "n=" << n << " x=" << x;
    }
  }
}

TEST(ChebSeries, ZeroAndConstant) {
  EXPECT_EQ(ChebSeries()(0.3), 0.0);
  EXPECT_EQ(ChebSeries::constant(2.5)(-0.7), 2.5);
  EXPECT_EQ(ChebSeries::constant(2.5).degree(), 0);
}

TEST(ChebSeries, RejectsNonFiniteCoefficients) {
  EXPECT_THROW(ChebSeries(std::vector<double>{1.0, NAN}), InvalidInput);
  EXPECT_EQ(ChebSeries(std::vector<double>{}).degree(), 0);
  EXPECT_THROW(ChebSeries::basis(-1), InvalidInput);
}

TEST(ChebSeries, DerivativeOfBasisIsNTimesU) {
  // T_n'(cos th) = n sin(n th) / sin(th)
  for (int n : {1, 2, 5, 33}) {
    const ChebSeries d = ChebSeries::basis(n).derivative();
    EXPECT_EQ(d.degree(), n - 1);
    for (double th : {0.3, 1.1, 2.0, 2.9}) {
      EXPECT_NEAR(d(std::cos(th)), n * std::sin(n * th) / std::sin(th), 1e-10 * n * n);
    }
  }
  EXPECT_EQ(ChebSeries::constant(3.0).derivative().degree(), 0);
  EXPECT_EQ(ChebSeries::constant(3.0).derivative()(0.2), 0.0);
}

TEST(ChebSeries, TrimmedDropsNegligibleTail) {
  const ChebSeries s(std::vector<double>{1.0, 0.5, 1e-20, 0.0});
  EXPECT_EQ(s.trimmed().degree(), 1);
  EXPECT_EQ(ChebSeries(std::vector<double>{0.0, 0.0}).trimmed().degree(), 0);
}

TEST(ChebEval, FlagsExtrapolationAndRejectsNan) {
  const ChebSeries t = ChebSeries::basis(3);
  EvalDiagnostics diag;
  EXPECT_NEAR(cheb_eval(t, 1.5, &diag), 4 * 3.375 - 3 * 1.5, 1e-12);
  EXPECT_TRUE(diag.extrapolated);
  EvalDiagnostics inside;
  cheb_eval(t, 0.5, &inside);
  EXPECT_FALSE(inside.extrapolated);
  EXPECT_THROW(cheb_eval(t, NAN), InvalidInput);
}

TEST(ExtremePoints, AreCosinesInDescendingOrder) {
  const auto x = extreme_points(8);
  ASSERT_EQ(x.size(), 9u);
  for (int j = 0; j <= 8; ++j) {
    EXPECT_NEAR(x[static_cast<std::size_t>(j)], std::cos(std::numbers::pi * j / 8), 1e-15);
  }
  for (std::size_t j = 1; j < x.size(); ++j) {
    EXPECT_LT(x[j], x[j - 1]);
  }
}

TEST(ChebInterpolate, ReproducesPolynomialsExactly) {
  // x^3 = (3 T_1 + T_3) / 4
  const auto x = extreme_points(5);
  std::vector<double> v;
  for (double p : x) {
    v.push_back(p * p * p);
  }
  const ChebSeries s = cheb_interpolate(v);
  const auto c = s.coeffs();
  ASSERT_EQ(c.size(), 6u);
  EXPECT_NEAR(c[1], 0.75, 1e-14);
  EXPECT_NEAR(c[3], 0.25, 1e-14);
  for (std::size_t i : {0u, 2u, 4u, 5u}) {
    EXPECT_NEAR(c[i], 0.0, 1e-14);
  }
}

TEST(ChebAntiderivative, MatchesClosedFormIntegral) {
  // integral of T_n over [-1,1] = (1 + (-1)^n) / (1 - n^2) for n != 1
  for (int n : {0, 2, 3, 4, 9, 40}) {
    const double expect = n == 1 ? 0.0 : (1.0 + (n % 2 == 0 ? 1.0 : -1.0)) / (1.0 - n * n);
    EXPECT_NEAR(integrate_over(ChebSeries::basis(n), -1.0, 1.0), expect, 1e-14) << n;
  }
  const ChebSeries q = cheb_antiderivative(ChebSeries::basis(2), 0.25, 7.0);
  EXPECT_NEAR(q(0.25), 7.0, 1e-14);
  // integral of 2x^2 - 1 = 2x^3/3 - x
  auto prim = [](double x) { return 2.0 * x * x * x / 3.0 - x; };
  EXPECT_NEAR(q(0.9) - q(-0.4), prim(0.9) - prim(-0.4), 1e-14);
  EXPECT_THROW(integrate_over(ChebSeries::basis(2), 0.5, 0.1), InvalidInput);
}

TEST(Multiply, ProductIdentity) {
  const ChebSeries p = multiply(ChebSeries::basis(7), ChebSeries::basis(3));
  const auto c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double want = (i == 10 || i == 4) ? 0.5 : 0.0;
    EXPECT_NEAR(c[i], want, 1e-13) << i;
  }
}

TEST(FromMonomial, ConvertsPowerBasis) {
  const std::vector<double> m{1.0, -2.0, 0.5, 3.0};
  const ChebSeries s = from_monomial(m);
  for (double x : {-1.0, -0.3, 0.2, 0.8}) {
    EXPECT_NEAR(s(x), 1.0 - 2.0 * x + 0.5 * x * x + 3.0 * x * x * x, 1e-14);
  }
}

TEST(ChebSeriesProperty, DerivativeOfAntiderivativeIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(1 + trial));
    for (double& v : c) {
      v = u(rng);
    }
    const ChebSeries s(c);
    const ChebSeries back = cheb_antiderivative(s, u(rng), u(rng)).derivative();
    for (double x : {-0.9, -0.1, 0.35, 0.77}) {
      EXPECT_NEAR(back(x), s(x), 1e-12);
    }
  }
}
