#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "critpoly/errors.hpp"
#include "critpoly/pipeline.hpp"
#include "critpoly/quadrature.hpp"

using namespace critpoly;

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, x);
  }
  return m;
}

}  // namespace

TEST(Approximate, AbsAtDegree201MeetsErrorBound) {
  const ApproxResult r = approximate(FunctionSpec::parse("abs"), 201, PipelineConfig{});
  ASSERT_TRUE(r.solve.converged);
  EXPECT_LE(r.sup_error, 13.0 / 201.0);
  EXPECT_LE(max_of(r.endpoint_residuals), 1e-8);
  EXPECT_EQ(r.approximant.degree(), 202);
  EXPECT_EQ(r.derivative_roots.z.size(), 201u);
  EXPECT_EQ(r.anchor, 0.0);
  EXPECT_NEAR(r.approximant(0.0), 0.0, 1e-14);
  EXPECT_TRUE(check_critical_points(r).ok());
}

TEST(Approximate, EndpointResidualsAreIndependentlyReproduced) {
  const FunctionSpec f = FunctionSpec::parse("sin:2");
  const ApproxResult r = approximate(f, 105, PipelineConfig{});
  ASSERT_TRUE(r.solve.converged);
  ASSERT_EQ(r.endpoint_x.size(), r.endpoint_residuals.size());
  for (std::size_t i = 0; i < r.endpoint_x.size(); ++i) {
    const double x = r.endpoint_x[i];
    EXPECT_NEAR(std::abs(r.approximant(x) - std::sin(2.0 * x)), r.endpoint_residuals[i], 1e-13);
    EXPECT_LE(r.endpoint_residuals[i], 1e-8);
  }
}

TEST(Approximate, ConstantFunctionGivesZeroTargets) {
  const ApproxResult r = approximate(FunctionSpec::parse("poly:0.75"), 33, PipelineConfig{});
  EXPECT_EQ(r.anchor, 0.75);
  EXPECT_EQ(r.scale_factor, 1.0);
  EXPECT_LE(max_of(r.endpoint_residuals), 1e-8);
  EXPECT_TRUE(check_critical_points(r).ok());
}

TEST(Approximate, LinearFunctionMatchesEndpointsAtSolverFloor) {
  const ApproxResult r = approximate(FunctionSpec::parse("poly:0,1"), 105, PipelineConfig{});
  ASSERT_TRUE(r.solve.converged);
  EXPECT_LE(max_of(r.endpoint_residuals), 1e-8);
}

TEST(Approximate, DerivativeIsScaledPerturbedChebyshev) {
  const ApproxResult r = approximate(FunctionSpec::parse("relu"), 57, PipelineConfig{});
  const ChebSeries d = r.approximant.derivative();
  for (double x = -0.99; x < 1.0; x += 0.07) {
    EXPECT_NEAR(d(x), r.scale_factor * eval_perturbed(r.derivative_roots, x), 1e-9 * r.scale_factor);
  }
}

TEST(Approximate, RejectsBadInput) {
  EXPECT_THROW(approximate(FunctionSpec::parse("abs"), 200, PipelineConfig{}), InvalidInput);
  EXPECT_THROW(approximate(FunctionSpec::parse("sign"), 33, PipelineConfig{}), InvalidInput);
  PipelineConfig bad;
  bad.target_level = 0.0;
  EXPECT_THROW(approximate(FunctionSpec::parse("abs"), 33, bad), InvalidInput);
  EXPECT_THROW(require_group_degree(1), InvalidInput);
  try {
    require_group_degree(200);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("degree must be ≡ 1 (mod 8)"), std::string::npos);
  }
}

// |P - f| on each matched group is at most (A + max|P'|) |G|: the Lipschitz sandwich.
TEST(ApproximateProperty, ErrorLocalizesToGroups) {
  const FunctionSpec f = FunctionSpec::parse("abs");
  const ApproxResult r = approximate(f, 105, PipelineConfig{});
  const NodalGrid g = build_grid(105);
  for (int k = 1; k <= g.group_count(); ++k) {
    const Interval G = g.group(k);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = G.lo + G.length() * i / 200.0;
      worst = std::max(worst, std::abs(r.approximant(x) - f(x)));
    }
    // the group touching a matched endpoint is pinned there; every group is matched here
    EXPECT_LE(worst, (f.lipschitz() + r.max_derivative) * G.length() * (1 + 1e-9)) << k;
  }
}

TEST(SamplePoints, CoversEveryGap) {
  const std::vector<double> roots{-0.5, 0.25};
  const auto pts = sample_points(roots, 4);
  EXPECT_EQ(pts.front(), -1.0);
  EXPECT_EQ(pts.back(), 1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LT(pts[i - 1], pts[i]);
  }
  EXPECT_NE(std::find(pts.begin(), pts.end(), -0.5), pts.end());
}

TEST(RateStudy, SlopeNearMinusOneForAbs) {
  const RateStudy s = rate_study(FunctionSpec::parse("abs"), {105, 201, 401}, PipelineConfig{});
  ASSERT_TRUE(s.fit.fitted);
  EXPECT_GE(s.fit.slope, -1.15);
  EXPECT_LE(s.fit.slope, -0.85);
  for (const RateRow& row : s.rows) {
    EXPECT_NEAR(row.reference, 0.280169 / row.n, 1e-18);
    EXPECT_NEAR(row.log_n, std::log(row.n), 1e-15);
    // never better than the best polynomial approximation
    EXPECT_GT(row.sup_error, row.reference);
  }
  EXPECT_THROW(rate_study(FunctionSpec::parse("abs"), {}, PipelineConfig{}), InvalidInput);
}

TEST(Pairing, PolynomialPairingIsExact) {
  // integral over [-1,1] of T_3 * x = integral of (4x^4 - 3x^2) = 8/5 - 2 = -2/5
  EXPECT_NEAR(pairing_integral(ChebSeries::basis(3), FunctionSpec::parse("poly:0,1")), -0.4, 1e-15);
  EXPECT_NEAR(exact_pairing(FunctionSpec::parse("sign"), FunctionSpec::parse("poly:0,1")), 1.0, 1e-14);
  EXPECT_NEAR(exact_pairing(FunctionSpec::parse("abs"), FunctionSpec::parse("poly:0,0,1")), 0.5, 1e-14);
}

TEST(Weakstar, GroupIntegralsMatchTheStepFunction) {
  const FunctionSpec f = FunctionSpec::parse("sign");
  const WeakstarPolynomial w = weakstar_polynomial(f, 105, PipelineConfig{});
  ASSERT_TRUE(w.solve.converged);
  const NodalGrid g = build_grid(105);
  for (int k = 1; k <= g.group_count(); ++k) {
    const Interval G = g.group(k);
    EXPECT_NEAR(integrate_over(w.series, G.lo, G.hi), f.integral(G.lo, G.hi), 1e-9 * G.length() * w.scale);
  }
}

TEST(Weakstar, OddTestFunctionErrorDecreasesAndConstantIsAboveOne) {
  const WeakstarStudy s = weakstar_demo(FunctionSpec::parse("sign"), {105, 201, 401},
                                        {FunctionSpec::parse("poly:0,1")}, PipelineConfig{});
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_GT(s.rows[0].error, s.rows[1].error);
  EXPECT_GT(s.rows[1].error, s.rows[2].error);
  EXPECT_GT(s.empirical_c, 1.0);
}

TEST(SmallSet, MeasureNegativeFindsExactZeros) {
  const std::vector<double> grid{-1.0, -0.3, 0.2, 0.9, 1.0};
  // x^2 - 1/4 < 0 exactly on (-1/2, 1/2)
  EXPECT_NEAR(measure_negative([](double x) { return x * x - 0.25; }, grid), 1.0, 1e-14);
}

TEST(SmallSet, ReferenceMatchesAngularCount) {
  // |T_n| < tau on arcs of angular half-width asin(tau)/n about each zero
  for (int n : {9, 33, 401}) {
    for (double tau : {0.05, 0.5}) {
      const double w = std::asin(tau) / n;
      double expect = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double th = std::numbers::pi * (2 * k - 1) / (2.0 * n);
        expect += std::cos(th - w) - std::cos(th + w);
      }
      EXPECT_NEAR(chebyshev_small_set_measure(n, tau), expect, 1e-13);
      EXPECT_NEAR(small_set_measure(chebyshev_roots(build_grid(n)), 1.0, tau), expect, 1e-9);
    }
  }
  EXPECT_NEAR(chebyshev_small_set_measure(401, 0.5), 2.0 / 3.0, 1e-3);
}

TEST(Divergence, DensitiesAndMeasuresAreReported) {
  const DivergenceStudy s = divergence_stats(FunctionSpec::parse("abs"), {201}, {0.1, 0.5}, PipelineConfig{});
  ASSERT_EQ(s.measures.size(), 2u);
  ASSERT_EQ(s.densities.size(), 4u);
  EXPECT_NEAR(s.measures[1].reference, chebyshev_small_set_measure(201, 0.5), 1e-15);
  for (const DensityRow& d : s.densities) {
    EXPECT_GE(d.positive, 0.2);
    EXPECT_GE(d.negative, 0.2);
    EXPECT_LE(d.positive + d.negative, 1.0);
  }
}
