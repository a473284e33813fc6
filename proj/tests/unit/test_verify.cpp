#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "critpoly/errors.hpp"
#include "critpoly/verify.hpp"

using namespace critpoly;

namespace {

constexpr std::uint64_t kSeed = 20240601;

void expect_pass(const CheckResult& r) {
  EXPECT_TRUE(r.passed) << r.id << " " << r.context << " " << r.reason;
  EXPECT_FALSE(r.skipped) << r.id << " " << r.reason;
}

}  // namespace

TEST(Catalog, IdsAreUniqueAndKnown) {
  std::set<std::string> ids;
  for (const CheckInfo& c : check_catalog()) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    EXPECT_TRUE(is_known_check(c.id));
    EXPECT_FALSE(c.property.empty());
  }
  EXPECT_FALSE(is_known_check("no-such-check"));
}

class GeometryAcrossDegrees : public ::testing::TestWithParam<int> {};

TEST_P(GeometryAcrossDegrees, NodalAndAreaChecksPass) {
  const int n = GetParam();
  expect_pass(check_nodal_length_upper(n));
  expect_pass(check_nodal_length_bounds(n));
  expect_pass(check_nodal_length_monotone(n));
  expect_pass(check_nodal_length_growth(n));
  expect_pass(check_nodal_distance_lower(n));
  expect_pass(check_nodal_distance_ratio(n));
  expect_pass(check_node_area(n));
  expect_pass(check_node_square_average(n));
  expect_pass(check_adjacent_cancellation(n));
  expect_pass(check_product_identity(n));
}

INSTANTIATE_TEST_SUITE_P(Degrees, GeometryAcrossDegrees, ::testing::Values(9, 33, 105, 1001));

TEST(Geometry, NodeAreaBoundsAreTight) {
  const CheckResult r = check_node_area(1001);
  ASSERT_EQ(r.observed.size(), 2u);
  EXPECT_NEAR(r.observed[0], 2.0 / M_PI, 1e-6);
}

TEST(Geometry, DistanceRatioConstantIsReported) {
  const CheckResult r = check_nodal_distance_ratio(105);
  ASSERT_GE(r.observed.size(), 2u);
  // the measured constant sits far below the proven 16 and near the conjectured 2
  EXPECT_LT(r.observed[1], 2.0);
}

TEST(Areas, ErdosGrunwaldTwoThirds) { expect_pass(check_erdos_grunwald(kSeed)); }

TEST(Distortion, SuitePasses) {
  expect_pass(check_distortion_agreement(kSeed, 16));
  expect_pass(check_distortion_monotone(kSeed, 16));
  expect_pass(check_distortion_sign(kSeed, 16));
  expect_pass(check_distortion_cubic_decay(kSeed, 16));
  expect_pass(check_distortion_near_field(kSeed, 16));
  expect_pass(check_distortion_intermediate(kSeed, 16));
}

TEST(MinMaxCubic, KnownSupNorms) {
  // roots (0,0,0): x^3 peaks at 1
  EXPECT_NEAR(cubic_sup_norm(0.0, 0.0, 0.0), 1.0, 1e-15);
  // T_3 / 4 has sup 1/4
  const double r = std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(cubic_sup_norm(-r, 0.0, r), 0.25, 1e-15);
  EXPECT_NEAR(cubic_sup_norm(-1.0, -1.0, -1.0), 8.0, 1e-15);
  expect_pass(check_minmax_cubic(100));
  EXPECT_THROW(check_minmax_cubic(10), InvalidInput);
}

TEST(GroupChecks, PassAtDegree33And201) {
  for (int n : {33, 201}) {
    expect_pass(check_internal_slope(n));
    expect_pass(check_f_covering(n, 0.05));
    expect_pass(check_coupling(n, 0.1, kSeed, 16));
    expect_pass(check_exterior_smallness(n, 0.1, kSeed, 8));
    expect_pass(check_average_bound(n, 0.1, kSeed, 16));
    expect_pass(check_target_recovery(n, 0.1, kSeed, 4));
  }
}

TEST(GroupChecks, InternalSlopeIsNearThree) {
  const CheckResult r = check_internal_slope(105);
  ASSERT_EQ(r.observed.size(), 2u);
  EXPECT_GT(r.observed[1], 2.5);
  EXPECT_LT(r.observed[1], 3.5);
}

TEST(GroupChecks, SkipWithoutInteriorGroups) {
  const CheckResult r = check_internal_slope(9);
  EXPECT_TRUE(r.skipped);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(check_coupling(10, 0.1, kSeed, 2).skipped);
}

TEST(SupStability, ZeroPerturbationGivesFactorOne) {
  const CheckResult r = check_sup_stability(33, {0.0}, kSeed, 2);
  ASSERT_EQ(r.observed.size(), 1u);
  EXPECT_EQ(r.observed[0], 1.0);
}

TEST(SupStability, TinyPerturbationWithinOnePointTwo) {
  const CheckResult r = check_sup_stability(105, {0.001}, kSeed, 16);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.observed[0], 1.2);
}

TEST(SupStability, FivePercentPerturbationWithinOnePointFiveAtDegree105) {
  const CheckResult r = check_sup_stability(105, {0.05}, kSeed, 16);
  ASSERT_EQ(r.observed.size(), 1u);
  EXPECT_LE(r.observed[0], 1.5) << "worst per-group sup factor";
}

TEST(SmallSets, ReferenceAndPerturbed) {
  expect_pass(check_small_set_reference(401, 0.5));
  expect_pass(check_small_set_perturbed(105, kSeed, 8));
  expect_pass(check_level_density(401, kSeed, 4));
  EXPECT_TRUE(check_level_density(33, kSeed, 4).skipped);
}

TEST(FourPoint, HoldsInsideRegimeAndRejectsOutside) {
  expect_pass(check_four_point_obstruction(0.1, 12));
  expect_pass(check_four_point_obstruction(0.25, 8));
  EXPECT_THROW(check_four_point_obstruction(0.3, 12), InvalidInput);
  EXPECT_THROW(check_four_point_obstruction(0.0, 12), InvalidInput);
  try {
    check_four_point_obstruction(0.3, 4);
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("(-3+√17)/4"), std::string::npos);
  }
}

TEST(ThreePoint, RatiosAreReciprocalAndIncreasing) {
  const auto rho = three_point_ratios(300);
  ASSERT_EQ(rho.size(), 299u);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    // rho(a) rho(n-a) = 1
    EXPECT_NEAR(rho[i] * rho[rho.size() - 1 - i], 1.0, 1e-9);
  }
  EXPECT_NEAR(rho[149], 1.0, 1e-12);  // a = n/2
  EXPECT_THROW(three_point_ratios(1), InvalidInput);
  expect_pass(check_three_point_density(300, {0.1, 0.5, 1.0, 2.0, 10.0}));
}

TEST(Suite, DeterministicForSeed) {
  SuiteConfig cfg;
  cfg.n_list = {33};
  cfg.draws = 4;
  const auto a = run_check_suite(cfg);
  const auto b = run_check_suite(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].observed, b[i].observed);
    EXPECT_EQ(a[i].passed, b[i].passed);
  }
}

TEST(Suite, OnlyFilterAndValidation) {
  SuiteConfig cfg;
  cfg.only = "minmax-cubic";
  const auto r = run_check_suite(cfg);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].id, "minmax-cubic");
  cfg.only = "bogus";
  EXPECT_THROW(run_check_suite(cfg), InvalidInput);
  cfg.only = "";
  cfg.n_list = {5};
  EXPECT_THROW(run_check_suite(cfg), InvalidInput);
}
