#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace critpoly {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string reason;  // why a check was skipped or failed
  std::vector<double> observed;
  std::vector<double> bound;
  std::string context;  // n, seeds and other parameters
};

struct CheckInfo {
  std::string id;
  std::string property;
  bool per_degree = false;  // runs once per n rather than once per suite
};

/// Every check id with the property it asserts.
const std::vector<CheckInfo>& check_catalog();
bool is_known_check(const std::string& id);

struct SuiteConfig {
  std::vector<int> n_list{33};
  std::uint64_t seed = 20240601;
  double t_cap = 0.1;
  double four_point_epsilon = 0.1;
  int four_point_cap = 12;
  int minmax_resolution = 100;
  int three_point_n = 300;
  int draws = 16;
  std::string only;  // run a single check id when non-empty
};

/// Runs every check (or `only`) and collects the results; a failing check
/// never throws. Invalid configuration throws InvalidInput.
std::vector<CheckResult> run_check_suite(const SuiteConfig& config);

// Node geometry, any n >= 2.
CheckResult check_nodal_length_upper(int n);
CheckResult check_nodal_length_bounds(int n);
CheckResult check_nodal_length_monotone(int n);
CheckResult check_nodal_length_growth(int n);
CheckResult check_nodal_distance_lower(int n);
CheckResult check_nodal_distance_ratio(int n);

// Areas under T_n and real-rooted polynomials.
CheckResult check_node_area(int n);
CheckResult check_node_square_average(int n);
CheckResult check_adjacent_cancellation(int n);
CheckResult check_product_identity(int n);
CheckResult check_erdos_grunwald(std::uint64_t seed, int samples = 100);

// Rescaled 3-point distortion R.
CheckResult check_distortion_agreement(std::uint64_t seed, int draws = 16);
CheckResult check_distortion_monotone(std::uint64_t seed, int draws = 16);
CheckResult check_distortion_sign(std::uint64_t seed, int draws = 16);
CheckResult check_distortion_cubic_decay(std::uint64_t seed, int draws = 16);
CheckResult check_distortion_near_field(std::uint64_t seed, int draws = 16);
CheckResult check_distortion_intermediate(std::uint64_t seed, int draws = 16);

/// Max over x in [-1,1] of |(x-r1)(x-r2)(x-r3)|, exact.
double cubic_sup_norm(double r1, double r2, double r3);
CheckResult check_minmax_cubic(int grid_resolution = 100);

// Group maps; need n = 8m+1.
CheckResult check_sup_stability(int n, const std::vector<double>& y_norms, std::uint64_t seed, int draws = 16);
CheckResult check_internal_slope(int n);
CheckResult check_f_covering(int n, double t = 0.05);
CheckResult check_coupling(int n, double t, std::uint64_t seed, int draws = 16);
CheckResult check_exterior_smallness(int n, double t, std::uint64_t seed, int draws = 16);
CheckResult check_average_bound(int n, double t, std::uint64_t seed, int draws = 16);
CheckResult check_target_recovery(int n, double t, std::uint64_t seed, int draws = 16);

// Small sets and level densities of T_n(., y).
CheckResult check_small_set_reference(int n, double tau = 0.5);
CheckResult check_small_set_perturbed(int n, std::uint64_t seed, int draws = 16);
CheckResult check_level_density(int n, std::uint64_t seed, int draws = 16);

/// The either-or increment inequality on {-1-eps, -1, 1, 1+eps}; eps outside
/// (0, (-3+sqrt(17))/4) throws InvalidInput.
CheckResult check_four_point_obstruction(double epsilon, int exponent_cap);

/// rho(a) = |int_0^1 (x+1)^a (x-1)^(n-a)| / |int_{-1}^0 (x+1)^a (x-1)^(n-a)|.
std::vector<double> three_point_ratios(int n);
CheckResult check_three_point_density(int n, const std::vector<double>& ratio_targets);

/// Groups whose rescaled a satisfies |a - 1| < 1/5.
bool is_interior_group(double a);

}  // namespace critpoly
