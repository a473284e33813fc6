#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "critpoly/chebyshev.hpp"
#include "critpoly/function_spec.hpp"
#include "critpoly/nodal_grid.hpp"
#include "critpoly/perturb.hpp"
#include "critpoly/solver.hpp"

namespace critpoly {

/// Optimal unconstrained polynomial error for |x| is about this constant over n.
inline constexpr double kBestAbsErrorConstant = 0.280169;

struct PipelineConfig {
  SolverConfig solver;
  /// Size of the per-length group targets after rescaling: f is divided by
  /// S = lipschitz / target_level, so every |a_k| is at most target_level.
  double target_level = 0.2;
  /// Sampling density for sup-norm and measure computations.
  int samples_per_interval = 32;
};

struct ApproxResult {
  int n = 0;                       // degree of the derivative T_n(., y)
  ChebSeries approximant;          // P on reference [-1,1], degree n+1
  PerturbedRoots derivative_roots; // zeros of P'
  double scale_factor = 1.0;       // S in P' = S T_n(., y)
  double anchor = 0.0;             // P(0) = f(0)
  double sup_error = 0.0;          // max |P - f| on the sampling grid
  double max_derivative = 0.0;     // max |P'| on the sampling grid
  std::vector<double> endpoint_x;  // endpoints of matched groups
  std::vector<double> endpoint_residuals;
  SolveReport solve;
};

/// P(x) = f(0) + S integral_0^x T_n(t, y) dt with y solving g(y) = a,
/// a_k = (f(right end of G_k) - f(left end)) / (S |G_k|).
ApproxResult approximate(const FunctionSpec& f, int n, const PipelineConfig& config);

/// Sampling grid: `per_interval` uniform points on each gap between
/// consecutive breakpoints of [-1, z_1, ..., z_n, 1].
std::vector<double> sample_points(std::span<const double> roots, int per_interval);

struct CriticalPointReport {
  bool all_in_interval = false;  // every z_k real, finite, in [-1,1], strictly increasing
  bool sign_changes = false;     // P' alternates sign across each z_k
  double derivative_mismatch = 0.0;  // max |P' - S T_n(., y)| / max |S T_n(., y)| at samples
  [[nodiscard]] bool ok() const { return all_in_interval && sign_changes && derivative_mismatch <= 1e-9; }
};

CriticalPointReport check_critical_points(const ApproxResult& result);

struct RateRow {
  int n = 0;
  double sup_error = 0.0;
  double log_n = 0.0;
  double log_error = 0.0;
  double reference = 0.0;  // kBestAbsErrorConstant / n
  bool converged = false;
  double max_endpoint_residual = 0.0;
  std::vector<int> frozen_groups;
};

struct RateFit {
  bool fitted = false;
  double slope = 0.0;
  double intercept = 0.0;
  std::string note;
};

struct RateStudy {
  std::vector<RateRow> rows;
  RateFit fit;
};

/// Least-squares line through (log n, log error) of the converged rows.
RateStudy rate_study(const FunctionSpec& f, const std::vector<int>& degrees, const PipelineConfig& config);

struct WeakstarRow {
  int n = 0;
  std::string test;
  double pairing = 0.0;  // integral of p_n g
  double exact = 0.0;    // integral of f g
  double error = 0.0;    // |pairing - exact|
  double sup_ratio = 0.0;  // max |p_n| / max |f|
  bool converged = false;
};

struct WeakstarStudy {
  std::vector<WeakstarRow> rows;
  double empirical_c = 0.0;  // max over degrees of sup_ratio
};

/// p_n = S T_n(., y) with integral over each G_k of p_n equal to that of f.
struct WeakstarPolynomial {
  int n = 0;
  PerturbedRoots roots;
  ChebSeries series;  // p_n
  double scale = 1.0;
  SolveReport solve;
};

WeakstarPolynomial weakstar_polynomial(const FunctionSpec& f, int n, const PipelineConfig& config);

/// Integral of p g over [-1,1]; exact for polynomial g.
double pairing_integral(const ChebSeries& p, const FunctionSpec& g);
/// Integral of f g over [-1,1] by composite Gauss-Legendre split at breakpoints.
double exact_pairing(const FunctionSpec& f, const FunctionSpec& g);

WeakstarStudy weakstar_demo(const FunctionSpec& f, const std::vector<int>& degrees,
                            const std::vector<FunctionSpec>& tests, const PipelineConfig& config);

/// Lebesgue measure of {x in [lo,hi] : h(x) < 0}, sampled on the given grid
/// (ascending, covering [lo,hi]) with bisection at each sign change.
double measure_negative(const std::function<double(double)>& h, std::span<const double> grid);

/// |{x in [-1,1] : |scale T_n(x, y)| < tau}|.
double small_set_measure(const PerturbedRoots& roots, double scale, double tau, int per_interval = 32);

/// 2 sin(arcsin(tau)/n) / sin(pi/(2n)): the exact measure for the unperturbed T_n.
double chebyshev_small_set_measure(int n, double tau);

struct DivergenceRow {
  int n = 0;
  double tau = 0.0;
  double measure = 0.0;            // for the approximant's derivative
  double normalized_measure = 0.0; // for T_n(., y) itself (scale 1)
  double reference = 0.0;          // unperturbed T_n, exact
};

struct DensityRow {
  int n = 0;
  double lo = 0.0;
  double hi = 0.0;
  double positive = 0.0;  // density of {P' > 1/2}
  double negative = 0.0;  // density of {P' < -1/2}
};

struct DivergenceStudy {
  std::vector<DivergenceRow> measures;
  std::vector<DensityRow> densities;
};

/// Densities of {s T > 1/2} and {s T < -1/2} on [lo, hi].
DensityRow level_densities(const PerturbedRoots& roots, double scale, double lo, double hi,
                           int per_interval = 32);

DivergenceStudy divergence_stats(const FunctionSpec& f, const std::vector<int>& degrees,
                                 const std::vector<double>& thresholds, const PipelineConfig& config);

/// Throws InvalidInput unless n = 8m+1 with n >= 9.
void require_group_degree(int n);

}  // namespace critpoly
