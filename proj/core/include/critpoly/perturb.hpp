#pragma once

#include <vector>

#include "critpoly/chebyshev.hpp"
#include "critpoly/nodal_grid.hpp"

namespace critpoly {

/// Default cap t on |y_k|.
inline constexpr double kDefaultTCap = 0.1;

struct DeltaSolution {
  double lambda = 0.0;
  double delta = 0.0;
};

/// r_a(lambda) = (a lambda - 1) / (lambda^2 + lambda + 1).
double r_a(double a, double lambda);

/// Solves r_a(lambda) = epsilon on [1/(2a), 2/a], where r_a is increasing.
/// Throws SolverFailure when epsilon is outside r_a's range on that bracket.
DeltaSolution solve_delta(double epsilon, double a);

/// Range of epsilon that solve_delta accepts for this a.
Interval solve_delta_range(double a);

/// Ratio of (x-1-e)(x+1+e) to (x-1)(x+1): 1 - (2e + e^2) / (x^2 - 1).
double distortion_2pt(double epsilon, double x);

/// Constant term of the perturbed cubic with roots -a+delta, -delta-epsilon, 1+epsilon.
double distortion_constant(double epsilon, double delta, double a);

/// R(x) = 1 + C / ((x+a) x (x-1)) with the exact C; poles throw InvalidInput.
double distortion_3pt(double epsilon, double a, double x);

/// The same ratio formed directly as a product of three factor ratios.
double distortion_3pt_product(double epsilon, double a, double x);

/// Perturbed rescaled cubic (u+a-delta)(u+delta+epsilon)(u-1-epsilon), in expanded form.
double perturbed_cubic(double epsilon, double delta, double a, double u);

/// Affine map u = (x - origin) / unit sending root(4k-1) to 0 and root(4k) to 1.
struct RescaleMap {
  int group = 0;
  double origin = 0.0;
  double unit = 0.0;  // |I_{4k-1}|
  double s = 0.0;     // image of root(4k-3)
  double a = 0.0;     // root(4k-2) maps to -a
  double t = 0.0;     // image of root(4k+1)

  [[nodiscard]] double operator()(double x) const { return (x - origin) / unit; }
  [[nodiscard]] double inverse(double u) const { return origin + unit * u; }
};

RescaleMap rescale_map(const NodalGrid& grid, int k);

struct PerturbationVector {
  std::vector<double> y;
  double cap = kDefaultTCap;
};

/// Roots z_1 < ... < z_n of T_n(x, y) = 2^{n-1} prod (x - z_k).
struct PerturbedRoots {
  std::vector<double> z;
  int degree = 0;
  /// Binary exponent of the leading coefficient, n - 1.
  [[nodiscard]] int leading_exponent() const { return degree - 1; }
};

/// Moves the interior roots of G_k to r + delta u, r - (y + delta) u, r + y u,
/// with u = |I_{4k-1}| and delta = solve_delta(y_k, a_k).delta.
PerturbedRoots perturbed_roots(const NodalGrid& grid, const PerturbationVector& y);

/// Unperturbed roots as a PerturbedRoots value.
PerturbedRoots chebyshev_roots(const NodalGrid& grid);

/// 2^{n-1} prod (x - z_k), as 1/2 prod 2(x - z_k) with exponent renormalization.
double eval_perturbed(const PerturbedRoots& roots, double x);

/// Degree-n Chebyshev series of T_n(., y), interpolated at n+1 extreme points.
ChebSeries to_series(const PerturbedRoots& roots);

}  // namespace critpoly
