#include "critpoly/nodal_grid.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "critpoly/errors.hpp"

namespace critpoly {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

NodalGrid::NodalGrid(int n) : n_(n), roots_(static_cast<std::size_t>(n)) {
  // -cos(pi(2k-1)/(2n)) == sin(pi(2k-1-n)/(2n)); the sine form is exactly
  // antisymmetric and puts the middle root of an odd grid at 0.
  for (int k = 1; k <= n; ++k) {
    roots_[static_cast<std::size_t>(k - 1)] = std::sin(kPi * (2.0 * k - 1.0 - n) / (2.0 * n));
  }
}

NodalGrid build_grid(int n) {
  if (n < 2) {
    throw InvalidInput("build_grid: degree must be at least 2, got " + std::to_string(n));
  }
  return NodalGrid(n);
}

int NodalGrid::group_count() const { return has_groups() ? (n_ - 1) / 4 : 0; }

void NodalGrid::require_root_index(int k) const {
  if (k < 1 || k > n_) {
    throw InvalidInput("root index " + std::to_string(k) + " outside 1.." + std::to_string(n_));
  }
}

void NodalGrid::require_interval_index(int k) const {
  if (k < 1 || k > n_ - 1) {
    throw InvalidInput("nodal interval index " + std::to_string(k) + " outside 1.." +
                       std::to_string(n_ - 1));
  }
}

void NodalGrid::require_group_index(int k) const {
  if (!has_groups()) {
    throw InvalidInput("group intervals need degree n = 8m+1, got " + std::to_string(n_));
  }
  if (k < 1 || k > group_count()) {
    throw InvalidInput("group index " + std::to_string(k) + " outside 1.." +
                       std::to_string(group_count()));
  }
}

double NodalGrid::root(int k) const {
  require_root_index(k);
  return roots_[static_cast<std::size_t>(k - 1)];
}

Interval NodalGrid::angular_interval(int k) const {
  require_interval_index(k);
  return {kPi * (2.0 * k - 1.0) / (2.0 * n_), kPi * (2.0 * k + 1.0) / (2.0 * n_)};
}

Interval NodalGrid::nodal_interval(int k) const {
  require_interval_index(k);
  return {root(k), root(k + 1)};
}

double NodalGrid::nodal_length(int k) const {
  require_interval_index(k);
  return 2.0 * std::sin(kPi * k / n_) * std::sin(kPi / (2.0 * n_));
}

Interval NodalGrid::group(int k) const {
  require_group_index(k);
  return {root(4 * k - 3), root(4 * k + 1)};
}

double NodalGrid::group_length(int k) const {
  require_group_index(k);
  // sum of the four nodal lengths avoids cancellation near the ends
  double len = 0.0;
  for (int i = 4 * k - 3; i <= 4 * k; ++i) {
    len += nodal_length(i);
  }
  return len;
}

double interval_distance(const NodalGrid& grid, int k, int j) {
  if (std::abs(j) < 2) {
    throw InvalidInput("interval_distance: offset must satisfy |j| >= 2 (adjacent intervals touch)");
  }
  const int n = grid.degree();
  if (k < 1 || k > n - 1 || k + j < 1 || k + j > n - 1) {
    throw InvalidInput("interval_distance: index out of range");
  }
  // gap between root(lo) and root(hi) with lo < hi:
  // cos(a) - cos(b) = 2 sin((a+b)/2) sin((b-a)/2)
  const int lo = j > 0 ? k + 1 : k + j + 1;
  const int hi = j > 0 ? k + j : k;
  const double a = kPi * (2.0 * lo - 1.0) / (2.0 * n);
  const double b = kPi * (2.0 * hi - 1.0) / (2.0 * n);
  return 2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (b - a));
}

double interval_distance_ratio(const NodalGrid& grid, int k, int j) {
  const double dist = interval_distance(grid, k, j);
  return grid.nodal_length(k) / dist;
}

}  // namespace critpoly
