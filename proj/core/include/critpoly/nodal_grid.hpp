#pragma once

#include <span>
#include <vector>

namespace critpoly {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] double midpoint() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Root geometry of T_n on [-1,1].
///
/// Every index in this interface is 1-based and ascending, matching the usual
/// left-to-right labeling: root(k) = -cos(pi (2k-1) / (2n)), so root(1) is
/// the root nearest -1 and root(n) the one nearest +1. The raw values
/// cos(pi (2k-1) / (2n)) are the same set listed right to left, i.e.
/// root(k) == cos(pi (2(n+1-k)-1) / (2n)).
///
/// Nodal interval I_k = [root(k), root(k+1)] for k = 1..n-1 is the image of
/// the angular interval [pi(2k-1)/(2n), pi(2k+1)/(2n)] under -cos.
/// When n = 8m+1 the nodal intervals are grouped four at a time into
/// G_k = [root(4k-3), root(4k+1)], k = 1..N with N = (n-1)/4; the origin is
/// then the shared endpoint of G_{N/2} and G_{N/2+1}.
class NodalGrid {
 public:
  [[nodiscard]] int degree() const { return n_; }
  [[nodiscard]] bool has_groups() const { return n_ % 8 == 1; }
  /// N = (n-1)/4 when has_groups(), otherwise 0.
  [[nodiscard]] int group_count() const;

  [[nodiscard]] double root(int k) const;
  [[nodiscard]] std::span<const double> roots() const { return roots_; }

  [[nodiscard]] Interval angular_interval(int k) const;
  [[nodiscard]] Interval nodal_interval(int k) const;
  /// |I_k| = 2 sin(pi k / n) sin(pi / (2n)), free of endpoint cancellation.
  [[nodiscard]] double nodal_length(int k) const;

  [[nodiscard]] Interval group(int k) const;
  [[nodiscard]] double group_length(int k) const;
  /// Root indices of the left, center and right interior roots of G_k.
  [[nodiscard]] int interior_root_index(int k, int which) const { return 4 * k - 2 + which; }

  friend NodalGrid build_grid(int n);

 private:
  explicit NodalGrid(int n);
  void require_root_index(int k) const;
  void require_interval_index(int k) const;
  void require_group_index(int k) const;

  int n_ = 0;
  std::vector<double> roots_;
};

/// Builds the grid for degree n >= 2; groups are populated only when n = 8m+1.
NodalGrid build_grid(int n);

/// dist(I_k, I_{k+j}) from the product-of-sines identity, |j| >= 2.
double interval_distance(const NodalGrid& grid, int k, int j);

/// |I_k| / dist(I_k, I_{k+j}); bounded by 16 / (|j| - 1).
double interval_distance_ratio(const NodalGrid& grid, int k, int j);

}  // namespace critpoly
