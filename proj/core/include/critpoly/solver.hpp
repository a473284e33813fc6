#pragma once

#include <array>
#include <vector>

#include "critpoly/nodal_grid.hpp"
#include "critpoly/perturb.hpp"

namespace critpoly {

struct SolverConfig {
  double t_cap = kDefaultTCap;
  double tol = 1e-9;
  double damping = 0.7;
  int max_iter = 200;
  /// Extra attempts from y = 0 with the damping halved each time; off by default.
  int restarts = 0;
};

struct TargetAverages {
  std::vector<double> a;
  double t = kDefaultTCap;
};

struct SolveReport {
  PerturbationVector y;
  double residual = 0.0;  // max over active groups of |g_k(y) - a_k|
  int iterations = 0;
  bool converged = false;
  std::vector<int> frozen_edge_groups;  // 1-based group indices held at y_k = 0
};

/// Per-group data for the single-group map f_k(y_k) = A_k(y with only y_k set).
///
/// On G_k, T_n(x, y_k) = S_k(x) p(u) where S_k collects the n-3 factors that do
/// not move and p is the rescaled perturbed cubic. The moments
/// M_j = integral over G_k of S_k(x) u^j dx, j = 0..3, turn every f_k evaluation
/// into four multiply-adds.
struct GroupModel {
  RescaleMap map;
  double length = 0.0;
  std::array<double, 4> moments{};
  /// y values for which the perturbation is solvable and keeps the group's roots ordered.
  Interval y_range;
};

class GroupMaps {
 public:
  GroupMaps(const NodalGrid& grid, double t_cap = kDefaultTCap);

  [[nodiscard]] const NodalGrid& grid() const { return grid_; }
  [[nodiscard]] int group_count() const { return static_cast<int>(groups_.size()); }
  [[nodiscard]] double cap() const { return cap_; }
  [[nodiscard]] const GroupModel& group(int k) const;

  /// f_k(y_k); throws InvalidPerturbation outside the admissible range.
  [[nodiscard]] double f_component(int k, double yk) const;
  [[nodiscard]] std::vector<double> f_map(const std::vector<double>& y) const;
  /// g(y) = A(y), the per-length group averages of T_n(., y).
  [[nodiscard]] std::vector<double> g_map(const std::vector<double>& y) const;

  /// [f_k(lo), f_k(hi)] over the admissible y range.
  [[nodiscard]] Interval f_range(int k) const;
  /// y_k with |f_k(y_k) - target| <= 1e-12; RangeError when target is outside f_range(k).
  [[nodiscard]] double f_inverse(int k, double target) const;

 private:
  NodalGrid grid_;
  double cap_;
  std::vector<GroupModel> groups_;
};

/// Per-length averages of T_n(., y) over every group, through to_series and integrate_over.
std::vector<double> group_averages(const NodalGrid& grid, const PerturbationVector& y);

/// Average over G_k of T_n with the given roots, by Gauss-Legendre on the product form.
double group_average_direct(const NodalGrid& grid, const PerturbedRoots& roots, int k);

std::vector<double> f_map(const NodalGrid& grid, const PerturbationVector& y);

double f_inverse_1d(const NodalGrid& grid, int k, double target, double t_cap = kDefaultTCap);

/// Solves g(y) = a with the damped iteration y <- y + theta (F(y) - y),
/// F(y)_k = f_k^{-1}(a_k + f_k(y_k) - g_k(y)).
SolveReport solve_targets(const GroupMaps& maps, const TargetAverages& targets, const SolverConfig& config);
SolveReport solve_targets(const NodalGrid& grid, const TargetAverages& targets, const SolverConfig& config);

}  // namespace critpoly
