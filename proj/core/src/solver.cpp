#include "critpoly/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "critpoly/chebyshev.hpp"
#include "critpoly/errors.hpp"
#include "critpoly/quadrature.hpp"

namespace critpoly {

namespace {

constexpr double kInverseTol = 1e-12;

// Whether y keeps the rescaled roots s < -a+delta < -delta-y < 1+y < t.
bool group_ordered(const RescaleMap& m, double y) {
  DeltaSolution sol;
  try {
    sol = solve_delta(y, m.a);
  } catch (const SolverFailure&) {
    return false;
  }
  const double left = -m.a + sol.delta;
  const double center = -sol.delta - y;
  const double right = 1.0 + y;
  return m.s < left && left < center && center < right && right < m.t;
}

// Largest |y| in direction `sign` (capped by `limit`) that keeps the group valid.
double admissible_end(const RescaleMap& m, double limit, double sign) {
  if (group_ordered(m, sign * limit)) {
    return sign * limit;
  }
  double good = 0.0;
  double bad = limit;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (good + bad);
    if (group_ordered(m, sign * mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return sign * good;
}

double max_abs_active(const std::vector<double>& g, const std::vector<double>& a,
                      const std::vector<bool>& frozen) {
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!frozen[i]) {
      r = std::max(r, std::abs(g[i] - a[i]));
    }
  }
  return r;
}

}  // namespace

GroupMaps::GroupMaps(const NodalGrid& grid, double t_cap) : grid_(grid), cap_(t_cap) {
  if (!grid.has_groups()) {
    throw InvalidInput("group maps need degree n = 8m+1, got " + std::to_string(grid.degree()));
  }
  if (!(t_cap > 0.0) || !std::isfinite(t_cap)) {
    throw InvalidInput("t cap must be positive");
  }
  const int n = grid.degree();
  const int groups = grid.group_count();
  // S_k u^3 has degree n, so (n+1)/2 + 1 nodes integrate it exactly
  const GaussRule rule = gauss_legendre(n / 2 + 2);
  const auto roots = grid.roots();
  groups_.reserve(static_cast<std::size_t>(groups));
  std::vector<double> others;
  others.reserve(roots.size());
  for (int k = 1; k <= groups; ++k) {
    GroupModel gm;
    gm.map = rescale_map(grid, k);
    gm.length = grid.group_length(k);
    others.clear();
    for (int i = 1; i <= n; ++i) {
      if (i < 4 * k - 2 || i > 4 * k) {
        others.push_back(roots[static_cast<std::size_t>(i - 1)]);
      }
    }
    // The cubic factor carries unit^3; fold it into S_k by taking the
    // leading exponent n-1 and scaling by unit^3 afterwards.
    const PerturbedRoots rest{others, n};
    const Interval g = grid.group(k);
    const double unit3 = gm.map.unit * gm.map.unit * gm.map.unit;
    const double half = 0.5 * (g.hi - g.lo);
    const double mid = 0.5 * (g.hi + g.lo);
    std::array<double, 4> mom{};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = mid + half * rule.nodes[q];
      // eval_perturbed on n-3 roots returns 2^{n-4} prod; restore 2^3
      const double s = 8.0 * eval_perturbed(rest, x) * unit3;
      const double u = gm.map(x);
      const double w = rule.weights[q] * s;
      mom[0] += w;
      mom[1] += w * u;
      mom[2] += w * u * u;
      mom[3] += w * u * u * u;
    }
    for (double& v : mom) {
      v *= half;
    }
    gm.moments = mom;
    const Interval eps_range = solve_delta_range(gm.map.a);
    const double shrink = 1.0 - 1e-12;
    gm.y_range.lo = admissible_end(gm.map, std::min(t_cap, -eps_range.lo * shrink), -1.0);
    gm.y_range.hi = admissible_end(gm.map, std::min(t_cap, eps_range.hi * shrink), 1.0);
    groups_.push_back(gm);
  }
}

const GroupModel& GroupMaps::group(int k) const {
  if (k < 1 || k > group_count()) {
    throw InvalidInput("group index " + std::to_string(k) + " outside 1.." + std::to_string(group_count()));
  }
  return groups_[static_cast<std::size_t>(k - 1)];
}

double GroupMaps::f_component(int k, double yk) const {
  const GroupModel& gm = group(k);
  if (!std::isfinite(yk) || yk < gm.y_range.lo || yk > gm.y_range.hi) {
    throw InvalidPerturbation("f_k: y_" + std::to_string(k) + " = " + std::to_string(yk) +
                              " outside the admissible range");
  }
  const double a = gm.map.a;
  const DeltaSolution sol = solve_delta(yk, a);
  const double e = yk;
  const double d = sol.delta;
  const double b = -a - e + a * d - d * e - d * d - e * e;
  const double c = distortion_constant(e, d, a);
  const auto& m = gm.moments;
  return (m[3] + (a - 1.0) * m[2] + b * m[1] + c * m[0]) / gm.length;
}

std::vector<double> GroupMaps::f_map(const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != group_count()) {
    throw InvalidInput("f_map: wrong number of factors");
  }
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = f_component(static_cast<int>(i) + 1, y[i]);
  }
  return out;
}

std::vector<double> GroupMaps::g_map(const std::vector<double>& y) const {
  return group_averages(grid_, PerturbationVector{y, cap_});
}

Interval GroupMaps::f_range(int k) const {
  const GroupModel& gm = group(k);
  return {f_component(k, gm.y_range.lo), f_component(k, gm.y_range.hi)};
}

double GroupMaps::f_inverse(int k, double target) const {
  const GroupModel& gm = group(k);
  if (!std::isfinite(target)) {
    throw InvalidInput("f_inverse: non-finite target");
  }
  double lo = gm.y_range.lo;
  double hi = gm.y_range.hi;
  double flo = f_component(k, lo) - target;
  double fhi = f_component(k, hi) - target;
  if (flo > 0.0 || fhi < 0.0) {
    throw RangeError("f_inverse: target " + std::to_string(target) + " outside the range of f_" +
                     std::to_string(k) + " = [" + std::to_string(flo + target) + ", " +
                     std::to_string(fhi + target) + "]");
  }
  if (flo == 0.0) {
    return lo;
  }
  if (fhi == 0.0) {
    return hi;
  }
  // Illinois regula falsi; a bisection step whenever the bracket fails to halve
  double best = lo;
  double fbest = flo;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    const double width = hi - lo;
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) {
      x = 0.5 * (lo + hi);
    }
    const double fx = f_component(k, x) - target;
    if (std::abs(fx) < std::abs(fbest)) {
      best = x;
      fbest = fx;
    }
    if (std::abs(fx) <= kInverseTol) {
      return x;
    }
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) {
        fhi *= 0.5;
      }
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) {
        flo *= 0.5;
      }
      side = 1;
    }
    if (hi - lo > 0.5 * width) {
      const double m = 0.5 * (lo + hi);
      const double fm = f_component(k, m) - target;
      if (fm < 0.0) {
        lo = m;
        flo = fm;
      } else {
        hi = m;
        fhi = fm;
      }
      side = 0;
    }
    if (hi - lo <= 1e-16) {
      break;
    }
  }
  return best;
}

std::vector<double> group_averages(const NodalGrid& grid, const PerturbationVector& y) {
  const PerturbedRoots roots = perturbed_roots(grid, y);
  const ChebSeries q = cheb_antiderivative(to_series(roots), 0.0, 0.0);
  const int groups = grid.group_count();
  std::vector<double> out(static_cast<std::size_t>(groups));
  // consecutive groups share endpoints, so each root value is computed once
  double prev = q(grid.root(1));
  for (int k = 1; k <= groups; ++k) {
    const double next = q(grid.root(4 * k + 1));
    out[static_cast<std::size_t>(k - 1)] = (next - prev) / grid.group_length(k);
    prev = next;
  }
  return out;
}

double group_average_direct(const NodalGrid& grid, const PerturbedRoots& roots, int k) {
  const Interval g = grid.group(k);
  const GaussRule rule = gauss_legendre(roots.degree / 2 + 2);
  const double integral =
      integrate_rule(rule, [&](double x) { return eval_perturbed(roots, x); }, g.lo, g.hi);
  return integral / grid.group_length(k);
}

std::vector<double> f_map(const NodalGrid& grid, const PerturbationVector& y) {
  return GroupMaps(grid, y.cap).f_map(y.y);
}

double f_inverse_1d(const NodalGrid& grid, int k, double target, double t_cap) {
  return GroupMaps(grid, t_cap).f_inverse(k, target);
}

namespace {

struct Attempt {
  std::vector<double> y;
  std::vector<double> g;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

Attempt iterate(const GroupMaps& maps, const std::vector<double>& a, const std::vector<bool>& frozen,
                const SolverConfig& cfg, double damping) {
  const std::size_t groups = a.size();
  Attempt st;
  st.y.assign(groups, 0.0);
  st.g = maps.g_map(st.y);
  st.residual = max_abs_active(st.g, a, frozen);
  double theta = damping;
  std::vector<double> trial(groups);
  while (st.iterations < cfg.max_iter) {
    if (st.residual <= cfg.tol) {
      st.converged = true;
      break;
    }
    ++st.iterations;
    for (std::size_t i = 0; i < groups; ++i) {
      if (frozen[i]) {
        trial[i] = 0.0;
        continue;
      }
      const int k = static_cast<int>(i) + 1;
      const Interval range = maps.f_range(k);
      const double want = a[i] + maps.f_component(k, st.y[i]) - st.g[i];
      const double fy = maps.f_inverse(k, std::clamp(want, range.lo, range.hi));
      trial[i] = st.y[i] + theta * (fy - st.y[i]);
    }
    std::vector<double> gt = maps.g_map(trial);
    const double rt = max_abs_active(gt, a, frozen);
    if (rt < st.residual) {
      st.y = trial;
      st.g = std::move(gt);
      st.residual = rt;
    } else {
      theta *= 0.5;
      if (theta < 1e-4) {
        break;
      }
    }
  }
  if (!st.converged && st.residual <= cfg.tol) {
    st.converged = true;
  }
  return st;
}

}  // namespace

SolveReport solve_targets(const GroupMaps& maps, const TargetAverages& targets, const SolverConfig& cfg) {
  const int groups = maps.group_count();
  if (static_cast<int>(targets.a.size()) != groups) {
    throw InvalidInput("solve_targets: expected " + std::to_string(groups) + " targets, got " +
                       std::to_string(targets.a.size()));
  }
  for (double v : targets.a) {
    if (!std::isfinite(v)) {
      throw InvalidInput("solve_targets: non-finite target");
    }
  }
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
    throw InvalidInput("solve_targets: damping must lie in (0, 1]");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iter < 0) {
    throw InvalidInput("solve_targets: tolerance must be positive and max_iter non-negative");
  }
  std::vector<bool> frozen(static_cast<std::size_t>(groups), false);
  for (int k = 1; k <= groups; ++k) {
    const Interval range = maps.f_range(k);
    const double ak = targets.a[static_cast<std::size_t>(k - 1)];
    if (ak < range.lo || ak > range.hi) {
      frozen[static_cast<std::size_t>(k - 1)] = true;
    }
  }

  Attempt best;
  bool have_best = false;
  for (int round = 0; round <= groups; ++round) {
    Attempt st;
    double damping = cfg.damping;
    for (int r = 0; r <= cfg.restarts; ++r, damping *= 0.5) {
      st = iterate(maps, targets.a, frozen, cfg, damping);
      if (st.converged) {
        break;
      }
    }
    if (!have_best || st.converged || st.residual < best.residual) {
      best = st;
      have_best = true;
    }
    if (st.converged) {
      break;
    }
    // groups pinned at an end of their admissible range cannot reach their
    // target; hold them at zero and solve again for the rest
    bool froze_any = false;
    for (int k = 1; k <= groups; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      if (frozen[i]) {
        continue;
      }
      const GroupModel& gm = maps.group(k);
      const double span = gm.y_range.hi - gm.y_range.lo;
      const bool pinned = std::abs(st.y[i] - gm.y_range.lo) <= 1e-9 * span ||
                          std::abs(st.y[i] - gm.y_range.hi) <= 1e-9 * span;
      if (pinned && std::abs(st.g[i] - targets.a[i]) > cfg.tol) {
        frozen[i] = true;
        froze_any = true;
      }
    }
    if (!froze_any) {
      break;
    }
    have_best = false;
  }

  SolveReport report;
  report.y = PerturbationVector{best.y, maps.cap()};
  report.residual = best.residual;
  report.iterations = best.iterations;
  report.converged = best.converged;
  for (int k = 1; k <= groups; ++k) {
    if (frozen[static_cast<std::size_t>(k - 1)]) {
      report.frozen_edge_groups.push_back(k);
    }
  }
  return report;
}

SolveReport solve_targets(const NodalGrid& grid, const TargetAverages& targets, const SolverConfig& cfg) {
  return solve_targets(GroupMaps(grid, cfg.t_cap), targets, cfg);
}

}  // namespace critpoly
