#include "critpoly/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "critpoly/errors.hpp"
#include "critpoly/quadrature.hpp"

namespace critpoly {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::vector<double> merge_points(std::vector<double> pts, const std::vector<double>& extra) {
  pts.insert(pts.end(), extra.begin(), extra.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

TargetAverages scaled_targets(const NodalGrid& grid, double scale, double t_cap,
                              const std::function<double(const Interval&)>& increment) {
  TargetAverages targets;
  targets.t = t_cap;
  for (int k = 1; k <= grid.group_count(); ++k) {
    targets.a.push_back(increment(grid.group(k)) / (scale * grid.group_length(k)));
  }
  return targets;
}

void require_config(const PipelineConfig& cfg) {
  if (!(cfg.target_level > 0.0) || !std::isfinite(cfg.target_level)) {
    throw InvalidInput("target level must be positive");
  }
  if (cfg.samples_per_interval < 2) {
    throw InvalidInput("need at least 2 samples per interval");
  }
}

}  // namespace

void require_group_degree(int n) {
  if (n < 9 || n % 8 != 1) {
    throw InvalidInput("degree must be ≡ 1 (mod 8) and at least 9, got " + std::to_string(n));
  }
}

std::vector<double> sample_points(std::span<const double> roots, int per_interval) {
  std::vector<double> breaks;
  breaks.reserve(roots.size() + 2);
  breaks.push_back(-1.0);
  for (double r : roots) {
    if (r > breaks.back() && r < 1.0) {
      breaks.push_back(r);
    }
  }
  breaks.push_back(1.0);
  std::vector<double> pts;
  pts.reserve((breaks.size() - 1) * static_cast<std::size_t>(per_interval) + 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / per_interval;
    for (int j = 0; j < per_interval; ++j) {
      pts.push_back(breaks[i] + j * h);
    }
  }
  pts.push_back(1.0);
  return pts;
}

ApproxResult approximate(const FunctionSpec& f, int n, const PipelineConfig& cfg) {
  require_group_degree(n);
  require_config(cfg);
  if (!f.is_lipschitz()) {
    throw InvalidInput("approximate needs a Lipschitz function; '" + f.name() + "' is not");
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, cfg.solver.t_cap);
  const double lip = f.lipschitz();

  ApproxResult res;
  res.n = n;
  res.scale_factor = lip > 0.0 ? lip / cfg.target_level : 1.0;
  const TargetAverages targets = scaled_targets(grid, res.scale_factor, cfg.solver.t_cap,
                                                [&](const Interval& g) { return f(g.hi) - f(g.lo); });
  res.solve = solve_targets(maps, targets, cfg.solver);
  res.derivative_roots = perturbed_roots(grid, res.solve.y);
  res.anchor = f(0.0);
  const ChebSeries deriv = to_series(res.derivative_roots).scaled(res.scale_factor);
  res.approximant = cheb_antiderivative(deriv, 0.0, res.anchor);

  const auto pts = merge_points(sample_points(grid.roots(), cfg.samples_per_interval), f.breakpoints());
  for (double x : pts) {
    res.sup_error = std::max(res.sup_error, std::abs(res.approximant(x) - f(x)));
    res.max_derivative =
        std::max(res.max_derivative, res.scale_factor * std::abs(eval_perturbed(res.derivative_roots, x)));
  }

  // a group is matched when it and every group between it and the origin were solved
  const int groups = grid.group_count();
  std::vector<bool> frozen(static_cast<std::size_t>(groups) + 1, false);
  for (int k : res.solve.frozen_edge_groups) {
    frozen[static_cast<std::size_t>(k)] = true;
  }
  std::vector<double> ends;
  for (int k = groups / 2; k >= 1 && !frozen[static_cast<std::size_t>(k)]; --k) {
    ends.push_back(grid.group(k).lo);
  }
  for (int k = groups / 2 + 1; k <= groups && !frozen[static_cast<std::size_t>(k)]; ++k) {
    ends.push_back(grid.group(k).hi);
  }
  if (!ends.empty()) {
    ends.push_back(0.0);
  }
  std::sort(ends.begin(), ends.end());
  for (double x : ends) {
    res.endpoint_x.push_back(x);
    res.endpoint_residuals.push_back(std::abs(res.approximant(x) - f(x)));
  }
  return res;
}

CriticalPointReport check_critical_points(const ApproxResult& result) {
  CriticalPointReport rep;
  const auto& z = result.derivative_roots.z;
  rep.all_in_interval = !z.empty() && static_cast<int>(z.size()) == result.n;
  for (std::size_t i = 0; i < z.size() && rep.all_in_interval; ++i) {
    if (!std::isfinite(z[i]) || z[i] < -1.0 || z[i] > 1.0 || (i > 0 && !(z[i - 1] < z[i]))) {
      rep.all_in_interval = false;
    }
  }
  if (!rep.all_in_interval) {
    return rep;
  }
  // P' from the coefficient form, independent of the product used to build it
  const ChebSeries dp = result.approximant.derivative();
  std::vector<double> probes;
  probes.push_back(0.5 * (-1.0 + z.front()));
  for (std::size_t i = 1; i < z.size(); ++i) {
    probes.push_back(0.5 * (z[i - 1] + z[i]));
  }
  probes.push_back(0.5 * (z.back() + 1.0));
  rep.sign_changes = true;
  double prev = sign_of(dp(probes.front()));
  if (prev == 0.0) {
    rep.sign_changes = false;
  }
  for (std::size_t i = 1; i < probes.size() && rep.sign_changes; ++i) {
    const double s = sign_of(dp(probes[i]));
    if (s == 0.0 || s == prev) {
      rep.sign_changes = false;
    }
    prev = s;
  }
  double worst = 0.0;
  double peak = 0.0;
  for (double x : sample_points(z, 4)) {
    const double direct = result.scale_factor * eval_perturbed(result.derivative_roots, x);
    worst = std::max(worst, std::abs(dp(x) - direct));
    peak = std::max(peak, std::abs(direct));
  }
  rep.derivative_mismatch = peak > 0.0 ? worst / peak : worst;
  return rep;
}

RateStudy rate_study(const FunctionSpec& f, const std::vector<int>& degrees, const PipelineConfig& cfg) {
  if (degrees.empty()) {
    throw InvalidInput("rate study needs at least one degree");
  }
  for (int n : degrees) {
    require_group_degree(n);
  }
  RateStudy study;
  for (int n : degrees) {
    const ApproxResult res = approximate(f, n, cfg);
    RateRow row;
    row.n = n;
    row.sup_error = res.sup_error;
    row.log_n = std::log(static_cast<double>(n));
    row.log_error = res.sup_error > 0.0 ? std::log(res.sup_error) : -std::numeric_limits<double>::infinity();
    row.reference = kBestAbsErrorConstant / n;
    row.converged = res.solve.converged;
    for (double r : res.endpoint_residuals) {
      row.max_endpoint_residual = std::max(row.max_endpoint_residual, r);
    }
    row.frozen_groups = res.solve.frozen_edge_groups;
    study.rows.push_back(row);
  }
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int used = 0;
  bool all_floor = true;
  for (const RateRow& row : study.rows) {
    if (row.sup_error > 1e-8) {
      all_floor = false;
    }
    if (!row.converged || !(row.sup_error > 0.0)) {
      continue;
    }
    sx += row.log_n;
    sy += row.log_error;
    sxx += row.log_n * row.log_n;
    sxy += row.log_n * row.log_error;
    ++used;
  }
  const int skipped = static_cast<int>(study.rows.size()) - used;
  if (all_floor) {
    study.fit.note = "errors at the solver tolerance floor; no rate to fit";
  } else if (used < 2) {
    study.fit.note = "fewer than two converged degrees; fit skipped";
  } else {
    const double den = used * sxx - sx * sx;
    study.fit.fitted = true;
    study.fit.slope = (used * sxy - sx * sy) / den;
    study.fit.intercept = (sy - study.fit.slope * sx) / used;
    study.fit.note = skipped > 0 ? std::to_string(skipped) + " non-converged degree(s) excluded" : "";
  }
  return study;
}

WeakstarPolynomial weakstar_polynomial(const FunctionSpec& f, int n, const PipelineConfig& cfg) {
  require_group_degree(n);
  require_config(cfg);
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, cfg.solver.t_cap);
  WeakstarPolynomial wp;
  wp.n = n;
  const double norm = f.sup_norm();
  wp.scale = norm > 0.0 ? norm / cfg.target_level : 1.0;
  const TargetAverages targets = scaled_targets(grid, wp.scale, cfg.solver.t_cap,
                                                [&](const Interval& g) { return f.integral(g.lo, g.hi); });
  wp.solve = solve_targets(maps, targets, cfg.solver);
  wp.roots = perturbed_roots(grid, wp.solve.y);
  wp.series = to_series(wp.roots).scaled(wp.scale);
  return wp;
}

double pairing_integral(const ChebSeries& p, const FunctionSpec& g) {
  if (const auto gs = g.as_series()) {
    return integrate_over(multiply(p, *gs), -1.0, 1.0);
  }
  const GaussRule rule = gauss_legendre(16);
  const auto pieces = merge_points({-1.0, 1.0}, g.breakpoints());
  const int panels = 4 * (p.degree() + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    sum += integrate_composite(rule, [&](double x) { return p(x) * g(x); }, pieces[i], pieces[i + 1], panels);
  }
  return sum;
}

double exact_pairing(const FunctionSpec& f, const FunctionSpec& g) {
  const GaussRule rule = gauss_legendre(20);
  const auto pieces = merge_points(merge_points({-1.0, 1.0}, f.breakpoints()), g.breakpoints());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    sum += integrate_composite(rule, [&](double x) { return f(x) * g(x); }, pieces[i], pieces[i + 1], 64);
  }
  return sum;
}

WeakstarStudy weakstar_demo(const FunctionSpec& f, const std::vector<int>& degrees,
                            const std::vector<FunctionSpec>& tests, const PipelineConfig& cfg) {
  if (degrees.empty()) {
    throw InvalidInput("weak-* demo needs at least one degree");
  }
  if (tests.empty()) {
    throw InvalidInput("weak-* demo needs at least one test function");
  }
  for (int n : degrees) {
    require_group_degree(n);
  }
  WeakstarStudy study;
  const double norm = f.sup_norm();
  std::vector<double> exact;
  for (const FunctionSpec& g : tests) {
    exact.push_back(exact_pairing(f, g));
  }
  for (int n : degrees) {
    const WeakstarPolynomial wp = weakstar_polynomial(f, n, cfg);
    double peak = 0.0;
    for (double x : sample_points(wp.roots.z, cfg.samples_per_interval)) {
      peak = std::max(peak, std::abs(eval_perturbed(wp.roots, x)));
    }
    const double ratio = norm > 0.0 ? wp.scale * peak / norm : 0.0;
    study.empirical_c = std::max(study.empirical_c, ratio);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      WeakstarRow row;
      row.n = n;
      row.test = tests[i].name();
      row.pairing = pairing_integral(wp.series, tests[i]);
      row.exact = exact[i];
      row.error = std::abs(row.pairing - row.exact);
      row.sup_ratio = ratio;
      row.converged = wp.solve.converged;
      study.rows.push_back(row);
    }
  }
  return study;
}

double measure_negative(const std::function<double(double)>& h, std::span<const double> grid) {
  double total = 0.0;
  if (grid.size() < 2) {
    return total;
  }
  double x0 = grid[0];
  double h0 = h(x0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x1 = grid[i];
    const double h1 = h(x1);
    const bool neg0 = h0 < 0.0;
    const bool neg1 = h1 < 0.0;
    if (neg0 && neg1) {
      total += x1 - x0;
    } else if (neg0 != neg1) {
      double a = x0;
      double b = x1;
      for (int it = 0; it < 60 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if ((h(m) < 0.0) == neg0) {
          a = m;
        } else {
          b = m;
        }
      }
      const double c = 0.5 * (a + b);
      total += neg0 ? c - x0 : x1 - c;
    }
    x0 = x1;
    h0 = h1;
  }
  return total;
}

double small_set_measure(const PerturbedRoots& roots, double scale, double tau, int per_interval) {
  if (!(tau > 0.0)) {
    throw InvalidInput("threshold must be positive");
  }
  const auto grid = sample_points(roots.z, per_interval);
  return measure_negative([&](double x) { return std::abs(scale * eval_perturbed(roots, x)) - tau; }, grid);
}

double chebyshev_small_set_measure(int n, double tau) {
  if (n < 1 || !(tau > 0.0)) {
    throw InvalidInput("chebyshev_small_set_measure: need n >= 1 and tau > 0");
  }
  if (tau >= 1.0) {
    return 2.0;
  }
  const double half_angle = std::asin(tau) / n;
  return 2.0 * std::sin(half_angle) / std::sin(std::numbers::pi / (2.0 * n));
}

DensityRow level_densities(const PerturbedRoots& roots, double scale, double lo, double hi, int per_interval) {
  if (!(lo < hi)) {
    throw InvalidInput("level_densities: need lo < hi");
  }
  std::vector<double> grid{lo, hi};
  for (double x : sample_points(roots.z, per_interval)) {
    if (x > lo && x < hi) {
      grid.push_back(x);
    }
  }
  std::sort(grid.begin(), grid.end());
  DensityRow row;
  row.n = roots.degree;
  row.lo = lo;
  row.hi = hi;
  row.positive = measure_negative([&](double x) { return 0.5 - scale * eval_perturbed(roots, x); }, grid) / (hi - lo);
  row.negative = measure_negative([&](double x) { return scale * eval_perturbed(roots, x) + 0.5; }, grid) / (hi - lo);
  return row;
}

DivergenceStudy divergence_stats(const FunctionSpec& f, const std::vector<int>& degrees,
                                 const std::vector<double>& thresholds, const PipelineConfig& cfg) {
  if (degrees.empty() || thresholds.empty()) {
    throw InvalidInput("divergence stats need at least one degree and one threshold");
  }
  for (int n : degrees) {
    require_group_degree(n);
  }
  DivergenceStudy study;
  for (int n : degrees) {
    PerturbedRoots roots;
    double scale = 1.0;
    if (f.is_lipschitz()) {
      const ApproxResult res = approximate(f, n, cfg);
      roots = res.derivative_roots;
      scale = res.scale_factor;
    } else {
      const WeakstarPolynomial wp = weakstar_polynomial(f, n, cfg);
      roots = wp.roots;
      scale = wp.scale;
    }
    for (double tau : thresholds) {
      DivergenceRow row;
      row.n = n;
      row.tau = tau;
      row.measure = small_set_measure(roots, scale, tau, cfg.samples_per_interval);
      row.normalized_measure = small_set_measure(roots, 1.0, tau, cfg.samples_per_interval);
      row.reference = chebyshev_small_set_measure(n, tau);
      study.measures.push_back(row);
    }
    for (int q = 0; q < 4; ++q) {
      study.densities.push_back(
          level_densities(roots, scale, -1.0 + 0.5 * q, -0.5 + 0.5 * q, cfg.samples_per_interval));
    }
  }
  return study;
}

}  // namespace critpoly
