#include "critpoly/perturb.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "critpoly/errors.hpp"

namespace critpoly {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidInput(std::string(what) + ": non-finite argument");
  }
}

constexpr int kRenormalizeEvery = 64;
constexpr std::size_t kFastPathMaxDegree = 256;

double eval_renormalized(const std::vector<double>& z, double x) {
  double mant = 0.5;
  long exp2 = 0;
  int since = 0;
  for (double zk : z) {
    mant *= 2.0 * (x - zk);
    if (++since == kRenormalizeEvery) {
      int e = 0;
      mant = std::frexp(mant, &e);
      exp2 += e;
      since = 0;
    }
  }
  if (mant == 0.0) {
    return 0.0;
  }
  int e = 0;
  mant = std::frexp(mant, &e);
  exp2 += e;
  if (exp2 > std::numeric_limits<double>::max_exponent) {
    return std::copysign(std::numeric_limits<double>::infinity(), mant);
  }
  if (exp2 < std::numeric_limits<double>::min_exponent - 60) {
    return 0.0;
  }
  return std::ldexp(mant, static_cast<int>(exp2));
}

}  // namespace

double r_a(double a, double lambda) { return (a * lambda - 1.0) / (lambda * lambda + lambda + 1.0); }

Interval solve_delta_range(double a) {
  require_finite(a, "solve_delta_range");
  if (a <= 0.0) {
    throw InvalidInput("solve_delta_range: a must be positive");
  }
  return {r_a(a, 0.5 / a), r_a(a, 2.0 / a)};
}

DeltaSolution solve_delta(double epsilon, double a) {
  require_finite(epsilon, "solve_delta");
  const Interval range = solve_delta_range(a);
  if (epsilon < range.lo || epsilon > range.hi) {
    throw SolverFailure("solve_delta: epsilon = " + std::to_string(epsilon) +
                        " has no lambda in [1/(2a), 2/a] for a = " + std::to_string(a));
  }
  // r_a(lambda) = eps  <=>  eps lambda^2 + (eps - a) lambda + (eps + 1) = 0;
  // the root near 1/a in cancellation-free form.
  const double b = a - epsilon;
  const double disc = b * b - 4.0 * epsilon * (epsilon + 1.0);
  if (disc < 0.0) {
    throw SolverFailure("solve_delta: no real lambda for a = " + std::to_string(a));
  }
  double lambda = 2.0 * (epsilon + 1.0) / (b + std::sqrt(disc));
  // one Newton step on the polynomial form tidies the last ulp
  const double g = (epsilon * lambda + (epsilon - a)) * lambda + (epsilon + 1.0);
  const double dg = 2.0 * epsilon * lambda + (epsilon - a);
  if (dg != 0.0) {
    lambda -= g / dg;
  }
  if (lambda < 0.5 / a || lambda > 2.0 / a) {
    throw SolverFailure("solve_delta: root left the admissible bracket");
  }
  return {lambda, lambda * epsilon};
}

double distortion_2pt(double epsilon, double x) {
  require_finite(epsilon, "distortion_2pt");
  require_finite(x, "distortion_2pt");
  const double q = (x - 1.0) * (x + 1.0);
  if (q == 0.0) {
    throw InvalidInput("distortion_2pt: pole at x = +-1");
  }
  return 1.0 - (2.0 * epsilon + epsilon * epsilon) / q;
}

double distortion_constant(double epsilon, double delta, double a) {
  const double e = epsilon;
  const double d = delta;
  return -a * d - a * e + d * d + (1.0 - a) * d * e - a * e * e + d * d * e + d * e * e;
}

double distortion_3pt(double epsilon, double a, double x) {
  require_finite(x, "distortion_3pt");
  const DeltaSolution sol = solve_delta(epsilon, a);
  const double q = (x + a) * x * (x - 1.0);
  if (q == 0.0) {
    throw InvalidInput("distortion_3pt: pole at x in {-a, 0, 1}");
  }
  return 1.0 + distortion_constant(epsilon, sol.delta, a) / q;
}

double distortion_3pt_product(double epsilon, double a, double x) {
  require_finite(x, "distortion_3pt_product");
  const double d = solve_delta(epsilon, a).delta;
  if (x + a == 0.0 || x == 0.0 || x == 1.0) {
    throw InvalidInput("distortion_3pt_product: pole at x in {-a, 0, 1}");
  }
  return ((x + a - d) / (x + a)) * ((x + d + epsilon) / x) * ((x - 1.0 - epsilon) / (x - 1.0));
}

double perturbed_cubic(double epsilon, double delta, double a, double u) {
  const double e = epsilon;
  const double d = delta;
  const double b = -a - e + a * d - d * e - d * d - e * e;
  const double c = distortion_constant(e, d, a);
  return ((u + (a - 1.0)) * u + b) * u + c;
}

RescaleMap rescale_map(const NodalGrid& grid, int k) {
  (void)grid.group(k);  // validates k and the degree
  RescaleMap m;
  m.group = k;
  m.origin = grid.root(4 * k - 1);
  m.unit = grid.nodal_length(4 * k - 1);
  m.a = grid.nodal_length(4 * k - 2) / m.unit;
  m.s = -(grid.nodal_length(4 * k - 3) + grid.nodal_length(4 * k - 2)) / m.unit;
  m.t = 1.0 + grid.nodal_length(4 * k) / m.unit;
  return m;
}

PerturbedRoots chebyshev_roots(const NodalGrid& grid) {
  const auto r = grid.roots();
  return {std::vector<double>(r.begin(), r.end()), grid.degree()};
}

PerturbedRoots perturbed_roots(const NodalGrid& grid, const PerturbationVector& y) {
  if (!grid.has_groups()) {
    throw InvalidInput("perturbed_roots: degree must be 8m+1, got " + std::to_string(grid.degree()));
  }
  const int groups = grid.group_count();
  if (static_cast<int>(y.y.size()) != groups) {
    throw InvalidInput("perturbed_roots: expected " + std::to_string(groups) + " factors, got " +
                       std::to_string(y.y.size()));
  }
  PerturbedRoots out = chebyshev_roots(grid);
  for (int k = 1; k <= groups; ++k) {
    const double yk = y.y[static_cast<std::size_t>(k - 1)];
    require_finite(yk, "perturbed_roots");
    if (std::abs(yk) > y.cap) {
      throw InvalidPerturbation("perturbed_roots: |y_" + std::to_string(k) + "| = " +
                                std::to_string(std::abs(yk)) + " exceeds cap " + std::to_string(y.cap));
    }
    if (yk == 0.0) {
      continue;
    }
    const RescaleMap map = rescale_map(grid, k);
    DeltaSolution sol;
    try {
      sol = solve_delta(yk, map.a);
    } catch (const SolverFailure& e) {
      throw InvalidPerturbation("perturbed_roots: group " + std::to_string(k) + ": " + e.what());
    }
    const auto base = static_cast<std::size_t>(4 * k - 3);  // zero-based index of root(4k-2)
    out.z[base] += sol.delta * map.unit;
    out.z[base + 1] -= (yk + sol.delta) * map.unit;
    out.z[base + 2] += yk * map.unit;
  }
  for (std::size_t i = 1; i < out.z.size(); ++i) {
    if (!(out.z[i - 1] < out.z[i])) {
      throw InvalidPerturbation("perturbed_roots: roots " + std::to_string(i) + " and " +
                                std::to_string(i + 1) + " are no longer ordered");
    }
  }
  return out;
}

double eval_perturbed(const PerturbedRoots& roots, double x) {
  require_finite(x, "eval_perturbed");
  if (roots.z.size() > kFastPathMaxDegree) {
    return eval_renormalized(roots.z, x);
  }
  // |2(x - z)| <= 4 on [-1,1], so partial products stay below 2^512 here
  double prod = 0.5;
  for (double zk : roots.z) {
    prod *= 2.0 * (x - zk);
  }
  if (std::isfinite(prod) && (prod == 0.0 || std::abs(prod) > 0x1p-900)) {
    return prod;
  }
  return eval_renormalized(roots.z, x);
}

ChebSeries to_series(const PerturbedRoots& roots) {
  const int n = std::max(1, roots.degree);
  const auto x = extreme_points(n);
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    v[j] = eval_perturbed(roots, x[j]);
  }
  return cheb_interpolate(v);
}

}  // namespace critpoly
