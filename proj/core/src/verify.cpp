#include "critpoly/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "critpoly/chebyshev.hpp"
#include "critpoly/errors.hpp"
#include "critpoly/nodal_grid.hpp"
#include "critpoly/perturb.hpp"
#include "critpoly/pipeline.hpp"
#include "critpoly/quadrature.hpp"
#include "critpoly/solver.hpp"

namespace critpoly {

namespace {

constexpr double kPi = std::numbers::pi;
// relative slack for inequalities that are tight up to rounding
constexpr double kSlack = 1e-12;

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

CheckResult start(const std::string& id, std::string context) {
  CheckResult r;
  r.id = id;
  for (const CheckInfo& info : check_catalog()) {
    if (info.id == id) {
      r.name = info.property;
    }
  }
  r.context = std::move(context);
  return r;
}

CheckResult skip(CheckResult r, std::string reason) {
  r.skipped = true;
  r.passed = true;
  r.reason = std::move(reason);
  return r;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(n)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// y_k uniform on [-rho, rho] intersected with the group's admissible range
std::vector<double> random_y(const GroupMaps& maps, double rho, std::mt19937_64& rng) {
  std::vector<double> y(static_cast<std::size_t>(maps.group_count()));
  for (int k = 1; k <= maps.group_count(); ++k) {
    const Interval r = maps.group(k).y_range;
    y[static_cast<std::size_t>(k - 1)] = uniform(rng, std::max(r.lo, -rho), std::min(r.hi, rho));
  }
  return y;
}

bool group_degree(int n) { return n >= 9 && n % 8 == 1; }

CheckResult needs_groups(CheckResult r, int n) {
  return skip(std::move(r), fmt("group maps need n = 8m+1 >= 9, got %d", n));
}

// Sign-aware cubic distortion draw in the small-alpha regime.
struct DistortionDraw {
  double a;
  double eps;
};

DistortionDraw draw_small(std::mt19937_64& rng, bool positive_only) {
  DistortionDraw d{1.0 + uniform(rng, -0.02, 0.02), uniform(rng, 1e-4, 0.02)};
  if (!positive_only && uniform(rng, 0.0, 1.0) < 0.5) {
    d.eps = -d.eps;
  }
  return d;
}

// Grid of `count` points strictly inside (lo, hi).
std::vector<double> open_grid(double lo, double hi, int count) {
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    x[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 0.5) / count;
  }
  return x;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog{
      {"nodal-length-upper", "every nodal interval is at most pi/n long", true},
      {"nodal-length-bounds", "4k/n^2 <= |I_k| <= k pi^2/n^2 for k <= (n-1)/2", true},
      {"nodal-length-monotone", "nodal lengths are symmetric and nondecreasing toward the origin", true},
      {"nodal-length-growth", "1 <= |I_{k+j}|/|I_k| <= 1 + (pi/2)(j/k) on the left half", true},
      {"nodal-distance-lower", "dist(I_k, I_{k+j}) >= 2(j-1)(2k+j)/n^2 on the left half", true},
      {"nodal-distance-ratio", "|I_k| / dist(I_k, I_{k+j}) <= 16/(|j|-1); empirical constant reported", true},
      {"node-area", "per-length integral of |T_n| over each nodal interval is in [2/pi, 2/pi + pi/(6n^2)]", true},
      {"node-square-average", "per-length integral of T_n^2 over each nodal interval is in [1/2, 1/2 + pi^2/(24n^2)]",
       true},
      {"adjacent-cancellation",
       "average of T_n over two adjacent nodes is below eta/3 when their length ratio is at most 1+eta and "
       "n >= 6/sqrt(eta)",
       true},
      {"product-identity", "T_n T_m = (T_{n+m} + T_{|n-m|})/2 coefficientwise to 1e-12", true},
      {"erdos-grunwald",
       "a real-rooted polynomial's integral between consecutive roots is at most 2/3 of length times max", false},
      {"distortion-agreement", "rational and product forms of the 3-point distortion agree to 1e-11", false},
      {"distortion-monotone", "the perturbed cubic decreases strictly as epsilon increases", false},
      {"distortion-sign", "R - 1 has the fixed sign pattern on the four pieces cut by -a, 0, 1", false},
      {"distortion-cubic-decay", "|R-1| |(x+1)x(x-1)| / |eps| is in [1.5, 2.5] for 2 <= |x| <= 100", false},
      {"distortion-near-field", "(R-1)/eps >= 2.5 on (0,1) and (1-R)/eps >= 2.5 on (-a,0)", false},
      {"distortion-intermediate", "|R-1|/|eps| >= 0.25 with the expected sign on [-2,-a] and [1,2]", false},
      {"minmax-cubic", "monic cubics with roots in [-1,1] have sup norm >= 1/4, minimized by roots 0, +-sqrt(3)/2",
       false},
      {"sup-stability", "per-group sup of |T_n(.,y)| stays within 1.2 (|y| <= 0.001) and 1.5 (|y| <= 0.05) of sup |T_n|",
       true},
      {"internal-slope", "(f_m(y) - f_m(0))/y >= 21/20 on interior groups; mean slope reported", true},
      {"f-covering", "f_k([-t,t]) contains [-t,t] on interior groups at t = 0.05", true},
      {"coupling", "max_k |f_k(y) - g_k(y)| <= t/2 for random y in [-t,t]^N", true},
      {"exterior-smallness", "perturbing every group except m moves A_m by at most t/2", true},
      {"average-bound", "|A_k(y)| <= 7/6 for random y in [-t,t]^N", true},
      {"target-recovery", "solving g(y) = g(y*) reproduces the targets to 1e-9", true},
      {"small-set-reference", "measured |{|T_n| < 1/2}| equals 2 sin(arcsin(1/2)/n) / sin(pi/(2n))", true},
      {"small-set-perturbed", "|{|T_n(.,y)| < tau}| <= 10 tau for |y| <= 0.05 and tau in {0.05, 0.1}", true},
      {"level-density", "{T_n(.,y) > 1/2} and {T_n(.,y) < -1/2} each fill at least 0.2 of every quarter of [-1,1]",
       true},
      {"four-point", "either-or increment inequality holds for every exponent tuple on {-1-eps, -1, 1, 1+eps}",
       false},
      {"three-point-density",
       "area ratio over [0,1] vs [-1,0] increases in a and reaches every target in [0.1, 10] within 25%", false},
  };
  return catalog;
}

bool is_known_check(const std::string& id) {
  const auto& c = check_catalog();
  return std::any_of(c.begin(), c.end(), [&](const CheckInfo& i) { return i.id == id; });
}

bool is_interior_group(double a) { return std::abs(a - 1.0) < 0.2; }

// ---------------------------------------------------------------- geometry

CheckResult check_nodal_length_upper(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-length-upper", fmt("n=%d", n));
  double worst = 0.0;
  for (int k = 1; k < n; ++k) {
    worst = std::max(worst, grid.nodal_length(k));
  }
  const double bound = kPi / n;
  r.observed = {worst};
  r.bound = {bound};
  r.passed = worst <= bound * (1.0 + kSlack);
  return r;
}

CheckResult check_nodal_length_bounds(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-length-bounds", fmt("n=%d", n));
  double min_lower = std::numeric_limits<double>::infinity();
  double max_upper = 0.0;
  const double n2 = static_cast<double>(n) * n;
  for (int k = 1; k <= (n - 1) / 2; ++k) {
    const double len = grid.nodal_length(k);
    min_lower = std::min(min_lower, len / (4.0 * k / n2));
    max_upper = std::max(max_upper, len / (k * kPi * kPi / n2));
  }
  r.observed = {min_lower, max_upper};
  r.bound = {1.0, 1.0};
  r.passed = min_lower >= 1.0 - kSlack && max_upper <= 1.0 + kSlack;
  return r;
}

CheckResult check_nodal_length_monotone(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-length-monotone", fmt("n=%d", n));
  double asym = 0.0;
  for (int k = 1; k < n; ++k) {
    const double a = grid.nodal_length(k);
    const double b = grid.nodal_length(n - k);
    asym = std::max(asym, std::abs(a - b) / std::max(a, b));
  }
  double worst_drop = 0.0;  // max of |I_k| / |I_{k+1}| - 1 on the left half
  for (int k = 1; k + 1 <= n / 2; ++k) {
    worst_drop = std::max(worst_drop, grid.nodal_length(k) / grid.nodal_length(k + 1) - 1.0);
  }
  r.observed = {asym, worst_drop};
  r.bound = {kSlack, kSlack};
  r.passed = asym <= kSlack && worst_drop <= kSlack;
  return r;
}

CheckResult check_nodal_length_growth(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-length-growth", fmt("n=%d", n));
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_rel = 0.0;
  const int half = n / 2;
  for (int k = 1; k <= half; ++k) {
    const double base = grid.nodal_length(k);
    for (int j = 1; k + j <= half; ++j) {
      const double ratio = grid.nodal_length(k + j) / base;
      min_ratio = std::min(min_ratio, ratio);
      max_rel = std::max(max_rel, ratio / (1.0 + 0.5 * kPi * j / k));
    }
  }
  if (!std::isfinite(min_ratio)) {
    return skip(std::move(r), "no pairs with k + j <= n/2");
  }
  r.observed = {min_ratio, max_rel};
  r.bound = {1.0, 1.0};
  r.passed = min_ratio >= 1.0 - kSlack && max_rel <= 1.0 + kSlack;
  return r;
}

CheckResult check_nodal_distance_lower(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-distance-lower", fmt("n=%d", n));
  double min_rel = std::numeric_limits<double>::infinity();
  const double n2 = static_cast<double>(n) * n;
  for (int k = 1; 2 * k < n; ++k) {
    for (int j = 2; 2 * (k + j) < n; ++j) {
      const double bound = 2.0 * (j - 1) * (2.0 * k + j) / n2;
      min_rel = std::min(min_rel, interval_distance(grid, k, j) / bound);
    }
  }
  if (!std::isfinite(min_rel)) {
    return skip(std::move(r), "no pairs with k + j < n/2 and j >= 2");
  }
  r.observed = {min_rel};
  r.bound = {1.0};
  r.passed = min_rel >= 1.0 - kSlack;
  return r;
}

CheckResult check_nodal_distance_ratio(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("nodal-distance-ratio", fmt("n=%d", n));
  double worst = 0.0;  // max of ratio (|j| - 1)
  for (int k = 1; k < n; ++k) {
    for (int m = 1; m < n; ++m) {
      const int j = m - k;
      if (std::abs(j) < 2) {
        continue;
      }
      worst = std::max(worst, interval_distance_ratio(grid, k, j) * (std::abs(j) - 1));
    }
  }
  // second value: empirical constant, to compare with the conjectured 2
  r.observed = {worst / 16.0, worst};
  r.bound = {1.0, 16.0};
  r.passed = worst <= 16.0 * (1.0 + kSlack);
  return r;
}

// ---------------------------------------------------------------- areas

CheckResult check_node_area(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("node-area", fmt("n=%d", n));
  const ChebSeries q = cheb_antiderivative(ChebSeries::basis(n), 0.0, 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double prev = q(grid.root(1));
  for (int k = 1; k < n; ++k) {
    const double next = q(grid.root(k + 1));
    // T_n keeps one sign on I_k, so |integral of T_n| is the integral of |T_n|
    const double avg = std::abs(next - prev) / grid.nodal_length(k);
    lo = std::min(lo, avg);
    hi = std::max(hi, avg);
    prev = next;
  }
  const double b_lo = 2.0 / kPi;
  const double b_hi = 2.0 / kPi + kPi / (6.0 * n * n);
  r.observed = {lo, hi};
  r.bound = {b_lo, b_hi};
  r.passed = lo >= b_lo && hi <= b_hi;
  return r;
}

CheckResult check_node_square_average(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("node-square-average", fmt("n=%d", n));
  const ChebSeries tn = ChebSeries::basis(n);
  const ChebSeries q = cheb_antiderivative(multiply(tn, tn), 0.0, 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double prev = q(grid.root(1));
  for (int k = 1; k < n; ++k) {
    const double next = q(grid.root(k + 1));
    const double avg = (next - prev) / grid.nodal_length(k);
    lo = std::min(lo, avg);
    hi = std::max(hi, avg);
    prev = next;
  }
  const double b_hi = 0.5 + kPi * kPi / (24.0 * n * n);
  r.observed = {lo, hi};
  r.bound = {0.5, b_hi};
  r.passed = lo >= 0.5 && hi <= b_hi;
  return r;
}

CheckResult check_adjacent_cancellation(int n) {
  const NodalGrid grid = build_grid(n);
  CheckResult r = start("adjacent-cancellation", fmt("n=%d", n));
  if (n < 3) {
    return skip(std::move(r), "need two adjacent nodal intervals");
  }
  const ChebSeries q = cheb_antiderivative(ChebSeries::basis(n), 0.0, 0.0);
  // for each pair take the smallest eta meeting both hypotheses
  const double eta_floor = 36.0 / (static_cast<double>(n) * n);
  double worst = 0.0;  // max of |avg| / (eta/3)
  for (int k = 1; k + 1 < n; ++k) {
    const double a = grid.nodal_length(k);
    const double b = grid.nodal_length(k + 1);
    const double eta = std::max(std::max(a, b) / std::min(a, b) - 1.0, eta_floor);
    const double avg = std::abs(q(grid.root(k + 2)) - q(grid.root(k))) / (a + b);
    worst = std::max(worst, avg / (eta / 3.0));
  }
  r.observed = {worst};
  r.bound = {1.0};
  r.passed = worst < 1.0;
  return r;
}

CheckResult check_product_identity(int n) {
  CheckResult r = start("product-identity", fmt("n=%d", n));
  double worst = 0.0;
  for (int m : {0, 1, 2, n / 2, n - 1, n}) {
    const ChebSeries prod = multiply(ChebSeries::basis(n), ChebSeries::basis(m));
    std::vector<double> expect(static_cast<std::size_t>(n + m) + 1, 0.0);
    expect[static_cast<std::size_t>(n + m)] += 0.5;
    expect[static_cast<std::size_t>(std::abs(n - m))] += 0.5;
    const auto c = prod.coeffs();
    const std::size_t len = std::max(c.size(), expect.size());
    for (std::size_t i = 0; i < len; ++i) {
      const double got = i < c.size() ? c[i] : 0.0;
      const double want = i < expect.size() ? expect[i] : 0.0;
      worst = std::max(worst, std::abs(got - want));
    }
  }
  r.observed = {worst};
  r.bound = {1e-12};
  r.passed = worst <= 1e-12;
  return r;
}

CheckResult check_erdos_grunwald(std::uint64_t seed, int samples) {
  CheckResult r = start("erdos-grunwald", fmt("degrees=5,9,17 samples=%d seed=%llu", samples,
                                              static_cast<unsigned long long>(seed)));
  double worst = 0.0;  // max of integral / ((b-a) max|p|)
  for (int deg : {5, 9, 17}) {
    auto rng = make_rng(seed, 11, static_cast<std::uint64_t>(deg));
    const GaussRule rule = gauss_legendre(deg / 2 + 2);
    for (int s = 0; s < samples; ++s) {
      std::vector<double> roots(static_cast<std::size_t>(deg));
      for (double& v : roots) {
        v = uniform(rng, -1.0, 1.0);
      }
      std::sort(roots.begin(), roots.end());
      auto p = [&](double x) {
        double v = 1.0;
        for (double z : roots) {
          v *= x - z;
        }
        return v;
      };
      for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double a = roots[i];
        const double b = roots[i + 1];
        if (b - a < 1e-12) {
          continue;
        }
        // the log-derivative sum 1/(x - z) decreases strictly on (a, b); its zero is the max of |p|
        double lo = a;
        double hi = b;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) {
            break;
          }
          double s_sum = 0.0;
          for (double z : roots) {
            s_sum += 1.0 / (mid - z);
          }
          (s_sum > 0.0 ? lo : hi) = mid;
        }
        const double peak = std::abs(p(0.5 * (lo + hi)));
        const double integral = std::abs(integrate_rule(rule, p, a, b));
        worst = std::max(worst, integral / ((b - a) * peak));
      }
    }
  }
  r.observed = {worst};
  r.bound = {2.0 / 3.0};
  r.passed = worst <= (2.0 / 3.0) * (1.0 + kSlack);
  return r;
}

// ---------------------------------------------------------------- distortion

CheckResult check_distortion_agreement(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-agreement",
                        fmt("draws=%d eps in [-0.1,0.1] a in [0.8,1.2] x in [-3,3] seed=%llu", draws,
                            static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 21, 0);
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    const double a = uniform(rng, 0.8, 1.2);
    const double eps = uniform(rng, -0.1, 0.1);
    const double delta = solve_delta(eps, a).delta;
    const double avoid[] = {-a, 0.0, 1.0, -a + delta, -delta - eps, 1.0 + eps};
    for (double x : open_grid(-3.0, 3.0, 1000)) {
      if (std::any_of(std::begin(avoid), std::end(avoid), [&](double p) { return std::abs(x - p) < 1e-3; })) {
        continue;
      }
      const double rat = distortion_3pt(eps, a, x);
      const double prod = distortion_3pt_product(eps, a, x);
      worst = std::max(worst, std::abs(rat - prod) / std::abs(prod));
    }
  }
  r.observed = {worst};
  r.bound = {1e-11};
  r.passed = worst <= 1e-11;
  return r;
}

CheckResult check_distortion_monotone(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-monotone",
                        fmt("draws=%d grid=1000 on [-3,3] seed=%llu", draws, static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 22, 0);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int d = 0; d < draws; ++d) {
    const double a = uniform(rng, 0.8, 1.2);
    double e1 = uniform(rng, -0.1, 0.1);
    double e2 = uniform(rng, -0.1, 0.1);
    if (e1 > e2) {
      std::swap(e1, e2);
    }
    const double d1 = solve_delta(e1, a).delta;
    const double d2 = solve_delta(e2, a).delta;
    for (double x : open_grid(-3.0, 3.0, 1000)) {
      min_gap = std::min(min_gap, perturbed_cubic(e1, d1, a, x) - perturbed_cubic(e2, d2, a, x));
    }
  }
  r.observed = {min_gap};
  r.bound = {0.0};
  r.passed = min_gap > 0.0;
  return r;
}

CheckResult check_distortion_sign(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-sign", fmt("draws=%d grid=4000 on [-10,10] seed=%llu", draws,
                                               static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 23, 0);
  int violations = 0;
  for (int d = 0; d < draws; ++d) {
    const double a = uniform(rng, 0.8, 1.2);
    double eps = uniform(rng, 1e-3, 0.1);
    if (d % 2 == 1) {
      eps = -eps;
    }
    for (double x : open_grid(-10.0, 10.0, 4000)) {
      if (x == -a || x == 0.0 || x == 1.0) {
        continue;
      }
      // R >= 1 on (-inf,-a) and (0,1), R <= 1 on (-a,0) and (1,inf) for eps > 0
      const double expect = (x < -a || (x > 0.0 && x < 1.0)) ? 1.0 : -1.0;
      const double dev = distortion_3pt(eps, a, x) - 1.0;
      if (dev * expect * (eps > 0.0 ? 1.0 : -1.0) < 0.0) {
        ++violations;
      }
    }
  }
  r.observed = {static_cast<double>(violations)};
  r.bound = {0.0};
  r.passed = violations == 0;
  return r;
}

CheckResult check_distortion_cubic_decay(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-cubic-decay", fmt("draws=%d |alpha|,|eps| <= 0.02 seed=%llu", draws,
                                                      static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 24, 0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int d = 0; d < draws; ++d) {
    const DistortionDraw dd = draw_small(rng, false);
    for (double s : {-1.0, 1.0}) {
      for (double mag : open_grid(2.0, 100.0, 1000)) {
        const double x = s * mag;
        const double ratio =
            std::abs(distortion_3pt(dd.eps, dd.a, x) - 1.0) * std::abs((x + 1.0) * x * (x - 1.0)) / std::abs(dd.eps);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
  }
  r.observed = {lo, hi};
  r.bound = {1.5, 2.5};
  r.passed = lo >= 1.5 && hi <= 2.5;
  return r;
}

CheckResult check_distortion_near_field(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-near-field", fmt("draws=%d per sign, |alpha|,|eps| <= 0.02 seed=%llu", draws,
                                                     static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 25, 0);
  double right = std::numeric_limits<double>::infinity();  // min (R-1)/eps on (0,1)
  double left = std::numeric_limits<double>::infinity();   // min (1-R)/eps on (-a,0)
  for (int d = 0; d < 2 * draws; ++d) {
    DistortionDraw dd = draw_small(rng, true);
    if (d % 2 == 1) {
      dd.eps = -dd.eps;
    }
    for (double x : open_grid(0.0, 1.0, 500)) {
      right = std::min(right, (distortion_3pt(dd.eps, dd.a, x) - 1.0) / dd.eps);
    }
    for (double x : open_grid(-dd.a, 0.0, 500)) {
      left = std::min(left, (1.0 - distortion_3pt(dd.eps, dd.a, x)) / dd.eps);
    }
  }
  r.observed = {right, left};
  r.bound = {2.5, 2.5};
  r.passed = right >= 2.5 && left >= 2.5;
  return r;
}

CheckResult check_distortion_intermediate(std::uint64_t seed, int draws) {
  CheckResult r = start("distortion-intermediate", fmt("draws=%d |alpha|,|eps| <= 0.02 seed=%llu", draws,
                                                       static_cast<unsigned long long>(seed)));
  auto rng = make_rng(seed, 26, 0);
  double min_mag = std::numeric_limits<double>::infinity();
  int sign_violations = 0;
  for (int d = 0; d < draws; ++d) {
    const DistortionDraw dd = draw_small(rng, false);
    const double s = dd.eps > 0.0 ? 1.0 : -1.0;
    auto visit = [&](double lo, double hi, double expect) {
      for (double x : open_grid(lo, hi, 500)) {
        const double dev = distortion_3pt(dd.eps, dd.a, x) - 1.0;
        min_mag = std::min(min_mag, std::abs(dev) / std::abs(dd.eps));
        if (dev * expect * s < 0.0) {
          ++sign_violations;
        }
      }
    };
    visit(-2.0, -dd.a, 1.0);  // R >= 1 here for eps > 0
    visit(1.0, 2.0, -1.0);    // R <= 1 here for eps > 0
  }
  r.observed = {min_mag, static_cast<double>(sign_violations)};
  r.bound = {0.25, 0.0};
  r.passed = min_mag >= 0.25 && sign_violations == 0;
  return r;
}

// ---------------------------------------------------------------- extremes

double cubic_sup_norm(double r1, double r2, double r3) {
  auto p = [&](double x) { return (x - r1) * (x - r2) * (x - r3); };
  double best = std::max(std::abs(p(-1.0)), std::abs(p(1.0)));
  // p'(x) = 3x^2 - 2 s1 x + s2
  const double s1 = r1 + r2 + r3;
  const double s2 = r1 * r2 + r1 * r3 + r2 * r3;
  const double disc = s1 * s1 - 3.0 * s2;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    for (double x : {(s1 - root) / 3.0, (s1 + root) / 3.0}) {
      if (x >= -1.0 && x <= 1.0) {
        best = std::max(best, std::abs(p(x)));
      }
    }
  }
  return best;
}

CheckResult check_minmax_cubic(int grid_resolution) {
  if (grid_resolution < 50) {
    throw InvalidInput("minmax cubic check needs resolution >= 50");
  }
  CheckResult r = start("minmax-cubic", fmt("resolution=%d", grid_resolution));
  const double step = 2.0 / grid_resolution;
  double best = std::numeric_limits<double>::infinity();
  double arg[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i <= grid_resolution; ++i) {
    for (int j = i; j <= grid_resolution; ++j) {
      for (int k = j; k <= grid_resolution; ++k) {
        const double r1 = -1.0 + i * step;
        const double r2 = -1.0 + j * step;
        const double r3 = -1.0 + k * step;
        const double m = cubic_sup_norm(r1, r2, r3);
        if (m < best) {
          best = m;
          arg[0] = r1;
          arg[1] = r2;
          arg[2] = r3;
        }
      }
    }
  }
  const double target[3] = {-std::sqrt(3.0) / 2.0, 0.0, std::sqrt(3.0) / 2.0};
  double dist = 0.0;
  for (int i = 0; i < 3; ++i) {
    dist = std::max(dist, std::abs(arg[i] - target[i]));
  }
  r.observed = {best, dist, arg[0], arg[1], arg[2]};
  r.bound = {0.2499, step};
  r.passed = best >= 0.2499 && dist <= step * (1.0 + kSlack);
  return r;
}

CheckResult check_sup_stability(int n, const std::vector<double>& y_norms, std::uint64_t seed, int draws) {
  CheckResult r = start("sup-stability", fmt("n=%d draws=%d grid=16 per nodal interval seed=%llu", n, draws,
                                             static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, kDefaultTCap);
  const auto pts = sample_points(grid.roots(), 16);
  const int groups = grid.group_count();
  // which group each sample belongs to
  std::vector<int> owner(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int k = 1; k <= groups; ++k) {
      if (grid.group(k).contains(pts[i])) {
        owner[i] = k;
        break;
      }
    }
  }
  const PerturbedRoots base = chebyshev_roots(grid);
  std::vector<double> sup0(static_cast<std::size_t>(groups) + 1, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (owner[i] > 0) {
      auto& s = sup0[static_cast<std::size_t>(owner[i])];
      s = std::max(s, std::abs(eval_perturbed(base, pts[i])));
    }
  }
  auto rng = make_rng(seed, 31, static_cast<std::uint64_t>(n));
  for (double rho : y_norms) {
    double worst = 1.0;
    for (int d = 0; d < draws; ++d) {
      const PerturbedRoots roots = perturbed_roots(grid, PerturbationVector{random_y(maps, rho, rng), kDefaultTCap});
      std::vector<double> sup(static_cast<std::size_t>(groups) + 1, 0.0);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (owner[i] > 0) {
          auto& s = sup[static_cast<std::size_t>(owner[i])];
          s = std::max(s, std::abs(eval_perturbed(roots, pts[i])));
        }
      }
      for (int k = 1; k <= groups; ++k) {
        const double a = sup[static_cast<std::size_t>(k)];
        const double b = sup0[static_cast<std::size_t>(k)];
        worst = std::max(worst, std::max(a / b, b / a));
      }
    }
    r.observed.push_back(worst);
    r.bound.push_back(rho <= 0.001 ? 1.2 : 1.5);
  }
  r.passed = true;
  for (std::size_t i = 0; i < r.observed.size(); ++i) {
    r.passed = r.passed && r.observed[i] <= r.bound[i];
  }
  return r;
}

CheckResult check_internal_slope(int n) {
  CheckResult r = start("internal-slope", fmt("n=%d y in {+-0.01, +-0.02, +-0.05}", n));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const GroupMaps maps(build_grid(n), kDefaultTCap);
  double min_slope = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  int count = 0;
  for (int k = 1; k <= maps.group_count(); ++k) {
    if (!is_interior_group(maps.group(k).map.a)) {
      continue;
    }
    const double f0 = maps.f_component(k, 0.0);
    for (double y : {-0.05, -0.02, -0.01, 0.01, 0.02, 0.05}) {
      const double slope = (maps.f_component(k, y) - f0) / y;
      min_slope = std::min(min_slope, slope);
      sum += slope;
      ++count;
    }
  }
  if (count == 0) {
    return skip(std::move(r), "no interior groups (|a - 1| < 1/5)");
  }
  r.observed = {min_slope, sum / count};
  r.bound = {21.0 / 20.0};
  r.passed = min_slope >= 21.0 / 20.0;
  return r;
}

CheckResult check_f_covering(int n, double t) {
  CheckResult r = start("f-covering", fmt("n=%d t=%g", n, t));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const GroupMaps maps(build_grid(n), kDefaultTCap);
  double worst = std::numeric_limits<double>::infinity();  // min of f(t) - t and -t - f(-t)
  for (int k = 1; k <= maps.group_count(); ++k) {
    if (!is_interior_group(maps.group(k).map.a)) {
      continue;
    }
    worst = std::min(worst, maps.f_component(k, t) - t);
    worst = std::min(worst, -t - maps.f_component(k, -t));
  }
  if (!std::isfinite(worst)) {
    return skip(std::move(r), "no interior groups (|a - 1| < 1/5)");
  }
  r.observed = {worst};
  r.bound = {0.0};
  r.passed = worst >= 0.0;
  return r;
}

CheckResult check_coupling(int n, double t, std::uint64_t seed, int draws) {
  CheckResult r = start("coupling", fmt("n=%d t=%g draws=%d seed=%llu", n, t, draws,
                                        static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const GroupMaps maps(build_grid(n), t);
  auto rng = make_rng(seed, 41, static_cast<std::uint64_t>(n));
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto y = random_y(maps, t, rng);
    const auto f = maps.f_map(y);
    const auto g = maps.g_map(y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      worst = std::max(worst, std::abs(f[i] - g[i]));
    }
  }
  r.observed = {worst};
  r.bound = {t / 2.0};
  r.passed = worst <= t / 2.0;
  return r;
}

CheckResult check_exterior_smallness(int n, double t, std::uint64_t seed, int draws) {
  CheckResult r = start("exterior-smallness", fmt("n=%d t=%g draws=%d seed=%llu", n, t, draws,
                                                  static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, t);
  std::vector<int> interior;
  for (int k = 1; k <= maps.group_count(); ++k) {
    if (is_interior_group(maps.group(k).map.a)) {
      interior.push_back(k);
    }
  }
  if (interior.empty()) {
    return skip(std::move(r), "no interior groups (|a - 1| < 1/5)");
  }
  // first, quarter, middle and last interior groups
  std::vector<int> picks;
  for (std::size_t idx : {std::size_t{0}, interior.size() / 4, interior.size() / 2, interior.size() - 1}) {
    if (std::find(picks.begin(), picks.end(), interior[idx]) == picks.end()) {
      picks.push_back(interior[idx]);
    }
  }
  auto rng = make_rng(seed, 42, static_cast<std::uint64_t>(n));
  const PerturbedRoots base = chebyshev_roots(grid);
  double worst = 0.0;
  for (int m : picks) {
    const double a0 = group_average_direct(grid, base, m);
    for (int d = 0; d < draws; ++d) {
      auto y = random_y(maps, t, rng);
      y[static_cast<std::size_t>(m - 1)] = 0.0;
      const PerturbedRoots roots = perturbed_roots(grid, PerturbationVector{y, t});
      worst = std::max(worst, std::abs(group_average_direct(grid, roots, m) - a0));
    }
  }
  r.observed = {worst};
  r.bound = {t / 2.0};
  r.passed = worst <= t / 2.0;
  return r;
}

CheckResult check_average_bound(int n, double t, std::uint64_t seed, int draws) {
  CheckResult r = start("average-bound", fmt("n=%d t=%g draws=%d seed=%llu", n, t, draws,
                                             static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const GroupMaps maps(build_grid(n), t);
  auto rng = make_rng(seed, 43, static_cast<std::uint64_t>(n));
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    for (double v : maps.g_map(random_y(maps, t, rng))) {
      worst = std::max(worst, std::abs(v));
    }
  }
  r.observed = {worst};
  r.bound = {7.0 / 6.0};
  r.passed = worst <= 7.0 / 6.0;
  return r;
}

CheckResult check_target_recovery(int n, double t, std::uint64_t seed, int draws) {
  CheckResult r = start("target-recovery", fmt("n=%d t=%g draws=%d |y*| <= t/2 seed=%llu", n, t, draws,
                                               static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, t);
  SolverConfig cfg;
  cfg.t_cap = t;
  auto rng = make_rng(seed, 44, static_cast<std::uint64_t>(n));
  double worst_residual = 0.0;
  double worst_y = 0.0;
  int failures = 0;
  for (int d = 0; d < draws; ++d) {
    const auto ystar = random_y(maps, t / 2.0, rng);
    TargetAverages targets{maps.g_map(ystar), t};
    const SolveReport rep = solve_targets(maps, targets, cfg);
    if (!rep.converged || !rep.frozen_edge_groups.empty()) {
      ++failures;
    }
    // re-evaluate from scratch rather than trusting the solver's residual
    const auto again = group_averages(grid, rep.y);
    for (std::size_t i = 0; i < again.size(); ++i) {
      worst_residual = std::max(worst_residual, std::abs(again[i] - targets.a[i]));
      worst_y = std::max(worst_y, std::abs(rep.y.y[i] - ystar[i]));
    }
  }
  r.observed = {worst_residual, worst_y, static_cast<double>(failures)};
  r.bound = {1e-9, std::numeric_limits<double>::infinity(), 0.0};
  r.passed = worst_residual <= 1e-9 && failures == 0;
  return r;
}

// ---------------------------------------------------------------- small sets

CheckResult check_small_set_reference(int n, double tau) {
  CheckResult r = start("small-set-reference", fmt("n=%d tau=%g grid=32 per nodal interval", n, tau));
  const NodalGrid grid = build_grid(n);
  const double measured = small_set_measure(chebyshev_roots(grid), 1.0, tau, 32);
  const double exact = chebyshev_small_set_measure(n, tau);
  const double limit = (4.0 / kPi) * std::asin(std::min(tau, 1.0));
  r.observed = {std::abs(measured - exact), measured, exact, limit};
  r.bound = {1e-9};
  r.passed = std::abs(measured - exact) <= 1e-9;
  return r;
}

CheckResult check_small_set_perturbed(int n, std::uint64_t seed, int draws) {
  CheckResult r = start("small-set-perturbed", fmt("n=%d |y| <= 0.05 draws=%d seed=%llu", n, draws,
                                                   static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, kDefaultTCap);
  auto rng = make_rng(seed, 51, static_cast<std::uint64_t>(n));
  double worst = 0.0;  // max of measure / (10 tau)
  for (int d = 0; d < draws; ++d) {
    const PerturbedRoots roots = perturbed_roots(grid, PerturbationVector{random_y(maps, 0.05, rng), kDefaultTCap});
    for (double tau : {0.05, 0.1}) {
      worst = std::max(worst, small_set_measure(roots, 1.0, tau, 32) / (10.0 * tau));
    }
  }
  r.observed = {worst};
  r.bound = {1.0};
  r.passed = worst <= 1.0;
  return r;
}

CheckResult check_level_density(int n, std::uint64_t seed, int draws) {
  CheckResult r = start("level-density", fmt("n=%d |y| <= 0.05 draws=%d seed=%llu", n, draws,
                                             static_cast<unsigned long long>(seed)));
  if (!group_degree(n)) {
    return needs_groups(std::move(r), n);
  }
  if (n < 101) {
    return skip(std::move(r), "density bound is a large-n statement; checked for n >= 101");
  }
  const NodalGrid grid = build_grid(n);
  const GroupMaps maps(grid, kDefaultTCap);
  auto rng = make_rng(seed, 52, static_cast<std::uint64_t>(n));
  double worst = 1.0;
  for (int d = 0; d < draws; ++d) {
    const PerturbedRoots roots = perturbed_roots(grid, PerturbationVector{random_y(maps, 0.05, rng), kDefaultTCap});
    for (int q = 0; q < 4; ++q) {
      const DensityRow row = level_densities(roots, 1.0, -1.0 + 0.5 * q, -0.5 + 0.5 * q, 32);
      worst = std::min({worst, row.positive, row.negative});
    }
  }
  r.observed = {worst};
  r.bound = {0.2};
  r.passed = worst >= 0.2;
  return r;
}

// ---------------------------------------------------------------- obstructions

CheckResult check_four_point_obstruction(double epsilon, int exponent_cap) {
  const double threshold = (-3.0 + std::sqrt(17.0)) / 4.0;
  if (!(epsilon > 0.0) || !(epsilon < threshold)) {
    throw InvalidInput(fmt("four-point check needs 0 < epsilon < (-3+√17)/4 = %.6f, got %g", threshold,
                           epsilon));
  }
  if (exponent_cap < 0) {
    throw InvalidInput("four-point exponent cap must be non-negative");
  }
  CheckResult r = start("four-point", fmt("epsilon=%g cap=%d", epsilon, exponent_cap));
  const double s = -1.0 - epsilon;
  const double t = -1.0;
  const double u = 1.0;
  const double v = 1.0 + epsilon;
  const double base = epsilon * (2.0 + 2.0 * epsilon) / (1.0 - epsilon);
  const GaussRule rule = gauss_legendre(exponent_cap / 2 + 2);
  double worst = 0.0;  // max of min(left, right) / (lambda middle)
  double max_lambda = 0.0;
  int tuples = 0;
  int failures = 0;
  for (int a = 0; a <= exponent_cap; ++a) {
    for (int b = 0; a + b <= exponent_cap; ++b) {
      for (int c = 0; a + b + c <= exponent_cap; ++c) {
        for (int d = 0; a + b + c + d <= exponent_cap; ++d) {
          auto dp = [&](double x) {
            return std::pow(x - s, a) * std::pow(x - t, b) * std::pow(x - u, c) * std::pow(x - v, d);
          };
          // p' has one sign on each piece, so these are exact increments of p
          const double left = std::abs(integrate_rule(rule, dp, s, t));
          const double middle = std::abs(integrate_rule(rule, dp, t, u));
          const double right = std::abs(integrate_rule(rule, dp, u, v));
          const double lambda = std::min(0.99, std::pow(base, 0.5 * (a + b + c + d)));
          max_lambda = std::max(max_lambda, lambda);
          const double ratio = std::min(left, right) / (lambda * middle);
          worst = std::max(worst, ratio);
          ++tuples;
          if (ratio > 1.0) {
            ++failures;
          }
        }
      }
    }
  }
  r.observed = {worst, static_cast<double>(failures), static_cast<double>(tuples), max_lambda};
  r.bound = {1.0, 0.0};
  r.passed = failures == 0;
  return r;
}

std::vector<double> three_point_ratios(int n) {
  if (n < 2) {
    throw InvalidInput("three-point ratios need n >= 2");
  }
  // F(a) = int_0^1 (1+x)^a (1-x)^(n-a) dx; the [-1,0] integral equals F(n-a)
  const GaussRule rule = gauss_legendre(std::max(160, n / 2 + 2));
  std::vector<double> F(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= n; ++a) {
    F[static_cast<std::size_t>(a)] = integrate_rule(
        rule, [&](double x) { return std::pow(1.0 + x, a) * std::pow(1.0 - x, n - a); }, 0.0, 1.0);
  }
  std::vector<double> rho;
  for (int a = 1; a < n; ++a) {
    rho.push_back(F[static_cast<std::size_t>(a)] / F[static_cast<std::size_t>(n - a)]);
  }
  return rho;
}

CheckResult check_three_point_density(int n, const std::vector<double>& ratio_targets) {
  if (n < 50) {
    throw InvalidInput("three-point density check needs n >= 50");
  }
  CheckResult r = start("three-point-density", fmt("n=%d a=1..%d targets=%zu", n, n - 1, ratio_targets.size()));
  const auto rho = three_point_ratios(n);
  bool increasing = true;
  for (std::size_t i = 1; i < rho.size(); ++i) {
    increasing = increasing && rho[i] > rho[i - 1];
  }
  double worst = 0.0;  // max over targets of the best relative miss
  for (double target : ratio_targets) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : rho) {
      best = std::min(best, std::abs(v - target) / target);
    }
    worst = std::max(worst, best);
  }
  r.observed = {worst, increasing ? 1.0 : 0.0, rho.front(), rho.back()};
  r.bound = {0.25, 1.0};
  r.passed = increasing && worst <= 0.25;
  return r;
}

// ---------------------------------------------------------------- suite

std::vector<CheckResult> run_check_suite(const SuiteConfig& cfg) {
  if (!cfg.only.empty() && !is_known_check(cfg.only)) {
    throw InvalidInput("unknown check id '" + cfg.only + "'");
  }
  for (int n : cfg.n_list) {
    if (n < 9) {
      throw InvalidInput("suite degrees must be at least 9, got " + std::to_string(n));
    }
  }
  if (cfg.draws < 1) {
    throw InvalidInput("need at least one random draw per configuration");
  }
  auto wanted = [&](const char* id) { return cfg.only.empty() || cfg.only == id; };
  const std::uint64_t seed = cfg.seed;
  const int draws = cfg.draws;
  std::vector<CheckResult> out;
  auto run = [&](const char* id, auto&& fn) {
    if (wanted(id)) {
      out.push_back(fn());
    }
  };

  for (int n : cfg.n_list) {
    run("nodal-length-upper", [&] { return check_nodal_length_upper(n); });
    run("nodal-length-bounds", [&] { return check_nodal_length_bounds(n); });
    run("nodal-length-monotone", [&] { return check_nodal_length_monotone(n); });
    run("nodal-length-growth", [&] { return check_nodal_length_growth(n); });
    run("nodal-distance-lower", [&] { return check_nodal_distance_lower(n); });
    run("nodal-distance-ratio", [&] { return check_nodal_distance_ratio(n); });
    run("node-area", [&] { return check_node_area(n); });
    run("node-square-average", [&] { return check_node_square_average(n); });
    run("adjacent-cancellation", [&] { return check_adjacent_cancellation(n); });
    run("product-identity", [&] { return check_product_identity(n); });
  }
  run("erdos-grunwald", [&] { return check_erdos_grunwald(seed); });
  run("distortion-agreement", [&] { return check_distortion_agreement(seed, draws); });
  run("distortion-monotone", [&] { return check_distortion_monotone(seed, draws); });
  run("distortion-sign", [&] { return check_distortion_sign(seed, draws); });
  run("distortion-cubic-decay", [&] { return check_distortion_cubic_decay(seed, draws); });
  run("distortion-near-field", [&] { return check_distortion_near_field(seed, draws); });
  run("distortion-intermediate", [&] { return check_distortion_intermediate(seed, draws); });
  run("minmax-cubic", [&] { return check_minmax_cubic(cfg.minmax_resolution); });
  for (int n : cfg.n_list) {
    run("sup-stability", [&] { return check_sup_stability(n, {0.001, 0.05}, seed, draws); });
    run("internal-slope", [&] { return check_internal_slope(n); });
    run("f-covering", [&] { return check_f_covering(n, 0.05); });
    run("coupling", [&] { return check_coupling(n, cfg.t_cap, seed, draws); });
    run("exterior-smallness", [&] { return check_exterior_smallness(n, cfg.t_cap, seed, draws); });
    run("average-bound", [&] { return check_average_bound(n, cfg.t_cap, seed, draws); });
    run("target-recovery", [&] { return check_target_recovery(n, cfg.t_cap, seed, draws); });
    run("small-set-reference", [&] { return check_small_set_reference(n, 0.5); });
    run("small-set-perturbed", [&] { return check_small_set_perturbed(n, seed, draws); });
    run("level-density", [&] { return check_level_density(n, seed, draws); });
  }
  run("four-point", [&] { return check_four_point_obstruction(cfg.four_point_epsilon, cfg.four_point_cap); });
  run("three-point-density", [&] {
    std::vector<double> targets;
    for (int i = 0; i <= 20; ++i) {
      targets.push_back(std::pow(10.0, -1.0 + 0.1 * i));
    }
    return check_three_point_density(cfg.three_point_n, targets);
  });
  return out;
}

}  // namespace critpoly
