#include "critpoly/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "critpoly/errors.hpp"

namespace critpoly {

GaussRule gauss_legendre(int m) {
  if (m < 1) {
    throw InvalidInput("gauss_legendre: need at least one node");
  }
  const auto um = static_cast<std::size_t>(m);
  GaussRule rule{std::vector<double>(um), std::vector<double>(um)};
  const int half = (m + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    // Newton on P_m from the Tricomi initial guess
    double x = std::cos(std::numbers::pi * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // recompute derivative at the converged node for the weight
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= m; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i - 1);
    const auto hi = um - static_cast<std::size_t>(i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (m % 2 == 1) {
    rule.nodes[um / 2] = 0.0;
  }
  return rule;
}

}  // namespace critpoly
