#pragma once

#include <vector>

namespace critpoly {

/// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree <= 2m-1.
struct GaussRule {
  std::vector<double> nodes;  // ascending
  std::vector<double> weights;
};

GaussRule gauss_legendre(int m);

/// Integral of fn over [a,b] with the given rule mapped affinely.
template <class Fn>
double integrate_rule(const GaussRule& rule, Fn&& fn, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

/// Composite rule: [a,b] split into `panels` equal pieces.
template <class Fn>
double integrate_composite(const GaussRule& rule, Fn&& fn, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == panels ? b : lo + h;
    sum += integrate_rule(rule, fn, lo, hi);
  }
  return sum;
}

}  // namespace critpoly
