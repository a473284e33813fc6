#include "critpoly/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "critpoly/errors.hpp"

namespace critpoly {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(what) + ": non-finite value");
    }
  }
}

// Multiplies a Chebyshev series by x, using x T_0 = T_1 and
// x T_k = (T_{k+1} + T_{k-1}) / 2.
std::vector<double> times_x(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == 0) {
      out[1] += c[0];
    } else {
      out[k + 1] += 0.5 * c[k];
      out[k - 1] += 0.5 * c[k];
    }
  }
  return out;
}

}  // namespace

ChebSeries::ChebSeries() : coeffs_{0.0} {}

ChebSeries::ChebSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    coeffs_.push_back(0.0);
  }
  require_finite(coeffs_, "ChebSeries");
}

ChebSeries ChebSeries::basis(int n) {
  if (n < 0) {
    throw InvalidInput("ChebSeries::basis: negative degree");
  }
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = 1.0;
  return ChebSeries(std::move(c));
}

ChebSeries ChebSeries::constant(double value) { return ChebSeries(std::vector<double>{value}); }

double ChebSeries::operator()(double x) const {
  double b1 = 0.0;
  double b2 = 0.0;
  const double two_x = 2.0 * x;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = two_x * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + x * b1 - b2;
}

ChebSeries ChebSeries::trimmed(double rel_tol) const {
  double scale = 0.0;
  for (double c : coeffs_) {
    scale = std::max(scale, std::abs(c));
  }
  std::size_t keep = coeffs_.size();
  while (keep > 1 && std::abs(coeffs_[keep - 1]) <= rel_tol * scale) {
    --keep;
  }
  return ChebSeries(std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(keep)));
}

ChebSeries ChebSeries::derivative() const {
  const int d = degree();
  if (d == 0) {
    return ChebSeries();
  }
  // out[d] stays zero and serves as d_{k+1} for the first step
  std::vector<double> out(static_cast<std::size_t>(d) + 2, 0.0);
  for (int k = d; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    out[uk - 1] = out[uk + 1] + 2.0 * k * coeffs_[uk];
  }
  out.pop_back();
  out[0] *= 0.5;
  out.pop_back();
  return ChebSeries(std::move(out));
}

ChebSeries ChebSeries::scaled(double factor) const {
  std::vector<double> out(coeffs_);
  for (double& c : out) {
    c *= factor;
  }
  return ChebSeries(std::move(out));
}

double cheb_eval(const ChebSeries& series, double x, EvalDiagnostics* diag) {
  if (!std::isfinite(x)) {
    throw InvalidInput("cheb_eval: non-finite evaluation point");
  }
  if (diag != nullptr) {
    diag->extrapolated = std::abs(x) > 1.0;
  }
  return series(x);
}

std::vector<double> extreme_points(int d) {
  if (d < 1) {
    throw InvalidInput("extreme_points: degree must be at least 1");
  }
  std::vector<double> x(static_cast<std::size_t>(d) + 1);
  // sin form keeps the points exactly antisymmetric and x = 0 exact for even d
  for (int j = 0; j <= d; ++j) {
    x[static_cast<std::size_t>(j)] = std::sin(std::numbers::pi * (d - 2.0 * j) / (2.0 * d));
  }
  return x;
}

ChebSeries cheb_interpolate(std::span<const double> values) {
  if (values.size() < 2) {
    throw InvalidInput("cheb_interpolate: need at least 2 samples");
  }
  require_finite(values, "cheb_interpolate");
  const std::size_t d = values.size() - 1;
  const std::size_t period = 2 * d;
  std::vector<double> cos_table(period);
  for (std::size_t m = 0; m < period; ++m) {
    cos_table[m] = std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(d));
  }
  std::vector<double> c(d + 1, 0.0);
  for (std::size_t k = 0; k <= d; ++k) {
    double sum = 0.5 * (values[0] + ((k % 2 == 0) ? values[d] : -values[d]));
    std::size_t idx = 0;
    for (std::size_t j = 1; j < d; ++j) {
      idx += k;
      if (idx >= period) {
        idx %= period;
      }
      sum += values[j] * cos_table[idx];
    }
    c[k] = 2.0 * sum / static_cast<double>(d);
  }
  c[0] *= 0.5;
  c[d] *= 0.5;
  return ChebSeries(std::move(c));
}

ChebSeries cheb_antiderivative(const ChebSeries& series, double anchor_x, double anchor_value) {
  if (!std::isfinite(anchor_x) || !std::isfinite(anchor_value)) {
    throw InvalidInput("cheb_antiderivative: non-finite anchor");
  }
  const auto c = series.coeffs();
  const std::size_t d = c.size() - 1;
  auto coef = [&](std::size_t k) { return k <= d ? c[k] : 0.0; };
  std::vector<double> b(d + 2, 0.0);
  b[1] = coef(0) - 0.5 * coef(2);
  for (std::size_t k = 2; k <= d + 1; ++k) {
    b[k] = (coef(k - 1) - coef(k + 1)) / (2.0 * static_cast<double>(k));
  }
  ChebSeries q(b);
  b[0] = anchor_value - q(anchor_x);
  return ChebSeries(std::move(b));
}

double integrate_over(const ChebSeries& series, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidInput("integrate_over: non-finite bounds");
  }
  if (a > b) {
    throw InvalidInput("integrate_over: lower bound exceeds upper bound");
  }
  const ChebSeries q = cheb_antiderivative(series, 0.0, 0.0);
  return q(b) - q(a);
}

ChebSeries multiply(const ChebSeries& lhs, const ChebSeries& rhs) {
  const int d = std::max(1, lhs.degree() + rhs.degree());
  const auto x = extreme_points(d);
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    v[j] = lhs(x[j]) * rhs(x[j]);
  }
  return cheb_interpolate(v);
}

ChebSeries from_monomial(std::span<const double> monomial) {
  require_finite(monomial, "from_monomial");
  if (monomial.empty()) {
    return ChebSeries();
  }
  std::vector<double> acc{monomial.back()};
  for (std::size_t k = monomial.size() - 1; k-- > 0;) {
    acc = times_x(acc);
    acc[0] += monomial[k];
  }
  return ChebSeries(std::move(acc));
}

}  // namespace critpoly
