#pragma once

#include <span>
#include <vector>

namespace critpoly {

/// A polynomial on [-1,1] stored by its coefficients in the Chebyshev basis
/// T_0..T_d. All coefficients are finite; construction rejects anything else.
class ChebSeries {
 public:
  ChebSeries();  // the zero polynomial, coeffs = {0}
  explicit ChebSeries(std::vector<double> coeffs);

  /// The single basis polynomial T_n.
  static ChebSeries basis(int n);
  static ChebSeries constant(double value);

  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Clenshaw evaluation. Does not validate x; see cheb_eval for the checked entry point.
  [[nodiscard]] double operator()(double x) const;

  /// Drops trailing coefficients whose magnitude is below rel_tol * max|c_k|.
  [[nodiscard]] ChebSeries trimmed(double rel_tol = kDropTolerance) const;

  [[nodiscard]] ChebSeries derivative() const;
  [[nodiscard]] ChebSeries scaled(double factor) const;

  static constexpr double kDropTolerance = 1e-14;

 private:
  std::vector<double> coeffs_;
};

struct EvalDiagnostics {
  bool extrapolated = false;
};

/// Checked evaluation: throws InvalidInput for non-finite x. Points outside
/// [-1,1] are evaluated but flagged in `diag` when it is supplied.
double cheb_eval(const ChebSeries& series, double x, EvalDiagnostics* diag = nullptr);

/// The d+1 extreme points cos(pi j / d), j = 0..d (descending in x).
std::vector<double> extreme_points(int d);

/// Interpolates samples taken at extreme_points(values.size() - 1), in that order.
/// Direct O(d^2) cosine-sum transform.
ChebSeries cheb_interpolate(std::span<const double> values);

/// Antiderivative Q with Q' = series and Q(anchor_x) = anchor_value.
ChebSeries cheb_antiderivative(const ChebSeries& series, double anchor_x, double anchor_value);

/// Exact integral of the series over [a, b], -1 <= a <= b <= 1.
double integrate_over(const ChebSeries& series, double a, double b);

/// Product of two series, formed by interpolating pointwise products.
ChebSeries multiply(const ChebSeries& lhs, const ChebSeries& rhs);

/// Converts monomial coefficients m_0 + m_1 x + ... into the Chebyshev basis.
ChebSeries from_monomial(std::span<const double> monomial);

}  // namespace critpoly
