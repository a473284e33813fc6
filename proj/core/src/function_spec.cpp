#include "critpoly/function_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "critpoly/errors.hpp"

namespace critpoly {

namespace {

double parse_number(std::string_view s, std::string_view context) {
  while (!s.empty() && s.front() == ' ') {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidInput(std::string(context) + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<double> split_numbers(std::string_view s, std::string_view context) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(parse_number(s.substr(start, end - start), context));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

double horner(const std::vector<double>& m, double t) {
  double acc = 0.0;
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    acc = acc * t + *it;
  }
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& m) {
  std::vector<double> d;
  for (std::size_t j = 1; j < m.size(); ++j) {
    d.push_back(static_cast<double>(j) * m[j]);
  }
  return d;
}

// max |p| on [lo, hi]: dense sampling, then golden-section refinement of the best cell
double poly_abs_max(const std::vector<double>& m, double lo, double hi) {
  if (m.empty()) {
    return 0.0;
  }
  constexpr int kSamples = 8192;
  const double h = (hi - lo) / kSamples;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = std::abs(horner(m, lo + i * h));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * h;
  double b = lo + std::min(kSamples, best + 1) * h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (std::abs(horner(m, c)) > std::abs(horner(m, d))) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::max(best_val, std::abs(horner(m, 0.5 * (a + b))));
}

}  // namespace

FunctionSpec FunctionSpec::parse(std::string_view text) {
  FunctionSpec f;
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view tail = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_args = colon != std::string_view::npos;
  if (head == "abs" && !has_args) {
    f.kind_ = FunctionKind::Abs;
  } else if (head == "sign" && !has_args) {
    f.kind_ = FunctionKind::Sign;
  } else if (head == "relu" && !has_args) {
    f.kind_ = FunctionKind::Relu;
  } else if (head == "sin" && has_args) {
    f.kind_ = FunctionKind::Sin;
    f.k_ = parse_number(tail, "sin frequency");
    if (f.k_ == 0.0) {
      throw InvalidInput("sin frequency must be nonzero");
    }
  } else if (head == "poly" && has_args) {
    f.kind_ = FunctionKind::Poly;
    f.poly_ = split_numbers(tail, "poly coefficients");
  } else {
    throw InvalidInput("unknown function '" + std::string(text) +
                       "' (expected abs, sign, relu, sin:<k> or poly:<c0>,<c1>,...)");
  }
  f.lipschitz_ = f.domain_lipschitz();
  return f;
}

FunctionSpec FunctionSpec::piecewise_linear(std::vector<std::pair<double, double>> knots, double alpha,
                                            double beta) {
  if (knots.size() < 2) {
    throw InvalidInput("piecewise-linear function needs at least two knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second)) {
      throw InvalidInput("piecewise-linear knots must be finite");
    }
    if (i > 0 && !(knots[i - 1].first < knots[i].first)) {
      throw InvalidInput("piecewise-linear knots must be strictly increasing in x");
    }
  }
  FunctionSpec f;
  f.kind_ = FunctionKind::PiecewiseLinear;
  f.knots_ = std::move(knots);
  return f.on_interval(alpha, beta);
}

FunctionSpec FunctionSpec::on_interval(double alpha, double beta) const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < beta)) {
    throw InvalidInput("interval must satisfy alpha < beta");
  }
  if (kind_ == FunctionKind::PiecewiseLinear &&
      (knots_.front().first > alpha || knots_.back().first < beta)) {
    throw InvalidInput("piecewise-linear knots must span [" + format_number(alpha) + ", " +
                       format_number(beta) + "]");
  }
  FunctionSpec f = *this;
  f.alpha_ = alpha;
  f.beta_ = beta;
  f.lipschitz_ = f.domain_lipschitz() * f.half_width();
  return f;
}

FunctionSpec FunctionSpec::with_lipschitz(double bound) const {
  if (!(bound >= lipschitz_) || !std::isfinite(bound)) {
    throw InvalidInput("Lipschitz bound " + format_number(bound) + " is below the computed " +
                       format_number(lipschitz_));
  }
  FunctionSpec f = *this;
  f.lipschitz_ = bound;
  return f;
}

std::string FunctionSpec::name() const {
  std::string s;
  switch (kind_) {
    case FunctionKind::Abs:
      s = "abs";
      break;
    case FunctionKind::Sign:
      s = "sign";
      break;
    case FunctionKind::Relu:
      s = "relu";
      break;
    case FunctionKind::Sin:
      s = "sin:" + format_number(k_);
      break;
    case FunctionKind::Poly:
      s = "poly:";
      for (std::size_t i = 0; i < poly_.size(); ++i) {
        s += (i ? "," : "") + format_number(poly_[i]);
      }
      break;
    case FunctionKind::PiecewiseLinear:
      s = "knots:" + std::to_string(knots_.size());
      break;
  }
  return s;
}

double FunctionSpec::eval_domain(double t) const {
  switch (kind_) {
    case FunctionKind::Abs:
      return std::abs(t);
    case FunctionKind::Sign:
      return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    case FunctionKind::Relu:
      return std::max(t, 0.0);
    case FunctionKind::Sin:
      return std::sin(k_ * t);
    case FunctionKind::Poly:
      return horner(poly_, t);
    case FunctionKind::PiecewiseLinear: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                 [](double v, const auto& knot) { return v < knot.first; });
      if (it == knots_.begin()) {
        return knots_.front().second;
      }
      if (it == knots_.end()) {
        return knots_.back().second;
      }
      const auto& [x1, v1] = *it;
      const auto& [x0, v0] = *(it - 1);
      return v0 + (v1 - v0) * (t - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

double FunctionSpec::primitive_domain(double t) const {
  switch (kind_) {
    case FunctionKind::Abs:
      return 0.5 * t * std::abs(t);
    case FunctionKind::Sign:
      return std::abs(t);
    case FunctionKind::Relu:
      return t > 0.0 ? 0.5 * t * t : 0.0;
    case FunctionKind::Sin:
      return -std::cos(k_ * t) / k_;
    case FunctionKind::Poly: {
      double acc = 0.0;
      for (std::size_t j = poly_.size(); j-- > 0;) {
        acc = acc * t + poly_[j] / static_cast<double>(j + 1);
      }
      return acc * t;
    }
    case FunctionKind::PiecewiseLinear: {
      // trapezoids from the first knot up to t
      double acc = 0.0;
      for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto& [x0, v0] = knots_[i - 1];
        const auto& [x1, v1] = knots_[i];
        if (t <= x0) {
          break;
        }
        const double hi = std::min(t, x1);
        const double vhi = v0 + (v1 - v0) * (hi - x0) / (x1 - x0);
        acc += 0.5 * (v0 + vhi) * (hi - x0);
      }
      return acc;
    }
  }
  return 0.0;
}

double FunctionSpec::domain_lipschitz() const {
  switch (kind_) {
    case FunctionKind::Abs:
    case FunctionKind::Relu:
      return 1.0;
    case FunctionKind::Sign:
      return std::numeric_limits<double>::infinity();
    case FunctionKind::Sin:
      return std::abs(k_);
    case FunctionKind::Poly: {
      const auto d = poly_derivative(poly_);
      // golden refinement can stop a hair short of the true maximum
      return poly_abs_max(d, alpha_, beta_) * (1.0 + 1e-12);
    }
    case FunctionKind::PiecewiseLinear: {
      double best = 0.0;
      for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto& [x0, v0] = knots_[i - 1];
        const auto& [x1, v1] = knots_[i];
        if (x1 <= alpha_ || x0 >= beta_) {
          continue;
        }
        best = std::max(best, std::abs((v1 - v0) / (x1 - x0)));
      }
      return best;
    }
  }
  return 0.0;
}

double FunctionSpec::operator()(double x) const { return eval_domain(to_domain(x)); }

double FunctionSpec::integral(double a, double b) const {
  return (primitive_domain(to_domain(b)) - primitive_domain(to_domain(a))) / half_width();
}

double FunctionSpec::sup_norm() const {
  switch (kind_) {
    case FunctionKind::Abs:
      return std::max(std::abs(alpha_), std::abs(beta_));
    case FunctionKind::Sign:
      return 1.0;
    case FunctionKind::Relu:
      return std::max(0.0, beta_);
    case FunctionKind::Poly:
      return poly_abs_max(poly_, alpha_, beta_);
    case FunctionKind::PiecewiseLinear: {
      double best = std::max(std::abs(eval_domain(alpha_)), std::abs(eval_domain(beta_)));
      for (const auto& [x, v] : knots_) {
        if (x > alpha_ && x < beta_) {
          best = std::max(best, std::abs(v));
        }
      }
      return best;
    }
    case FunctionKind::Sin: {
      // |sin| reaches 1 iff some k t = pi/2 + j pi lies in the domain
      const double lo = std::min(k_ * alpha_, k_ * beta_);
      const double hi = std::max(k_ * alpha_, k_ * beta_);
      const double j = std::ceil((lo - 0.5 * std::numbers::pi) / std::numbers::pi);
      if (0.5 * std::numbers::pi + j * std::numbers::pi <= hi) {
        return 1.0;
      }
      return std::max(std::abs(std::sin(lo)), std::abs(std::sin(hi)));
    }
  }
  return 0.0;
}

std::vector<double> FunctionSpec::breakpoints() const {
  std::vector<double> out;
  auto add = [&](double t) {
    const double x = to_reference(t);
    if (x > -1.0 && x < 1.0) {
      out.push_back(x);
    }
  };
  switch (kind_) {
    case FunctionKind::Abs:
    case FunctionKind::Sign:
    case FunctionKind::Relu:
      add(0.0);
      break;
    case FunctionKind::PiecewiseLinear:
      for (const auto& knot : knots_) {
        add(knot.first);
      }
      break;
    default:
      break;
  }
  return out;
}

std::optional<ChebSeries> FunctionSpec::as_series() const {
  if (kind_ != FunctionKind::Poly) {
    return std::nullopt;
  }
  // q(x) = p(c + h x) with c the domain midpoint and h the half width
  const double h = half_width();
  const double c = alpha_ + h;
  std::vector<double> acc;
  for (std::size_t j = poly_.size(); j-- > 0;) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += c * acc[i];
      next[i + 1] += h * acc[i];
    }
    next[0] += poly_[j];
    acc = std::move(next);
  }
  return from_monomial(acc);
}

std::vector<std::pair<double, double>> read_knots_csv(std::istream& in) {
  std::vector<std::pair<double, double>> knots;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string_view s(line);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
      s.remove_suffix(1);
    }
    if (s.empty() || s.front() == '#') {
      continue;
    }
    const std::size_t comma = s.find(',');
    if (comma == std::string_view::npos) {
      throw InvalidInput("knots file: expected 'x,value' rows, got '" + std::string(s) + "'");
    }
    try {
      knots.emplace_back(parse_number(s.substr(0, comma), "knots file"),
                         parse_number(s.substr(comma + 1), "knots file"));
    } catch (const InvalidInput&) {
      if (!first) {
        throw;
      }
    }
    first = false;
  }
  return knots;
}

}  // namespace critpoly
