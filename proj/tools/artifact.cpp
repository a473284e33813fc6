#include "artifact.hpp"

#include <charconv>
#include <cmath>

#include "critpoly/errors.hpp"

namespace critpoly::cli {

double Approximant::operator()(double t) const {
  return series((t - alpha) / (0.5 * (beta - alpha)) - 1.0);
}

nlohmann::json approximant_json(const ApproxResult& result, double alpha, double beta, const nlohmann::json& config,
                                std::uint64_t seed) {
  const auto c = result.approximant.coeffs();
  nlohmann::json doc;
  doc["degree"] = result.n;
  doc["approximant_degree"] = result.approximant.degree();
  doc["cheb_coeffs"] = std::vector<double>(c.begin(), c.end());
  doc["derivative_roots"] = result.derivative_roots.z;
  doc["interval"] = {alpha, beta};
  doc["scale"] = result.scale_factor;
  doc["anchor"] = result.anchor;
  doc["sup_error"] = result.sup_error;
  double worst = 0.0;
  for (double r : result.endpoint_residuals) {
    worst = std::max(worst, r);
  }
  doc["max_endpoint_residual"] = worst;
  doc["converged"] = result.solve.converged;
  doc["iterations"] = result.solve.iterations;
  doc["frozen_edge_groups"] = result.solve.frozen_edge_groups;
  doc["config"] = config;
  doc["seed"] = seed;
  return doc;
}

Approximant read_approximant(const nlohmann::json& doc) {
  try {
    Approximant out;
    out.series = ChebSeries(doc.at("cheb_coeffs").get<std::vector<double>>());
    if (doc.contains("interval")) {
      const auto iv = doc.at("interval").get<std::vector<double>>();
      if (iv.size() != 2 || !(iv[0] < iv[1])) {
        throw InvalidInput("approximant interval must be [alpha, beta] with alpha < beta");
      }
      out.alpha = iv[0];
      out.beta = iv[1];
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed approximant artifact: ") + e.what());
  }
}

Approximant read_approximant(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("approximant artifact is not JSON: ") + e.what());
  }
  return read_approximant(doc);
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace critpoly::cli
