#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include <json.hpp>

#include "critpoly/chebyshev.hpp"
#include "critpoly/pipeline.hpp"

namespace critpoly::cli {

/// A polynomial approximant read back from its JSON artifact.
struct Approximant {
  ChebSeries series;  // reference coordinates
  double alpha = -1.0;
  double beta = 1.0;

  /// Value at a point t of [alpha, beta].
  [[nodiscard]] double operator()(double t) const;
};

/// JSON artifact for an approximation run; `config` is embedded verbatim.
nlohmann::json approximant_json(const ApproxResult& result, double alpha, double beta, const nlohmann::json& config,
                                std::uint64_t seed);

Approximant read_approximant(const nlohmann::json& doc);
Approximant read_approximant(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace critpoly::cli
