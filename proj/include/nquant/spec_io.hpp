#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nquant/distribution.hpp"
#include "nquant/quantization_result.hpp"

namespace nquant {

/// A distribution spec that does not parse or validate. `path` is a JSON
/// pointer-like location such as "$.masses[2]"; line and column are set for
/// syntax errors (1-based, 0 when unknown).
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string path, const std::string& message, int line = 0, int column = 0);

  const std::string& path() const { return path_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string path_;
  int line_;
  int column_;
};

/// Distribution spec JSON:
///   {"type": "finite", "points": ["1", "2"], "masses": ["1/2", "1/2"]}
///   {"type": "family", "name": "geometric_truncated", "m": 6, "x": "1/2"}
/// Values are strings ("p/q", integers, decimals) or JSON integers. Finite
/// specs may add "normalize": true, or "precision": bits to read the values
/// as floating data.
DiscreteDistribution parse_distribution_spec(std::string_view text);
DiscreteDistribution load_distribution_spec(const std::string& file);

std::string result_to_json(const QuantizationResult& result, int indent = 2);
std::string result_to_table(const QuantizationResult& result);

std::string error_curve_csv(const std::vector<QuantizationResult>& results);
std::string error_curve_json(const std::vector<QuantizationResult>& results, int indent = 2);

/// What result_to_json() emitted, read back. Floating values are taken from
/// the round-trip fields so they reproduce the working value.
struct ParsedResult {
  Index n = 0;
  bool exact = true;
  Bits precision_bits = kDefaultPrecision;
  Scalar distortion;
  std::vector<std::vector<Scalar>> codebooks;
};

ParsedResult parse_result_json(std::string_view text);

}  // namespace nquant
