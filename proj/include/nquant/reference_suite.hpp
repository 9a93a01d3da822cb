#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nquant/scalar.hpp"

namespace nquant {

enum class FixtureStatus { Pass, Fail, Skipped };

std::string to_string(FixtureStatus status);

struct FixtureOutcome {
  std::string id;
  std::string expected;
  std::string computed;
  FixtureStatus status = FixtureStatus::Fail;
  /// Why a fixture was skipped, e.g. "precision".
  std::string skip_reason;
};

struct SuiteReport {
  std::vector<FixtureOutcome> fixtures;
  bool all_pass() const;
  std::size_t count(FixtureStatus status) const;
};

/// Every published value for the uniform and geometric distributions on
/// {1..6}, the reciprocal and natural-number families, and the inverse
/// thresholds. The n = 300 reciprocal value needs at least 512 bits and is
/// skipped below that.
SuiteReport run_reference_suite(Bits precision = kDefaultPrecision);

/// True when `value` rounds to the decimal `quoted` at its last printed
/// place, i.e. |value - quoted| <= half a unit there.
bool matches_quoted(const Scalar& value, std::string_view quoted);

}  // namespace nquant
