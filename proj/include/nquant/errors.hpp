#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nquant {

enum class ErrorCode {
  DuplicatePoint,
  NonPositiveMass,
  MassSumMismatch,
  IndexOutOfRange,
  EmptyRangeMass,
  EmptyCellCollapse,
  HorizonUnstable,
  Infeasible,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class QuantError : public std::runtime_error {
 public:
  QuantError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nquant
