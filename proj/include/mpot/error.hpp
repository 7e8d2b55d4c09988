#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpot {

enum class ErrorKind {
  LengthMismatch,
  NegativeMass,
  ZeroTotal,
  EmptyInput,
  DegenerateBounds,
  InvalidArgument,
  ParseError,
  UnsupportedFormat,
  IoError,
  IndexOutOfRange,
  Overflow,
  UnbalancedTotals,
  ShapeMismatch,
  InvalidPlan,
  InconsistentFlows,
  NumericalUnderflow,
  ZeroOptimum,
  Infeasible,
  TooLarge,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception; `kind()` identifies the failed precondition.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mpot
