#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symnmf {

enum class ErrorKind {
  DimensionMismatch,
  NotSymmetric,
  NumericalError,
  ZeroMatrix,
  PivotLimitExceeded,
  NotPositiveDefinite,
  RankTooLarge,
  DegenerateFactors,
  NonPositiveLambda,
  InvalidProbabilities,
  LengthMismatch,
  DegenerateScale,
  InvalidArgument,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library. what() is "<Kind>: <detail>" so the
// kind name survives into CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symnmf
