#include "symnmf/errors.hpp"

namespace symnmf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NumericalError: return "NumericalError";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::PivotLimitExceeded: return "PivotLimitExceeded";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::RankTooLarge: return "RankTooLarge";
    case ErrorKind::DegenerateFactors: return "DegenerateFactors";
    case ErrorKind::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorKind::InvalidProbabilities: return "InvalidProbabilities";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateScale: return "DegenerateScale";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace symnmf
