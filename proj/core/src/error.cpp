#include "posthoc/error.hpp"

namespace posthoc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotAForest: return "NotAForest";
    case ErrorCode::HNotInRange: return "HNotInRange";
    case ErrorCode::FamilyTooLargeForEnumeration: return "FamilyTooLargeForEnumeration";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorCode::MissingZeta: return "MissingZeta";
    case ErrorCode::AlphaTooLarge: return "AlphaTooLarge";
    case ErrorCode::SNotDividingM: return "SNotDividingM";
    case ErrorCode::QNotCompatible: return "QNotCompatible";
    case ErrorCode::MaskRequiredForOracle: return "MaskRequiredForOracle";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace posthoc
