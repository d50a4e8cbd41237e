#pragma once

#include <stdexcept>
#include <string>

namespace posthoc {

enum class ErrorCode {
  InvalidArgument,
  NotAForest,
  HNotInRange,
  FamilyTooLargeForEnumeration,
  ProblemTooLarge,
  MissingZeta,
  AlphaTooLarge,
  SNotDividingM,
  QNotCompatible,
  MaskRequiredForOracle,
  DomainError,
  Parse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception type; code()
// lets callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace posthoc
