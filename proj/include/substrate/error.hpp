#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace substrate {

enum class ErrorCode {
  kValidationFailed,
  kAuthorityViolation,
  kAuthorityModeConflict,
  kUnknownArtifact,
  kUnknownRole,
  kSupersedeInactive,
  kAlreadyInactive,
  kNonFiniteNumber,
  kCorruptLog,
  kPlanMismatch,
  kStaleDependency,
  kBadParameters,
  kMalformedInput,
  kLockHeld,
  kIo,
};

// Stable snake_case name used in CLI error output.
std::string_view error_code_name(ErrorCode code);

class SubstrateError : public std::runtime_error {
 public:
  SubstrateError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  SubstrateError(ErrorCode code, const std::string& message,
                 std::vector<std::string> details)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  // Extra machine-readable lines, e.g. individual validation violations.
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace substrate
