#include "substrate/error.hpp"

namespace substrate {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidationFailed: return "validation_failed";
    case ErrorCode::kAuthorityViolation: return "authority_violation";
    case ErrorCode::kAuthorityModeConflict: return "authority_mode_conflict";
    case ErrorCode::kUnknownArtifact: return "unknown_artifact";
    case ErrorCode::kUnknownRole: return "unknown_role";
    case ErrorCode::kSupersedeInactive: return "supersede_inactive";
    case ErrorCode::kAlreadyInactive: return "already_inactive";
    case ErrorCode::kNonFiniteNumber: return "non_finite_number";
    case ErrorCode::kCorruptLog: return "corrupt_log";
    case ErrorCode::kPlanMismatch: return "plan_mismatch";
    case ErrorCode::kStaleDependency: return "stale_dependency";
    case ErrorCode::kBadParameters: return "bad_parameters";
    case ErrorCode::kMalformedInput: return "malformed_input";
    case ErrorCode::kLockHeld: return "lock_held";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace substrate
