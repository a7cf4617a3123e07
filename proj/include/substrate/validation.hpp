#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "substrate/artifact.hpp"
#include "substrate/state.hpp"

namespace substrate {

struct Violation {
  std::string field;
  std::string rule;
  std::string detail;

  std::string str() const;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const;
};

// Checks a draft against the record invariants and the given snapshot.
// Total: never throws, every broken rule is reported.
//
// Rules: invalid-family, invalid-version, version-not-dense, duplicate-id,
// invalid-role, undeclared-role, empty-scope, draft-not-active,
// invalid-payload-type, non-finite-number, payload-hash-mismatch,
// unknown-dependency, duplicate-dependency, unknown-supersession-target,
// duplicate-supersession-target, supersession-role-mismatch,
// supersession-scope-mismatch.
ValidationResult validate_record(const ArtifactRecord& draft, const StoreState& view);

}  // namespace substrate
