#include "substrate/validation.hpp"

#include <algorithm>
#include <set>

#include "substrate/error.hpp"

namespace substrate {

std::string Violation::str() const {
  std::string out = field + ": " + rule;
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

bool ValidationResult::has(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

ValidationResult validate_record(const ArtifactRecord& draft, const StoreState& view) {
  ValidationResult result;
  auto add = [&](std::string field, std::string rule, std::string detail = {}) {
    result.violations.push_back({std::move(field), std::move(rule), std::move(detail)});
  };

  if (!is_valid_name(draft.id.family)) add("id.family", "invalid-family", draft.id.family);
  if (draft.id.version < 1) add("id.version", "invalid-version");
  if (view.contains(draft.id)) {
    add("id", "duplicate-id", draft.id.str());
  } else if (draft.id.version >= 1 && draft.id.version != view.max_version(draft.id.family) + 1) {
    add("id.version", "version-not-dense",
        "expected v" + std::to_string(view.max_version(draft.id.family) + 1));
  }

  if (!is_valid_name(draft.role)) {
    add("role", "invalid-role", draft.role);
  } else if (!view.role_mode(draft.role)) {
    add("role", "undeclared-role", draft.role);
  }
  if (draft.scope.empty()) add("scope", "empty-scope");
  if (draft.status != Status::kActive) add("status", "draft-not-active");

  if (!is_valid_name(draft.payload.payload_type)) {
    add("payload.payload_type", "invalid-payload-type", draft.payload.payload_type);
  }
  try {
    require_finite(draft.payload.content);
    if (canonical_hash(draft.payload.content) != draft.payload.content_hash) {
      add("payload.content_hash", "payload-hash-mismatch");
    }
  } catch (const SubstrateError&) {
    add("payload.content", "non-finite-number");
  }

  std::set<ArtifactId> seen_deps;
  for (const auto& dep : draft.depends_on) {
    if (!seen_deps.insert(dep.id).second) add("depends_on", "duplicate-dependency", dep.id.str());
    if (!view.contains(dep.id)) add("depends_on", "unknown-dependency", dep.id.str());
  }

  std::set<ArtifactId> seen_targets;
  for (const auto& target : draft.lineage.supersedes) {
    if (!seen_targets.insert(target).second) {
      add("lineage.supersedes", "duplicate-supersession-target", target.str());
    }
    const ArtifactRecord* prior = view.find(target);
    if (prior == nullptr) {
      add("lineage.supersedes", "unknown-supersession-target", target.str());
      continue;
    }
    if (prior->role != draft.role) {
      add("lineage.supersedes", "supersession-role-mismatch", target.str());
    }
    if (prior->scope != draft.scope) {
      add("lineage.supersedes", "supersession-scope-mismatch", target.str());
    }
  }
  return result;
}

}  // namespace substrate
