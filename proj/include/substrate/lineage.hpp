#pragma once

// Lineage relations, invalidation and regeneration planning.
//
// Invalidation is computed on artifact-level dependency edges (both edge
// types propagate the same way) and then lifted to families to order the
// rebuild. Planning never commits anything; apply_regeneration does, using
// payloads produced elsewhere.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "substrate/store.hpp"

namespace substrate {

struct LineageView {
  ArtifactId id;
  std::string produced_by;
  std::set<ArtifactId> consumed_by;
  std::vector<ArtifactId> supersedes;
  std::optional<ArtifactId> superseded_by;

  friend bool operator==(const LineageView&, const LineageView&) = default;
};

LineageView lineage(const StoreState& state, const ArtifactId& id);
Document to_document(const LineageView& view);
std::string render_text(const LineageView& view);

// Every record that reaches `id` through depends_on edges, any status,
// excluding `id` itself. Throws kUnknownArtifact.
std::set<ArtifactId> transitive_dependents(const StoreState& state, const ArtifactId& id);

struct RegenerationPlan {
  ArtifactId trigger;
  std::set<ArtifactId> invalidated;
  std::vector<std::string> rebuild_order;
  std::set<ArtifactId> preserved;
  // Active dependents outside the trigger's scope, lifted-family cycles.
  std::vector<std::string> warnings;

  friend bool operator==(const RegenerationPlan&, const RegenerationPlan&) = default;
};

// trigger is a committed superseding artifact; its supersedes list is the
// displaced set. Throws kUnknownArtifact.
RegenerationPlan plan_regeneration(const StoreState& state, const ArtifactId& trigger);

// {"trigger", "invalidated", "rebuild_order", "preserved"} plus "warnings"
// when there are any.
Document to_document(const RegenerationPlan& plan);
RegenerationPlan plan_from_document(const Document& doc);
std::string render_text(const RegenerationPlan& plan);

// New content for one regenerated family. Unset fields are taken from the
// invalidated record; unset depends_on rewires each old dependency to the
// current Active end of its supersession chain.
struct RegenerationDraft {
  Document payload;
  std::optional<std::string> payload_type;
  std::optional<std::vector<Dependency>> depends_on;
  std::optional<std::string> produced_by;
};

// Commits one superseding version per plan family in rebuild_order and
// returns the new ids in that order. Atomic.
// Throws kPlanMismatch if drafts do not cover exactly the plan's families or
// the plan no longer matches the store, kStaleDependency if a draft consumes
// a non-Active record.
std::vector<ArtifactId> apply_regeneration(Store& store, const RegenerationPlan& plan,
                                           const std::map<std::string, RegenerationDraft>& drafts);

}  // namespace substrate
