#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "substrate/state.hpp"

namespace substrate {

// Answer to "what is authoritative for (role, scope)". ids are in canonical
// order: one id for kSingle, zero for kNoActive, >= 1 for kSet and >= 2 for
// kConflict.
struct Resolution {
  enum class Kind { kSingle, kSet, kNoActive, kConflict };

  Kind kind = Kind::kNoActive;
  std::vector<ArtifactId> ids;

  static Resolution single(ArtifactId id) { return {Kind::kSingle, {std::move(id)}}; }
  static Resolution none() { return {Kind::kNoActive, {}}; }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

std::string_view to_string(Resolution::Kind kind);
Resolution::Kind parse_resolution_kind(std::string_view text);

// {"kind": "...", "artifact_ids": [...]}
Document to_document(const Resolution& resolution);
Resolution resolution_from_document(const Document& doc);
// "single criteria:v2", "set a:v1 b:v1", "none", "conflict x:v1 x:v2".
std::string render_text(const Resolution& resolution);

// Throws SubstrateError(kUnknownRole) for an undeclared role. A SingleActive
// role with two or more Active records resolves to kConflict, never kSingle.
Resolution resolve_active(const StoreState& state, std::string_view role, std::string_view scope);

// Returns the record regardless of status. Throws kUnknownArtifact.
const ArtifactRecord& resolve_pinned(const StoreState& state, const ArtifactId& id);

// One resolution per declared role that has at least one record in `scope`.
std::map<std::string, Resolution> active_snapshot(const StoreState& state, std::string_view scope);

}  // namespace substrate
