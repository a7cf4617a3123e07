#include "substrate/resolver.hpp"

#include "substrate/error.hpp"

namespace substrate {

std::string_view to_string(Resolution::Kind kind) {
  switch (kind) {
    case Resolution::Kind::kSingle: return "single";
    case Resolution::Kind::kSet: return "set";
    case Resolution::Kind::kNoActive: return "none";
    case Resolution::Kind::kConflict: return "conflict";
  }
  return "none";
}

Resolution::Kind parse_resolution_kind(std::string_view text) {
  if (text == "single") return Resolution::Kind::kSingle;
  if (text == "set") return Resolution::Kind::kSet;
  if (text == "none") return Resolution::Kind::kNoActive;
  if (text == "conflict") return Resolution::Kind::kConflict;
  throw SubstrateError(ErrorCode::kMalformedInput,
                       "unknown resolution kind '" + std::string(text) + "'");
}

Document to_document(const Resolution& resolution) {
  Document ids = Document::array();
  for (const auto& id : resolution.ids) ids.push_back(id.str());
  return {{"kind", std::string(to_string(resolution.kind))}, {"artifact_ids", std::move(ids)}};
}

Resolution resolution_from_document(const Document& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("artifact_ids") ||
      !doc["kind"].is_string() || !doc["artifact_ids"].is_array()) {
    throw SubstrateError(ErrorCode::kMalformedInput, "resolution needs kind and artifact_ids");
  }
  Resolution r;
  r.kind = parse_resolution_kind(doc["kind"].get<std::string>());
  for (const auto& id : doc["artifact_ids"]) {
    if (!id.is_string()) throw SubstrateError(ErrorCode::kMalformedInput, "ids must be strings");
    r.ids.push_back(ArtifactId::parse(id.get<std::string>()));
  }
  return r;
}

std::string render_text(const Resolution& resolution) {
  std::string out(to_string(resolution.kind));
  for (const auto& id : resolution.ids) out += " " + id.str();
  return out;
}

Resolution resolve_active(const StoreState& state, std::string_view role, std::string_view scope) {
  auto mode = state.role_mode(role);
  if (!mode) throw SubstrateError(ErrorCode::kUnknownRole, "undeclared role '" + std::string(role) + "'");
  const auto& ids = state.active(RoleScope{std::string(role), std::string(scope)});
  if (ids.empty()) return Resolution::none();
  std::vector<ArtifactId> sorted(ids.begin(), ids.end());
  if (*mode == AuthorityMode::kMultiActive) return {Resolution::Kind::kSet, std::move(sorted)};
  if (sorted.size() == 1) return {Resolution::Kind::kSingle, std::move(sorted)};
  return {Resolution::Kind::kConflict, std::move(sorted)};
}

const ArtifactRecord& resolve_pinned(const StoreState& state, const ArtifactId& id) {
  const ArtifactRecord* record = state.find(id);
  if (record == nullptr) throw SubstrateError(ErrorCode::kUnknownArtifact, "unknown artifact " + id.str());
  return *record;
}

std::map<std::string, Resolution> active_snapshot(const StoreState& state, std::string_view scope) {
  std::map<std::string, Resolution> out;
  for (const auto& [key, members] : state.member_index()) {
    if (key.scope != scope || members.empty()) continue;
    out.emplace(key.role, resolve_active(state, key.role, key.scope));
  }
  return out;
}

}  // namespace substrate
