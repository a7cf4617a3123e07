#include "substrate/artifact.hpp"

#include <charconv>

#include "substrate/error.hpp"

namespace substrate {

namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw SubstrateError(ErrorCode::kMalformedInput, message);
}

const Document& require(const Document& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Document& doc, const char* key) {
  const Document& value = require(doc, key);
  if (!value.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return value.get<std::string>();
}

ArtifactId parse_id_field(const Document& value, const char* key) {
  if (!value.is_string()) malformed(std::string("field '") + key + "' must hold id strings");
  auto id = ArtifactId::try_parse(value.get<std::string>());
  if (!id) malformed("malformed artifact id '" + value.get<std::string>() + "'");
  return *id;
}

std::vector<ArtifactId> parse_id_list(const Document& value, const char* key) {
  if (!value.is_array()) malformed(std::string("field '") + key + "' must be a list");
  std::vector<ArtifactId> ids;
  for (const auto& item : value) ids.push_back(parse_id_field(item, key));
  return ids;
}

std::vector<Dependency> parse_dependencies(const Document& doc, bool edge_types_required) {
  std::vector<ArtifactId> ids =
      doc.contains("depends_on") ? parse_id_list(doc["depends_on"], "depends_on")
                                 : std::vector<ArtifactId>{};
  std::vector<EdgeType> edges;
  if (doc.contains("edge_types")) {
    const Document& raw = doc["edge_types"];
    if (!raw.is_array()) malformed("field 'edge_types' must be a list");
    for (const auto& e : raw) {
      if (!e.is_string()) malformed("edge types must be strings");
      edges.push_back(parse_edge_type(e.get<std::string>()));
    }
    if (edges.size() != ids.size()) malformed("edge_types and depends_on differ in length");
  } else if (edge_types_required) {
    malformed("missing field 'edge_types'");
  } else {
    edges.assign(ids.size(), EdgeType::kConsumes);
  }
  std::vector<Dependency> deps;
  deps.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) deps.push_back({ids[i], edges[i]});
  return deps;
}

}  // namespace

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c == '-' || c == ' ') {
      out.push_back('_');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string ArtifactId::str() const { return family + ":v" + std::to_string(version); }

std::optional<ArtifactId> ArtifactId::try_parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view family = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  if (!is_valid_name(family) || rest.size() < 2 || rest[0] != 'v') return std::nullopt;
  std::string_view digits = rest.substr(1);
  // Canonical rendering has no leading zeros.
  if (digits[0] == '0') return std::nullopt;
  std::uint32_t version = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), version);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return ArtifactId{std::string(family), version};
}

ArtifactId ArtifactId::parse(std::string_view text) {
  auto id = try_parse(text);
  if (!id) malformed("malformed artifact id '" + std::string(text) + "'");
  return *id;
}

std::string_view to_string(AuthorityMode mode) {
  return mode == AuthorityMode::kSingleActive ? "single_active" : "multi_active";
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kActive: return "active";
    case Status::kSuperseded: return "superseded";
    case Status::kHistorical: return "historical";
  }
  return "active";
}

std::string_view to_string(EdgeType edge) {
  return edge == EdgeType::kConsumes ? "consumes" : "derived_from";
}

AuthorityMode parse_authority_mode(std::string_view text) {
  if (text == "single_active" || text == "single") return AuthorityMode::kSingleActive;
  if (text == "multi_active" || text == "multi") return AuthorityMode::kMultiActive;
  malformed("unknown authority mode '" + std::string(text) + "'");
}

Status parse_status(std::string_view text) {
  if (text == "active") return Status::kActive;
  if (text == "superseded") return Status::kSuperseded;
  if (text == "historical") return Status::kHistorical;
  malformed("unknown status '" + std::string(text) + "'");
}

EdgeType parse_edge_type(std::string_view text) {
  if (text == "consumes") return EdgeType::kConsumes;
  if (text == "derived_from") return EdgeType::kDerivedFrom;
  malformed("unknown edge type '" + std::string(text) + "'");
}

Payload Payload::make(std::string payload_type, Document content) {
  Payload p;
  p.payload_type = std::move(payload_type);
  p.content_hash = canonical_hash(content);
  p.content = std::move(content);
  return p;
}

bool Payload::hash_verifies() const {
  try {
    return canonical_hash(content) == content_hash;
  } catch (const SubstrateError&) {
    return false;
  }
}

Document to_document(const ArtifactRecord& record) {
  Document deps = Document::array();
  Document edges = Document::array();
  for (const auto& d : record.depends_on) {
    deps.push_back(d.id.str());
    edges.push_back(std::string(to_string(d.edge)));
  }
  Document supersedes = Document::array();
  for (const auto& id : record.lineage.supersedes) supersedes.push_back(id.str());
  return Document{
      {"artifact_id", record.id.str()},
      {"family_id", record.id.family},
      {"role", record.role},
      {"scope", record.scope},
      {"status", std::string(to_string(record.status))},
      {"depends_on", std::move(deps)},
      {"edge_types", std::move(edges)},
      {"produced_by", record.lineage.produced_by},
      {"supersedes", std::move(supersedes)},
      {"payload_type", record.payload.payload_type},
      {"payload", record.payload.content},
      {"payload_hash", record.payload.content_hash},
  };
}

ArtifactRecord record_from_document(const Document& doc) {
  if (!doc.is_object()) malformed("artifact record must be an object");
  ArtifactRecord record;
  record.id = parse_id_field(require(doc, "artifact_id"), "artifact_id");
  if (require_string(doc, "family_id") != record.id.family) {
    malformed("family_id does not match artifact_id");
  }
  record.role = require_string(doc, "role");
  record.scope = require_string(doc, "scope");
  record.status = parse_status(require_string(doc, "status"));
  require(doc, "depends_on");
  record.depends_on = parse_dependencies(doc, true);
  record.lineage.produced_by = require_string(doc, "produced_by");
  record.lineage.supersedes = parse_id_list(require(doc, "supersedes"), "supersedes");
  record.payload.payload_type = require_string(doc, "payload_type");
  record.payload.content = require(doc, "payload");
  record.payload.content_hash = require_string(doc, "payload_hash");
  return record;
}

ArtifactRecord draft_from_document(const Document& doc, const DraftDefaults& defaults) {
  if (!doc.is_object()) malformed("draft must be an object");
  ArtifactRecord draft;
  draft.id = parse_id_field(require(doc, "artifact_id"), "artifact_id");
  if (doc.contains("family_id") && doc["family_id"] != draft.id.family) {
    malformed("family_id does not match artifact_id");
  }
  draft.role = require_string(doc, "role");
  draft.scope = doc.contains("scope") ? require_string(doc, "scope") : defaults.scope;
  draft.status = doc.contains("status") ? parse_status(require_string(doc, "status"))
                                        : Status::kActive;
  draft.depends_on = parse_dependencies(doc, false);
  draft.lineage.produced_by =
      doc.contains("produced_by") ? require_string(doc, "produced_by") : defaults.produced_by;
  draft.lineage.supersedes = doc.contains("supersedes")
                                 ? parse_id_list(doc["supersedes"], "supersedes")
                                 : std::vector<ArtifactId>{};
  if (doc.contains("payload_type")) {
    draft.payload.payload_type = require_string(doc, "payload_type");
  } else if (doc.contains("type")) {
    draft.payload.payload_type = require_string(doc, "type");
  } else {
    draft.payload.payload_type = draft.role;
  }
  draft.payload.content = doc.contains("payload") ? doc["payload"] : Document::object();
  if (doc.contains("payload_hash")) {
    draft.payload.content_hash = require_string(doc, "payload_hash");
  } else {
    draft.payload.content_hash = canonical_hash(draft.payload.content);
  }
  return draft;
}

}  // namespace substrate
