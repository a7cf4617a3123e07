#pragma once

// Shared domain types for the artifact substrate.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "substrate/canonical.hpp"

namespace substrate {

// Family names, role names and payload types share this alphabet.
bool is_valid_name(std::string_view name);

// Lowercases ASCII and maps '-' and ' ' to '_'. Does not validate.
std::string normalize_name(std::string_view name);

// Identity of one committed artifact instance, rendered "family:vN".
struct ArtifactId {
  std::string family;
  std::uint32_t version = 0;

  std::string str() const;
  static ArtifactId parse(std::string_view text);
  static std::optional<ArtifactId> try_parse(std::string_view text);

  bool valid() const { return is_valid_name(family) && version >= 1; }

  // Family name first, then numeric version (criteria:v2 < criteria:v10).
  friend auto operator<=>(const ArtifactId&, const ArtifactId&) = default;
};

enum class AuthorityMode { kSingleActive, kMultiActive };
enum class Status { kActive, kSuperseded, kHistorical };
enum class EdgeType { kConsumes, kDerivedFrom };

std::string_view to_string(AuthorityMode mode);
std::string_view to_string(Status status);
std::string_view to_string(EdgeType edge);
AuthorityMode parse_authority_mode(std::string_view text);
Status parse_status(std::string_view text);
EdgeType parse_edge_type(std::string_view text);

struct Role {
  std::string name;
  AuthorityMode authority_mode = AuthorityMode::kSingleActive;

  friend bool operator==(const Role&, const Role&) = default;
};

struct Dependency {
  ArtifactId id;
  EdgeType edge = EdgeType::kConsumes;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct Lineage {
  std::string produced_by;
  std::vector<ArtifactId> supersedes;

  friend bool operator==(const Lineage&, const Lineage&) = default;
};

struct Payload {
  std::string payload_type;
  Document content = Document::object();
  std::string content_hash;

  // Builds a payload with its hash filled in.
  static Payload make(std::string payload_type, Document content);
  bool hash_verifies() const;

  friend bool operator==(const Payload&, const Payload&) = default;
};

// One artifact instance. Drafts use the same type with status Active; the
// store only ever changes the status of a committed record.
struct ArtifactRecord {
  ArtifactId id;
  std::string role;
  std::string scope;
  Status status = Status::kActive;
  std::vector<Dependency> depends_on;
  Lineage lineage;
  Payload payload;

  friend bool operator==(const ArtifactRecord&, const ArtifactRecord&) = default;
};

// Canonical record document: artifact_id, family_id, role, scope, status,
// depends_on, edge_types, produced_by, supersedes, payload_type, payload,
// payload_hash.
Document to_document(const ArtifactRecord& record);

// Strict inverse of to_document. The stored payload_hash is kept verbatim so
// validation can detect tampering. Throws SubstrateError(kMalformedInput).
ArtifactRecord record_from_document(const Document& doc);

// Defaults applied when reading loosely specified draft documents.
struct DraftDefaults {
  std::string scope;
  std::string produced_by;
};

// Lenient reader for hand-written drafts: scope/produced_by fall back to
// `defaults`, edge_types default to consumes, status defaults to active,
// "type" is accepted for payload_type, missing payload_hash is computed.
ArtifactRecord draft_from_document(const Document& doc, const DraftDefaults& defaults);

}  // namespace substrate
