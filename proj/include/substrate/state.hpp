#pragma once

// Event-sourced store state. StoreState is the deterministic fold of a
// sequence of SubstrateEvents; every index in it is derived and can be
// rebuilt by replaying the log.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "substrate/artifact.hpp"

namespace substrate {

struct RoleScope {
  std::string role;
  std::string scope;

  friend auto operator<=>(const RoleScope&, const RoleScope&) = default;
};

enum class EventKind { kDeclareRole, kCommitAdditive, kCommitSuperseding, kMarkHistorical };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

// One append-only log entry. The body is a Role for kDeclareRole, an
// ArtifactRecord draft for the two commit kinds and an ArtifactId for
// kMarkHistorical. allow_conflict is the explicit override that lets a commit
// leave two Active records in a SingleActive (role, scope).
struct SubstrateEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kDeclareRole;
  std::variant<Role, ArtifactRecord, ArtifactId> body;
  bool allow_conflict = false;

  static SubstrateEvent declare(Role role);
  static SubstrateEvent additive(ArtifactRecord draft, bool allow_conflict = false);
  static SubstrateEvent superseding(ArtifactRecord draft, bool allow_conflict = false);
  static SubstrateEvent historical(ArtifactId id);

  friend bool operator==(const SubstrateEvent&, const SubstrateEvent&) = default;
};

Document to_document(const SubstrateEvent& event);
SubstrateEvent event_from_document(const Document& doc);

// Result of applying one commit event.
struct CommitResult {
  ArtifactId id;
  std::vector<ArtifactId> displaced;

  friend bool operator==(const CommitResult&, const CommitResult&) = default;
};

class StoreState {
 public:
  // Applies one event. All checks run before any mutation, so a throwing
  // apply leaves the state untouched. event.seq must equal last_seq() + 1.
  // Returns the commit result for commit events, nullopt otherwise.
  std::optional<CommitResult> apply(const SubstrateEvent& event);

  const ArtifactRecord* find(const ArtifactId& id) const;
  bool contains(const ArtifactId& id) const { return find(id) != nullptr; }

  std::optional<AuthorityMode> role_mode(std::string_view role) const;
  const std::map<std::string, AuthorityMode, std::less<>>& roles() const { return roles_; }

  // Records in commit order.
  const std::vector<ArtifactRecord>& records() const { return records_; }
  std::uint32_t max_version(std::string_view family) const;
  ArtifactId next_id(std::string_view family) const;

  // Active ids for one (role, scope); empty if none.
  const std::set<ArtifactId>& active(const RoleScope& key) const;
  const std::map<RoleScope, std::set<ArtifactId>>& active_index() const { return active_; }
  // Every record, any status, committed under (role, scope).
  const std::set<ArtifactId>& members(const RoleScope& key) const;
  const std::map<RoleScope, std::set<ArtifactId>>& member_index() const { return members_; }
  const std::set<ArtifactId>& active_in_scope(std::string_view scope) const;

  // Records whose depends_on lists `id`, in commit order.
  const std::vector<ArtifactId>& consumers(const ArtifactId& id) const;
  std::optional<ArtifactId> superseded_by(const ArtifactId& id) const;

  std::uint64_t last_seq() const { return last_seq_; }

  // Canonical dump of records, statuses, roles and the active index.
  Document dump() const;
  std::string dump_canonical() const;

 private:
  std::optional<CommitResult> apply_commit(const SubstrateEvent& event);
  void apply_declare(const Role& role);
  void apply_historical(const ArtifactId& id);
  void set_status(const ArtifactId& id, Status status);

  std::uint64_t last_seq_ = 0;
  std::map<std::string, AuthorityMode, std::less<>> roles_;
  std::vector<ArtifactRecord> records_;
  std::map<ArtifactId, std::size_t> by_id_;
  std::map<std::string, std::uint32_t, std::less<>> family_versions_;
  std::map<RoleScope, std::set<ArtifactId>> active_;
  std::map<RoleScope, std::set<ArtifactId>> members_;
  std::map<std::string, std::set<ArtifactId>, std::less<>> active_by_scope_;
  std::map<ArtifactId, std::vector<ArtifactId>> consumers_;
  std::map<ArtifactId, ArtifactId> superseded_by_;
};

// Full replay. Throws SubstrateError(kCorruptLog) naming the first offending
// seq if the log is not dense from 1 or an event does not apply.
StoreState replay(std::span<const SubstrateEvent> log);

}  // namespace substrate
