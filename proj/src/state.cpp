#include "substrate/state.hpp"

#include <algorithm>

#include "substrate/error.hpp"
#include "substrate/validation.hpp"

namespace substrate {

namespace {

const std::set<ArtifactId> kEmptyIds;
const std::vector<ArtifactId> kEmptyIdList;

[[noreturn]] void malformed(const std::string& message) {
  throw SubstrateError(ErrorCode::kMalformedInput, message);
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kDeclareRole: return "declare_role";
    case EventKind::kCommitAdditive: return "commit_additive";
    case EventKind::kCommitSuperseding: return "commit_superseding";
    case EventKind::kMarkHistorical: return "mark_historical";
  }
  return "declare_role";
}

EventKind parse_event_kind(std::string_view text) {
  if (text == "declare_role") return EventKind::kDeclareRole;
  if (text == "commit_additive") return EventKind::kCommitAdditive;
  if (text == "commit_superseding") return EventKind::kCommitSuperseding;
  if (text == "mark_historical") return EventKind::kMarkHistorical;
  malformed("unknown event kind '" + std::string(text) + "'");
}

SubstrateEvent SubstrateEvent::declare(Role role) {
  return {0, EventKind::kDeclareRole, std::move(role), false};
}
SubstrateEvent SubstrateEvent::additive(ArtifactRecord draft, bool allow_conflict) {
  return {0, EventKind::kCommitAdditive, std::move(draft), allow_conflict};
}
SubstrateEvent SubstrateEvent::superseding(ArtifactRecord draft, bool allow_conflict) {
  return {0, EventKind::kCommitSuperseding, std::move(draft), allow_conflict};
}
SubstrateEvent SubstrateEvent::historical(ArtifactId id) {
  return {0, EventKind::kMarkHistorical, std::move(id), false};
}

Document to_document(const SubstrateEvent& event) {
  Document doc{{"seq", event.seq}, {"kind", std::string(to_string(event.kind))}};
  switch (event.kind) {
    case EventKind::kDeclareRole: {
      const auto& role = std::get<Role>(event.body);
      doc["body"] = {{"name", role.name},
                     {"authority_mode", std::string(to_string(role.authority_mode))}};
      break;
    }
    case EventKind::kCommitAdditive:
    case EventKind::kCommitSuperseding:
      doc["body"] = to_document(std::get<ArtifactRecord>(event.body));
      break;
    case EventKind::kMarkHistorical:
      doc["body"] = {{"artifact_id", std::get<ArtifactId>(event.body).str()}};
      break;
  }
  if (event.allow_conflict) doc["allow_conflict"] = true;
  return doc;
}

SubstrateEvent event_from_document(const Document& doc) {
  if (!doc.is_object() || !doc.contains("seq") || !doc.contains("kind") || !doc.contains("body")) {
    malformed("event must be an object with seq, kind and body");
  }
  if (!doc["seq"].is_number_unsigned()) malformed("event seq must be a positive integer");
  if (!doc["kind"].is_string()) malformed("event kind must be a string");
  SubstrateEvent event;
  event.seq = doc["seq"].get<std::uint64_t>();
  event.kind = parse_event_kind(doc["kind"].get<std::string>());
  const Document& body = doc["body"];
  if (!body.is_object()) malformed("event body must be an object");
  switch (event.kind) {
    case EventKind::kDeclareRole:
      if (!body.contains("name") || !body["name"].is_string() ||
          !body.contains("authority_mode") || !body["authority_mode"].is_string()) {
        malformed("role declaration needs name and authority_mode");
      }
      event.body = Role{body["name"].get<std::string>(),
                        parse_authority_mode(body["authority_mode"].get<std::string>())};
      break;
    case EventKind::kCommitAdditive:
    case EventKind::kCommitSuperseding:
      event.body = record_from_document(body);
      break;
    case EventKind::kMarkHistorical:
      if (!body.contains("artifact_id") || !body["artifact_id"].is_string()) {
        malformed("mark_historical needs artifact_id");
      }
      event.body = ArtifactId::parse(body["artifact_id"].get<std::string>());
      break;
  }
  if (doc.contains("allow_conflict")) {
    if (!doc["allow_conflict"].is_boolean()) malformed("allow_conflict must be a boolean");
    event.allow_conflict = doc["allow_conflict"].get<bool>();
  }
  return event;
}

const ArtifactRecord* StoreState::find(const ArtifactId& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::optional<AuthorityMode> StoreState::role_mode(std::string_view role) const {
  auto it = roles_.find(role);
  if (it == roles_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t StoreState::max_version(std::string_view family) const {
  auto it = family_versions_.find(family);
  return it == family_versions_.end() ? 0 : it->second;
}

ArtifactId StoreState::next_id(std::string_view family) const {
  return ArtifactId{std::string(family), max_version(family) + 1};
}

const std::set<ArtifactId>& StoreState::active(const RoleScope& key) const {
  auto it = active_.find(key);
  return it == active_.end() ? kEmptyIds : it->second;
}

const std::set<ArtifactId>& StoreState::members(const RoleScope& key) const {
  auto it = members_.find(key);
  return it == members_.end() ? kEmptyIds : it->second;
}

const std::set<ArtifactId>& StoreState::active_in_scope(std::string_view scope) const {
  auto it = active_by_scope_.find(scope);
  return it == active_by_scope_.end() ? kEmptyIds : it->second;
}

const std::vector<ArtifactId>& StoreState::consumers(const ArtifactId& id) const {
  auto it = consumers_.find(id);
  return it == consumers_.end() ? kEmptyIdList : it->second;
}

std::optional<ArtifactId> StoreState::superseded_by(const ArtifactId& id) const {
  auto it = superseded_by_.find(id);
  if (it == superseded_by_.end()) return std::nullopt;
  return it->second;
}

std::optional<CommitResult> StoreState::apply(const SubstrateEvent& event) {
  if (event.seq != last_seq_ + 1) {
    throw SubstrateError(ErrorCode::kCorruptLog,
                         "expected seq " + std::to_string(last_seq_ + 1) + ", got " +
                             std::to_string(event.seq));
  }
  std::optional<CommitResult> result;
  switch (event.kind) {
    case EventKind::kDeclareRole:
      apply_declare(std::get<Role>(event.body));
      break;
    case EventKind::kCommitAdditive:
    case EventKind::kCommitSuperseding:
      result = apply_commit(event);
      break;
    case EventKind::kMarkHistorical:
      apply_historical(std::get<ArtifactId>(event.body));
      break;
  }
  last_seq_ = event.seq;
  return result;
}

void StoreState::apply_declare(const Role& role) {
  if (!is_valid_name(role.name)) {
    throw SubstrateError(ErrorCode::kValidationFailed, "invalid role name '" + role.name + "'");
  }
  auto [it, inserted] = roles_.emplace(role.name, role.authority_mode);
  if (!inserted && it->second != role.authority_mode) {
    throw SubstrateError(ErrorCode::kAuthorityModeConflict,
                         "role '" + role.name + "' already declared as " +
                             std::string(to_string(it->second)));
  }
}

std::optional<CommitResult> StoreState::apply_commit(const SubstrateEvent& event) {
  const auto& draft = std::get<ArtifactRecord>(event.body);
  const bool superseding = event.kind == EventKind::kCommitSuperseding;
  const auto& targets = draft.lineage.supersedes;

  if (!superseding && !targets.empty()) {
    throw SubstrateError(ErrorCode::kValidationFailed,
                         "additive commit of " + draft.id.str() + " lists supersedes targets",
                         {"lineage.supersedes: additive-with-supersedes"});
  }
  if (superseding) {
    if (targets.empty()) {
      throw SubstrateError(ErrorCode::kValidationFailed,
                           "superseding commit of " + draft.id.str() + " names no targets",
                           {"lineage.supersedes: superseding-without-targets"});
    }
    for (const auto& target : targets) {
      const ArtifactRecord* prior = find(target);
      if (prior == nullptr) {
        throw SubstrateError(ErrorCode::kUnknownArtifact, "unknown artifact " + target.str());
      }
      if (prior->status != Status::kActive) {
        throw SubstrateError(ErrorCode::kSupersedeInactive,
                             target.str() + " is " + std::string(to_string(prior->status)));
      }
    }
  }

  ValidationResult validation = validate_record(draft, *this);
  if (!validation.ok()) {
    std::vector<std::string> details;
    for (const auto& v : validation.violations) details.push_back(v.str());
    std::string message = "draft " + draft.id.str() + " failed validation: " + details.front();
    throw SubstrateError(ErrorCode::kValidationFailed, std::move(message), std::move(details));
  }

  RoleScope key{draft.role, draft.scope};
  if (*role_mode(draft.role) == AuthorityMode::kSingleActive && !event.allow_conflict) {
    for (const auto& current : active(key)) {
      if (std::find(targets.begin(), targets.end(), current) == targets.end()) {
        throw SubstrateError(ErrorCode::kAuthorityViolation,
                             "role '" + draft.role + "' in scope '" + draft.scope +
                                 "' already has active " + current.str());
      }
    }
  }

  // Checks are done; mutate.
  CommitResult result{draft.id, targets};
  for (const auto& target : targets) {
    set_status(target, Status::kSuperseded);
    superseded_by_.emplace(target, draft.id);
  }
  by_id_.emplace(draft.id, records_.size());
  records_.push_back(draft);
  records_.back().status = Status::kActive;
  family_versions_[draft.id.family] = draft.id.version;
  active_[key].insert(draft.id);
  members_[key].insert(draft.id);
  active_by_scope_[draft.scope].insert(draft.id);
  for (const auto& dep : draft.depends_on) consumers_[dep.id].push_back(draft.id);
  return result;
}

void StoreState::apply_historical(const ArtifactId& id) {
  const ArtifactRecord* record = find(id);
  if (record == nullptr) {
    throw SubstrateError(ErrorCode::kUnknownArtifact, "unknown artifact " + id.str());
  }
  if (record->status != Status::kActive) {
    throw SubstrateError(ErrorCode::kAlreadyInactive,
                         id.str() + " is " + std::string(to_string(record->status)));
  }
  set_status(id, Status::kHistorical);
}

void StoreState::set_status(const ArtifactId& id, Status status) {
  ArtifactRecord& record = records_[by_id_.at(id)];
  record.status = status;
  RoleScope key{record.role, record.scope};
  auto it = active_.find(key);
  it->second.erase(id);
  if (it->second.empty()) active_.erase(it);
  auto scope_it = active_by_scope_.find(record.scope);
  scope_it->second.erase(id);
  if (scope_it->second.empty()) active_by_scope_.erase(scope_it);
}

Document StoreState::dump() const {
  Document roles = Document::object();
  for (const auto& [name, mode] : roles_) roles[name] = std::string(to_string(mode));
  Document records = Document::array();
  for (const auto& record : records_) records.push_back(to_document(record));
  Document index = Document::array();
  for (const auto& [key, ids] : active_) {
    Document list = Document::array();
    for (const auto& id : ids) list.push_back(id.str());
    index.push_back({{"role", key.role}, {"scope", key.scope}, {"artifact_ids", std::move(list)}});
  }
  return Document{{"last_seq", last_seq_},
                  {"roles", std::move(roles)},
                  {"records", std::move(records)},
                  {"active_index", std::move(index)}};
}

std::string StoreState::dump_canonical() const { return canonical_json(dump()); }

StoreState replay(std::span<const SubstrateEvent> log) {
  StoreState state;
  for (const auto& event : log) {
    try {
      state.apply(event);
    } catch (const SubstrateError& e) {
      throw SubstrateError(ErrorCode::kCorruptLog,
                           "log event seq " + std::to_string(event.seq) +
                               " (position " + std::to_string(state.last_seq() + 1) +
                               "): " + e.what());
    }
  }
  return state;
}

}  // namespace substrate
