#include "substrate/store.hpp"

#include "substrate/error.hpp"

namespace substrate {

Store::Store(std::vector<SubstrateEvent> log) : state_(replay(log)), log_(std::move(log)) {}

void Store::subscribe(InvalidationListener listener) {
  std::lock_guard lock(mutex_);
  listeners_.push_back(std::move(listener));
}

void Store::declare_role(const Role& role) {
  {
    std::lock_guard lock(mutex_);
    if (auto mode = state_.role_mode(role.name); mode && *mode == role.authority_mode) return;
  }
  append(SubstrateEvent::declare(role));
}

ArtifactId Store::commit_additive(ArtifactRecord draft, bool allow_conflict) {
  return append(SubstrateEvent::additive(std::move(draft), allow_conflict))->id;
}

CommitResult Store::commit_superseding(ArtifactRecord draft, bool allow_conflict) {
  return *append(SubstrateEvent::superseding(std::move(draft), allow_conflict));
}

void Store::mark_historical(const ArtifactId& id) { append(SubstrateEvent::historical(id)); }

std::optional<CommitResult> Store::append(SubstrateEvent event) {
  std::optional<CommitResult> result;
  {
    std::lock_guard lock(mutex_);
    event.seq = state_.last_seq() + 1;
    result = state_.apply(event);
    log_.push_back(event);
    cached_snapshot_.reset();
  }
  publish(log_.back(), result);
  return result;
}

std::vector<std::optional<CommitResult>> Store::commit_batch(std::vector<SubstrateEvent> events) {
  std::vector<std::optional<CommitResult>> results;
  {
    std::lock_guard lock(mutex_);
    StoreState scratch = state_;
    for (auto& event : events) {
      event.seq = scratch.last_seq() + 1;
      results.push_back(scratch.apply(event));
    }
    state_ = std::move(scratch);
    log_.insert(log_.end(), events.begin(), events.end());
    cached_snapshot_.reset();
  }
  for (std::size_t i = 0; i < events.size(); ++i) publish(events[i], results[i]);
  return results;
}

void Store::publish(const SubstrateEvent& event, const std::optional<CommitResult>& result) {
  if (sink_) sink_(event);
  if (result && !result->displaced.empty()) {
    Invalidation note{result->id, result->displaced};
    for (const auto& listener : listeners_) listener(note);
  }
}

std::optional<ArtifactRecord> Store::get_artifact(const ArtifactId& id) const {
  std::lock_guard lock(mutex_);
  const ArtifactRecord* record = state_.find(id);
  if (record == nullptr) return std::nullopt;
  return *record;
}

ArtifactId Store::next_id(std::string_view family) const {
  std::lock_guard lock(mutex_);
  return state_.next_id(family);
}

std::shared_ptr<const StoreState> Store::snapshot() const {
  std::lock_guard lock(mutex_);
  if (!cached_snapshot_) cached_snapshot_ = std::make_shared<const StoreState>(state_);
  return cached_snapshot_;
}

}  // namespace substrate
