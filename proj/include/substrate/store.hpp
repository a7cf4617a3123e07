#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "substrate/state.hpp"

namespace substrate {

// Notification emitted after a superseding commit.
struct Invalidation {
  ArtifactId trigger;
  std::vector<ArtifactId> displaced;
};

// Single-writer artifact store. All mutation enters as an event that is
// validated against the current state, applied, appended to the in-memory
// log and handed to the sink (if any). Readers take immutable snapshots and
// may use them from any thread.
class Store {
 public:
  using EventSink = std::function<void(const SubstrateEvent&)>;
  using InvalidationListener = std::function<void(const Invalidation&)>;

  Store() = default;
  // Rebuilds the store by replaying an existing log.
  explicit Store(std::vector<SubstrateEvent> log);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Called with every newly appended event, e.g. to persist it. A throwing
  // sink propagates; the in-memory state already includes the event.
  void set_sink(EventSink sink) { sink_ = std::move(sink); }
  void subscribe(InvalidationListener listener);

  // Idempotent for an identical declaration (no event is appended).
  void declare_role(const Role& role);
  ArtifactId commit_additive(ArtifactRecord draft, bool allow_conflict = false);
  CommitResult commit_superseding(ArtifactRecord draft, bool allow_conflict = false);
  void mark_historical(const ArtifactId& id);

  // Applies every event to a scratch copy first; either all events land or
  // none do. Seqs are assigned here.
  std::vector<std::optional<CommitResult>> commit_batch(std::vector<SubstrateEvent> events);

  std::optional<ArtifactRecord> get_artifact(const ArtifactId& id) const;
  ArtifactId next_id(std::string_view family) const;

  // Writer-side view; only valid on the writer thread between commits.
  const StoreState& state() const { return state_; }
  std::shared_ptr<const StoreState> snapshot() const;
  const std::vector<SubstrateEvent>& events() const { return log_; }

 private:
  std::optional<CommitResult> append(SubstrateEvent event);
  void publish(const SubstrateEvent& event, const std::optional<CommitResult>& result);

  mutable std::mutex mutex_;
  StoreState state_;
  std::vector<SubstrateEvent> log_;
  mutable std::shared_ptr<const StoreState> cached_snapshot_;
  EventSink sink_;
  std::vector<InvalidationListener> listeners_;
};

}  // namespace substrate
