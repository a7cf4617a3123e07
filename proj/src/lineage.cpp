#include "substrate/lineage.hpp"

#include <algorithm>
#include <deque>

#include "substrate/error.hpp"
#include "substrate/resolver.hpp"

namespace substrate {

namespace {

template <typename Range>
std::string join_ids(std::string head, const Range& ids) {
  for (const auto& id : ids) head += " " + id.str();
  return head;
}

Document id_array(const auto& ids) {
  Document out = Document::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::set<ArtifactId> id_set_field(const Document& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw SubstrateError(ErrorCode::kMalformedInput, std::string("plan field '") + key + "' must be a list");
  }
  std::set<ArtifactId> out;
  for (const auto& v : doc[key]) {
    if (!v.is_string()) throw SubstrateError(ErrorCode::kMalformedInput, "ids must be strings");
    out.insert(ArtifactId::parse(v.get<std::string>()));
  }
  return out;
}

// Multi-source reverse reachability over the consumers index.
std::set<ArtifactId> reach_from(const StoreState& state, const std::vector<ArtifactId>& sources) {
  std::set<ArtifactId> seen;
  std::deque<ArtifactId> queue(sources.begin(), sources.end());
  while (!queue.empty()) {
    ArtifactId current = std::move(queue.front());
    queue.pop_front();
    for (const auto& consumer : state.consumers(current)) {
      if (seen.insert(consumer).second) queue.push_back(consumer);
    }
  }
  return seen;
}

// Kahn's algorithm on the family graph, smallest name first among ready
// families. Leftovers (only possible when lifting creates a cycle) are
// appended by name.
std::vector<std::string> order_families(const StoreState& state, const std::set<ArtifactId>& invalidated,
                                        std::vector<std::string>& warnings) {
  std::map<std::string, std::set<std::string>> successors;
  std::map<std::string, std::size_t> indegree;
  for (const auto& id : invalidated) indegree.emplace(id.family, 0);
  for (const auto& id : invalidated) {
    for (const auto& dep : state.find(id)->depends_on) {
      if (!invalidated.count(dep.id) || dep.id.family == id.family) continue;
      if (successors[dep.id.family].insert(id.family).second) ++indegree[id.family];
    }
  }
  std::set<std::string> ready;
  for (const auto& [family, deg] : indegree) {
    if (deg == 0) ready.insert(family);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string family = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(family);
    for (const auto& next : successors[family]) {
      if (--indegree[next] == 0) ready.insert(next);
    }
  }
  if (order.size() != indegree.size()) {
    std::vector<std::string> rest;
    for (const auto& [family, deg] : indegree) {
      if (std::find(order.begin(), order.end(), family) == order.end()) rest.push_back(family);
    }
    std::string note = "family-cycle:";
    for (const auto& f : rest) note += " " + f;
    warnings.push_back(note);
    order.insert(order.end(), rest.begin(), rest.end());
  }
  return order;
}

// Follows superseded_by links to the record that currently stands in for `id`.
ArtifactId current_of(const StoreState& state, ArtifactId id) {
  while (true) {
    const ArtifactRecord* record = state.find(id);
    if (record == nullptr || record->status != Status::kSuperseded) return id;
    id = *state.superseded_by(id);
  }
}

}  // namespace

LineageView lineage(const StoreState& state, const ArtifactId& id) {
  const ArtifactRecord& record = resolve_pinned(state, id);
  const auto& consumers = state.consumers(id);
  return LineageView{id, record.lineage.produced_by,
                     std::set<ArtifactId>(consumers.begin(), consumers.end()),
                     record.lineage.supersedes, state.superseded_by(id)};
}

Document to_document(const LineageView& view) {
  return {{"artifact_id", view.id.str()},
          {"produced_by", view.produced_by},
          {"consumed_by", id_array(view.consumed_by)},
          {"supersedes", id_array(view.supersedes)},
          {"superseded_by", view.superseded_by ? Document(view.superseded_by->str()) : Document()}};
}

std::string render_text(const LineageView& view) {
  std::string out = "artifact " + view.id.str() + "\n";
  out += "produced_by " + view.produced_by + "\n";
  out += join_ids("consumed_by", view.consumed_by) + "\n";
  out += join_ids("supersedes", view.supersedes) + "\n";
  out += "superseded_by";
  if (view.superseded_by) out += " " + view.superseded_by->str();
  out += "\n";
  return out;
}

std::set<ArtifactId> transitive_dependents(const StoreState& state, const ArtifactId& id) {
  resolve_pinned(state, id);
  std::set<ArtifactId> out = reach_from(state, {id});
  // Edges only point at earlier commits, so `id` cannot reach itself.
  out.erase(id);
  return out;
}

RegenerationPlan plan_regeneration(const StoreState& state, const ArtifactId& trigger) {
  const ArtifactRecord& trig = resolve_pinned(state, trigger);
  RegenerationPlan plan;
  plan.trigger = trigger;

  for (const auto& id : reach_from(state, trig.lineage.supersedes)) {
    const ArtifactRecord* record = state.find(id);
    if (id == trigger || record->status != Status::kActive) continue;
    if (record->scope == trig.scope) {
      plan.invalidated.insert(id);
    } else {
      plan.warnings.push_back("cross-scope dependent " + id.str() + " in scope " + record->scope);
    }
  }
  for (const auto& id : state.active_in_scope(trig.scope)) {
    if (id != trigger && !plan.invalidated.count(id)) plan.preserved.insert(id);
  }
  std::vector<std::string> cycle_warnings;
  plan.rebuild_order = order_families(state, plan.invalidated, cycle_warnings);
  plan.warnings.insert(plan.warnings.end(), cycle_warnings.begin(), cycle_warnings.end());
  return plan;
}

Document to_document(const RegenerationPlan& plan) {
  Document doc{{"trigger", plan.trigger.str()},
               {"invalidated", id_array(plan.invalidated)},
               {"rebuild_order", plan.rebuild_order},
               {"preserved", id_array(plan.preserved)}};
  if (!plan.warnings.empty()) doc["warnings"] = plan.warnings;
  return doc;
}

RegenerationPlan plan_from_document(const Document& doc) {
  if (!doc.is_object() || !doc.contains("trigger") || !doc["trigger"].is_string() ||
      !doc.contains("rebuild_order") || !doc["rebuild_order"].is_array()) {
    throw SubstrateError(ErrorCode::kMalformedInput, "plan needs trigger and rebuild_order");
  }
  RegenerationPlan plan;
  plan.trigger = ArtifactId::parse(doc["trigger"].get<std::string>());
  plan.invalidated = id_set_field(doc, "invalidated");
  plan.preserved = id_set_field(doc, "preserved");
  try {
    plan.rebuild_order = doc["rebuild_order"].get<std::vector<std::string>>();
    if (doc.contains("warnings")) plan.warnings = doc["warnings"].get<std::vector<std::string>>();
  } catch (const Document::exception& e) {
    throw SubstrateError(ErrorCode::kMalformedInput, e.what());
  }
  return plan;
}

std::string render_text(const RegenerationPlan& plan) {
  std::string out = "trigger " + plan.trigger.str() + "\n";
  out += join_ids("invalidated", plan.invalidated) + "\n";
  out += "rebuild_order";
  for (const auto& f : plan.rebuild_order) out += " " + f;
  out += "\n" + join_ids("preserved", plan.preserved) + "\n";
  for (const auto& w : plan.warnings) out += "warning " + w + "\n";
  return out;
}

std::vector<ArtifactId> apply_regeneration(Store& store, const RegenerationPlan& plan,
                                           const std::map<std::string, RegenerationDraft>& drafts) {
  std::set<std::string> planned(plan.rebuild_order.begin(), plan.rebuild_order.end());
  std::vector<std::string> mismatch;
  for (const auto& f : planned) {
    if (!drafts.count(f)) mismatch.push_back("missing draft for " + f);
  }
  for (const auto& [f, draft] : drafts) {
    if (!planned.count(f)) mismatch.push_back("unexpected draft for " + f);
  }
  if (!mismatch.empty()) {
    throw SubstrateError(ErrorCode::kPlanMismatch, mismatch.front(), mismatch);
  }

  StoreState working = *store.snapshot();
  std::map<std::string, std::vector<ArtifactId>> by_family;
  for (const auto& id : plan.invalidated) {
    const ArtifactRecord* record = working.find(id);
    if (record == nullptr || record->status != Status::kActive) {
      throw SubstrateError(ErrorCode::kPlanMismatch,
                           "plan is stale: " + id.str() + " is no longer active");
    }
    by_family[id.family].push_back(id);
  }
  for (const auto& family : plan.rebuild_order) {
    if (!by_family.count(family)) {
      throw SubstrateError(ErrorCode::kPlanMismatch, "plan family " + family + " has no invalidated artifact");
    }
  }

  std::vector<SubstrateEvent> events;
  std::vector<ArtifactId> created;
  for (const auto& family : plan.rebuild_order) {
    const auto& olds = by_family.at(family);
    const ArtifactRecord base = *working.find(olds.back());
    const RegenerationDraft& input = drafts.at(family);

    ArtifactRecord draft;
    draft.id = working.next_id(family);
    draft.role = base.role;
    draft.scope = base.scope;
    if (input.depends_on) {
      for (const auto& dep : *input.depends_on) {
        const ArtifactRecord* upstream = working.find(dep.id);
        if (upstream == nullptr) {
          throw SubstrateError(ErrorCode::kUnknownArtifact, "unknown artifact " + dep.id.str());
        }
        if (upstream->status != Status::kActive) {
          throw SubstrateError(ErrorCode::kStaleDependency,
                               draft.id.str() + " consumes " + std::string(to_string(upstream->status)) +
                                   " " + dep.id.str());
        }
      }
      draft.depends_on = *input.depends_on;
    } else {
      for (const auto& dep : base.depends_on) {
        ArtifactId current = current_of(working, dep.id);
        if (working.find(current)->status != Status::kActive) {
          throw SubstrateError(ErrorCode::kStaleDependency,
                               draft.id.str() + " would consume inactive " + current.str());
        }
        bool dup = std::any_of(draft.depends_on.begin(), draft.depends_on.end(),
                               [&](const Dependency& d) { return d.id == current; });
        if (!dup) draft.depends_on.push_back({current, dep.edge});
      }
    }
    draft.lineage.produced_by = input.produced_by.value_or(base.lineage.produced_by);
    draft.lineage.supersedes = olds;
    draft.payload = Payload::make(input.payload_type.value_or(base.payload.payload_type), input.payload);

    SubstrateEvent event = SubstrateEvent::superseding(std::move(draft));
    event.seq = working.last_seq() + 1;
    working.apply(event);
    created.push_back(std::get<ArtifactRecord>(event.body).id);
    events.push_back(std::move(event));
  }
  if (!events.empty()) store.commit_batch(std::move(events));
  return created;
}

}  // namespace substrate
