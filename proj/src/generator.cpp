// Perturbation-instance generation and the reference engine run that labels
// it.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "substrate/benchmark.hpp"
#include "substrate/error.hpp"
#include "substrate/lineage.hpp"

namespace substrate {

namespace {

constexpr std::uint32_t kMinNodes = 5;
constexpr std::uint32_t kMaxNodes = 10000;
constexpr std::array<const char*, 8> kStages = {"evidence", "claim",     "criteria", "plan",
                                                "synthesis", "memo",     "review",   "release"};
constexpr const char* kScope = "bench:baseline";
constexpr const char* kBranchRole = "scenario_memo";

struct Node {
  std::string family;
  std::string role;
  std::size_t layer = 0;
  int branch = 0;  // 0 or 1; only meaningful for branch-isolated instances
  std::vector<Dependency> deps;
};

class Rng {
 public:
  Rng(std::uint64_t seed, FamilyKind kind)
      : engine_(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(kind) + 1) {}
  // Modulo reduction keeps the stream identical across standard libraries.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

struct EngineRun {
  StoreState state;
  std::set<ArtifactId> stale;
  std::set<std::string> revised;
  std::vector<std::pair<ArtifactId, std::vector<ArtifactId>>> triggers;  // trigger, displaced
};

// Replays setup + perturbation, then regenerates after every superseding
// perturbation commit.
EngineRun run_reference_engine(const BenchmarkInstance& instance) {
  Store store(std::vector<SubstrateEvent>(instance.setup_events));
  EngineRun run;
  for (const auto& event : instance.perturbation_events) {
    SubstrateEvent copy = event;
    auto results = store.commit_batch({copy});
    const auto& result = results.front();
    if (!result || result->displaced.empty()) continue;
    run.triggers.emplace_back(result->id, result->displaced);
    RegenerationPlan plan = plan_regeneration(store.state(), result->id);
    std::map<std::string, RegenerationDraft> drafts;
    for (const auto& family : plan.rebuild_order) {
      Document stale_inputs = Document::array();
      for (const auto& id : plan.invalidated) {
        if (id.family == family) stale_inputs.push_back(id.str());
      }
      drafts[family].payload = {{"regenerated_from", std::move(stale_inputs)},
                                {"trigger", result->id.str()}};
    }
    apply_regeneration(store, plan, drafts);
    run.stale.insert(result->displaced.begin(), result->displaced.end());
    run.stale.insert(plan.invalidated.begin(), plan.invalidated.end());
    run.revised.insert(result->id.family);
    run.revised.insert(plan.rebuild_order.begin(), plan.rebuild_order.end());
  }
  run.state = store.state();
  return run;
}

// Fixpoint scan over raw records; shares no code with the consumers index.
std::set<ArtifactId> brute_force_dependents(const StoreState& state, const std::vector<ArtifactId>& roots) {
  std::set<ArtifactId> reached(roots.begin(), roots.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& record : state.records()) {
      if (reached.count(record.id)) continue;
      for (const auto& dep : record.depends_on) {
        if (reached.count(dep.id)) {
          reached.insert(record.id);
          changed = true;
          break;
        }
      }
    }
  }
  for (const auto& r : roots) reached.erase(r);
  return reached;
}

std::size_t layer_count(FamilyKind kind, std::uint32_t nodes) {
  auto layers = static_cast<std::size_t>(3 + static_cast<int>(std::log2(nodes)) / 2);
  layers = std::min<std::size_t>(layers, kStages.size());
  if (kind == FamilyKind::kBranchIsolated) {
    // Two branches need two nodes per layer.
    layers = std::max<std::size_t>(2, std::min<std::size_t>(layers, nodes / 2));
  }
  return layers;
}

std::vector<Node> build_graph(FamilyKind kind, std::uint32_t total, Rng& rng) {
  const bool branched = kind == FamilyKind::kBranchIsolated;
  const std::size_t layers = layer_count(kind, total);
  const std::size_t floor_per_layer = branched ? 2 : 1;

  std::vector<std::size_t> sizes(layers, floor_per_layer);
  if (!branched) sizes[0] = 2;  // evidence always has a sibling
  std::size_t assigned = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  for (; assigned < total; ++assigned) ++sizes[rng.below(layers)];

  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> by_layer(layers);
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t k = 0; k < sizes[layer]; ++k) {
      Node node;
      node.layer = layer;
      node.branch = branched ? (k < 2 ? static_cast<int>(k) : static_cast<int>(rng.below(2))) : 0;
      node.family = std::string(kStages[layer]) + "_" +
                    (branched ? (node.branch == 0 ? "a_" : "b_") : "") + std::to_string(k);
      node.role = (branched && layer + 1 == layers) ? kBranchRole : node.family;
      by_layer[layer].push_back(nodes.size());
      nodes.push_back(std::move(node));
    }
  }

  auto candidates = [&](std::size_t layer, int branch) {
    std::vector<std::size_t> out;
    for (std::size_t idx : by_layer[layer]) {
      if (nodes[idx].branch == branch) out.push_back(idx);
    }
    return out;
  };
  auto add_dep = [&](Node& node, std::size_t upstream) {
    ArtifactId id{nodes[upstream].family, 1};
    for (const auto& d : node.deps) {
      if (d.id == id) return;
    }
    EdgeType edge = rng.below(4) == 0 ? EdgeType::kDerivedFrom : EdgeType::kConsumes;
    node.deps.push_back({std::move(id), edge});
  };

  for (std::size_t layer = 1; layer < layers; ++layer) {
    for (std::size_t idx : by_layer[layer]) {
      auto prev = candidates(layer - 1, nodes[idx].branch);
      std::size_t want = 1 + rng.below(std::min<std::size_t>(3, prev.size()));
      for (std::size_t i = 0; i < want; ++i) add_dep(nodes[idx], prev[rng.below(prev.size())]);
      if (layer >= 2 && rng.below(4) == 0) {
        auto earlier = candidates(rng.below(layer - 1), nodes[idx].branch);
        if (!earlier.empty()) add_dep(nodes[idx], earlier[rng.below(earlier.size())]);
      }
    }
  }
  // Every non-final node feeds at least one node in the next layer.
  for (std::size_t layer = 0; layer + 1 < layers; ++layer) {
    for (std::size_t idx : by_layer[layer]) {
      ArtifactId id{nodes[idx].family, 1};
      bool consumed = false;
      for (std::size_t next : by_layer[layer + 1]) {
        for (const auto& d : nodes[next].deps) consumed = consumed || d.id == id;
      }
      if (!consumed) {
        auto next = candidates(layer + 1, nodes[idx].branch);
        add_dep(nodes[next[rng.below(next.size())]], idx);
      }
    }
  }
  return nodes;
}

Document node_payload(const Node& node, Rng& rng) {
  return {{"stage", kStages[node.layer]}, {"family", node.family}, {"token", rng.below(1000000)}};
}

ArtifactRecord node_record(const Node& node, std::uint32_t version, Document payload) {
  ArtifactRecord record;
  record.id = {node.family, version};
  record.role = node.role;
  record.scope = kScope;
  record.depends_on = node.deps;
  record.lineage.produced_by = std::string(kStages[node.layer]) + "_block";
  record.payload = Payload::make(std::string(kStages[node.layer]) + "_payload", std::move(payload));
  return record;
}

std::size_t pick_target(FamilyKind kind, const std::vector<Node>& nodes, const StoreState& state, Rng& rng) {
  const std::size_t layers = nodes.back().layer + 1;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (kind) {
      case FamilyKind::kAuthoritySwap:
        if (n.layer >= 1 && n.layer + 1 < layers) pool.push_back(i);
        break;
      case FamilyKind::kLocalCorrection:
      case FamilyKind::kTransitiveImpact:
        if (n.layer == 0) pool.push_back(i);
        break;
      case FamilyKind::kBranchIsolated:
        if (n.branch == 1) pool.push_back(i);
        break;
    }
  }
  if (kind == FamilyKind::kAuthoritySwap || kind == FamilyKind::kBranchIsolated) {
    return pool[rng.below(pool.size())];
  }
  // Local corrections touch the evidence node with the smallest downstream
  // footprint, transitive-impact edits the one with the largest.
  std::size_t best = pool.front();
  std::size_t best_count = transitive_dependents(state, {nodes[best].family, 1}).size();
  for (std::size_t idx : pool) {
    std::size_t count = transitive_dependents(state, {nodes[idx].family, 1}).size();
    bool better = kind == FamilyKind::kLocalCorrection ? count < best_count : count > best_count;
    if (better) {
      best = idx;
      best_count = count;
    }
  }
  return best;
}

// Independent gold check: the stale set must equal the displaced ids plus
// every record that was Active in the trigger's scope right after the
// perturbation and reaches a displaced id.
void cross_check(const BenchmarkInstance& instance, const EngineRun& run) {
  std::vector<SubstrateEvent> log = instance.setup_events;
  log.insert(log.end(), instance.perturbation_events.begin(), instance.perturbation_events.end());
  StoreState before = replay(log);
  std::set<ArtifactId> expected;
  for (const auto& [trigger, displaced] : run.triggers) {
    expected.insert(displaced.begin(), displaced.end());
    const std::string& scope = before.find(trigger)->scope;
    for (const auto& id : brute_force_dependents(before, displaced)) {
      const ArtifactRecord* record = before.find(id);
      if (id != trigger && record->status == Status::kActive && record->scope == scope) expected.insert(id);
    }
  }
  if (expected != run.stale) {
    throw std::logic_error("gold oracle mismatch between plan and brute-force reachability");
  }
}

}  // namespace

BenchmarkInstance generate_instance(FamilyKind kind, std::uint64_t seed, const GeneratorParams& params) {
  if (params.nodes < kMinNodes || params.nodes > kMaxNodes) {
    throw SubstrateError(ErrorCode::kBadParameters,
                         "node count must be in [5, 10000], got " + std::to_string(params.nodes));
  }
  Rng rng(seed, kind);
  std::vector<Node> nodes = build_graph(kind, params.nodes, rng);

  BenchmarkInstance instance;
  instance.family_kind = kind;
  instance.seed = seed;

  std::map<std::string, AuthorityMode> roles;
  for (const auto& n : nodes) {
    roles.emplace(n.role, n.role == kBranchRole ? AuthorityMode::kMultiActive : AuthorityMode::kSingleActive);
  }
  Store setup;
  for (const auto& [name, mode] : roles) setup.declare_role({name, mode});
  for (const auto& n : nodes) setup.commit_additive(node_record(n, 1, node_payload(n, rng)));
  instance.setup_events = setup.events();

  const Node& target = nodes[pick_target(kind, nodes, setup.state(), rng)];
  Document revised = node_payload(target, rng);
  revised["revision"] = 1;
  ArtifactRecord edit = node_record(target, 2, std::move(revised));
  edit.lineage.supersedes = {ArtifactId{target.family, 1}};
  SubstrateEvent perturbation = SubstrateEvent::superseding(std::move(edit));
  perturbation.seq = setup.state().last_seq() + 1;
  instance.perturbation_events = {perturbation};

  EngineRun run = run_reference_engine(instance);
  cross_check(instance, run);
  instance.gold_active = active_map(run.state);
  instance.gold_stale = run.stale;
  instance.gold_affected = run.revised;
  return instance;
}

SystemSnapshot reference_snapshot(const BenchmarkInstance& instance) {
  EngineRun run = run_reference_engine(instance);
  return SystemSnapshot{active_map(run.state), run.stale, run.revised};
}

}  // namespace substrate
