#pragma once

// Maintained-state benchmark: perturbation instances with gold annotations,
// and scoring of a system's post-revision snapshot against them.
//
// Metrics:
//   authority_acc = #single-authority (role, scope) resolved to the gold id
//                   / #single-authority (role, scope) in gold
//   stale P/R/F1  over flagged_stale vs gold_stale (artifact ids)
//   localization  precision = |R ∩ G| / |R|, recall = |R ∩ G| / |G|
//                 over revised vs gold affected family names
// Empty denominators score 1 (an empty claim is never wrong, an empty gold
// set is never missed). F1 is 0 when precision + recall is 0.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "substrate/resolver.hpp"
#include "substrate/state.hpp"

namespace substrate {

// Exact non-negative rational in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Ratio of(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

Ratio harmonic_mean(Ratio a, Ratio b);

enum class FamilyKind { kAuthoritySwap, kLocalCorrection, kBranchIsolated, kTransitiveImpact };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);
inline constexpr FamilyKind kAllFamilyKinds[] = {
    FamilyKind::kAuthoritySwap, FamilyKind::kLocalCorrection, FamilyKind::kBranchIsolated,
    FamilyKind::kTransitiveImpact};

// A single id for single-authority roles, an id set for multi-authority ones.
struct ActiveClaim {
  bool is_set = false;
  std::set<ArtifactId> ids;

  static ActiveClaim one(ArtifactId id) { return {false, {std::move(id)}}; }
  static ActiveClaim many(std::set<ArtifactId> ids) { return {true, std::move(ids)}; }

  friend bool operator==(const ActiveClaim&, const ActiveClaim&) = default;
};

using ActiveMap = std::map<RoleScope, ActiveClaim>;

struct BenchmarkInstance {
  std::vector<SubstrateEvent> setup_events;
  std::vector<SubstrateEvent> perturbation_events;
  ActiveMap gold_active;
  std::set<ArtifactId> gold_stale;
  std::set<std::string> gold_affected;
  FamilyKind family_kind = FamilyKind::kAuthoritySwap;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchmarkInstance&, const BenchmarkInstance&) = default;
};

struct SystemSnapshot {
  ActiveMap claimed_active;
  std::set<ArtifactId> flagged_stale;
  std::set<std::string> revised_set;

  friend bool operator==(const SystemSnapshot&, const SystemSnapshot&) = default;
};

struct PrecisionRecall {
  Ratio precision;
  Ratio recall;
  Ratio f1;

  friend bool operator==(const PrecisionRecall&, const PrecisionRecall&) = default;
};

struct AuthorityRow {
  RoleScope key;
  bool single_authority = true;
  ActiveClaim gold;
  std::optional<ActiveClaim> claimed;
  bool match = false;

  friend bool operator==(const AuthorityRow&, const AuthorityRow&) = default;
};

struct Scorecard {
  Ratio authority_acc;
  Ratio stale_precision, stale_recall, stale_f1;
  Ratio loc_precision, loc_recall;
  // One row per gold (role, scope). Multi-authority rows are informational
  // and do not count toward authority_acc.
  std::vector<AuthorityRow> rows;

  friend bool operator==(const Scorecard&, const Scorecard&) = default;
};

Ratio authority_accuracy(const SystemSnapshot& snapshot, const BenchmarkInstance& instance);
PrecisionRecall stale_detection_scores(const SystemSnapshot& snapshot,
                                       const BenchmarkInstance& instance);
PrecisionRecall localization_scores(const SystemSnapshot& snapshot,
                                    const BenchmarkInstance& instance);
Scorecard score(const SystemSnapshot& snapshot, const BenchmarkInstance& instance);

// Set-level metric helpers shared by the two precision/recall families.
template <typename T>
PrecisionRecall precision_recall(const std::set<T>& claimed, const std::set<T>& gold) {
  std::uint64_t hit = 0;
  for (const auto& x : claimed) hit += gold.count(x);
  Ratio p = claimed.empty() ? Ratio::of(1, 1) : Ratio::of(hit, claimed.size());
  Ratio r = gold.empty() ? Ratio::of(1, 1) : Ratio::of(hit, gold.size());
  return {p, r, harmonic_mean(p, r)};
}

struct GeneratorParams {
  std::uint32_t nodes = 24;  // total artifacts in the setup graph, 5..10000
};

// Deterministic in (kind, seed, params). Gold annotations come from running
// the reference engine on the generated graph and are cross-checked against
// an independent reachability scan; throws kBadParameters for out-of-range
// sizes.
BenchmarkInstance generate_instance(FamilyKind kind, std::uint64_t seed,
                                    const GeneratorParams& params = {});

// The reference engine acting as a system under test: replays setup and
// perturbation, plans and applies regeneration with placeholder payloads,
// and reports what it ends up with.
SystemSnapshot reference_snapshot(const BenchmarkInstance& instance);

// Snapshot of a store as seen by the scorer: every (role, scope) with a
// resolution other than kNoActive.
ActiveMap active_map(const StoreState& state);

Document to_document(const BenchmarkInstance& instance);
BenchmarkInstance instance_from_document(const Document& doc);
Document to_document(const SystemSnapshot& snapshot);
SystemSnapshot snapshot_from_document(const Document& doc);
Document to_document(const Scorecard& card);
Scorecard scorecard_from_document(const Document& doc);
// Aligned-column summary followed by per-role detail rows.
std::string render_text(const Scorecard& card);

}  // namespace substrate
