#include <random>

#include <gtest/gtest.h>

#include "substrate/benchmark.hpp"
#include "substrate/error.hpp"
#include "support/fixtures.hpp"

namespace substrate {
namespace {

using testing::ids;
using testing::kTelehealth;

SystemSnapshot gold_snapshot(const BenchmarkInstance& instance) {
  return {instance.gold_active, instance.gold_stale, instance.gold_affected};
}

TEST(Ratio, ReducesAndHandlesZero) {
  EXPECT_EQ(Ratio::of(6, 8), (Ratio{3, 4}));
  EXPECT_EQ(Ratio::of(0, 5), (Ratio{0, 1}));
  EXPECT_DOUBLE_EQ(Ratio::of(3, 4).value(), 0.75);
  EXPECT_THROW(Ratio::of(1, 0), SubstrateError);
}

TEST(Ratio, HarmonicMean) {
  EXPECT_EQ(harmonic_mean(Ratio::of(1, 1), Ratio::of(1, 1)), Ratio::of(1, 1));
  EXPECT_EQ(harmonic_mean(Ratio::of(1, 2), Ratio::of(1, 1)), Ratio::of(2, 3));
  EXPECT_EQ(harmonic_mean(Ratio::of(0, 1), Ratio::of(0, 1)), Ratio::of(0, 1));
}

TEST(Metrics, EmptySetConventions) {
  PrecisionRecall both_empty = precision_recall<int>({}, {});
  EXPECT_EQ(both_empty, (PrecisionRecall{Ratio::of(1, 1), Ratio::of(1, 1), Ratio::of(1, 1)}));
  PrecisionRecall nothing_flagged = precision_recall<int>({}, {1});
  EXPECT_EQ(nothing_flagged.precision, Ratio::of(1, 1));
  EXPECT_EQ(nothing_flagged.recall, Ratio::of(0, 1));
  EXPECT_EQ(nothing_flagged.f1, Ratio::of(0, 1));
}

TEST(Metrics, StaleRecallZeroWhenOldPlanUnflagged) {
  BenchmarkInstance instance;
  instance.gold_stale = ids({"implementation_plan:v1"});
  SystemSnapshot snapshot;
  PrecisionRecall pr = stale_detection_scores(snapshot, instance);
  EXPECT_EQ(pr.recall, Ratio::of(0, 1));
  EXPECT_EQ(pr.f1, Ratio::of(0, 1));
}

TEST(Metrics, LocalizationRecallMissingFinalMemo) {
  BenchmarkInstance instance;
  instance.gold_affected = {"criteria", "implementation_plan", "recommendation", "final_memo"};
  SystemSnapshot snapshot;
  snapshot.revised_set = {"criteria", "implementation_plan", "recommendation"};
  PrecisionRecall pr = localization_scores(snapshot, instance);
  EXPECT_EQ(pr.recall, Ratio::of(3, 4));
  EXPECT_EQ(pr.precision, Ratio::of(1, 1));
}

TEST(Metrics, AuthorityOnPolicyInstance) {
  BenchmarkInstance instance = testing::policy_benchmark_instance();
  SystemSnapshot snapshot = gold_snapshot(instance);
  EXPECT_EQ(authority_accuracy(snapshot, instance), Ratio::of(1, 1));

  snapshot.claimed_active[{"decision_criteria", kTelehealth}] = ActiveClaim::one(ArtifactId::parse("criteria:v1"));
  Scorecard card = score(snapshot, instance);
  EXPECT_EQ(card.authority_acc, Ratio::of(4, 5));
  for (const auto& row : card.rows) {
    EXPECT_EQ(row.match, row.key.role != "decision_criteria") << row.key.role;
  }
}

TEST(Metrics, AuthorityThreeOfFourRoles) {
  BenchmarkInstance instance;
  for (const char* role : {"decision_criteria", "implementation_plan", "recommendation", "final_memo"}) {
    instance.gold_active[{role, kTelehealth}] = ActiveClaim::one(ArtifactId{std::string(role), 2});
  }
  SystemSnapshot snapshot = gold_snapshot(instance);
  snapshot.claimed_active[{"decision_criteria", kTelehealth}] = ActiveClaim::one(ArtifactId{"decision_criteria", 1});
  EXPECT_EQ(authority_accuracy(snapshot, instance), Ratio::of(3, 4));
}

TEST(Metrics, ConflictOrMissingClaimIsAMiss) {
  BenchmarkInstance instance;
  instance.gold_active[{"r", "s"}] = ActiveClaim::one(ArtifactId::parse("a:v2"));
  SystemSnapshot missing;
  EXPECT_EQ(authority_accuracy(missing, instance), Ratio::of(0, 1));
  SystemSnapshot conflict;
  conflict.claimed_active[{"r", "s"}] = ActiveClaim::many(ids({"a:v1", "a:v2"}));
  EXPECT_EQ(authority_accuracy(conflict, instance), Ratio::of(0, 1));
}

TEST(Metrics, MultiAuthorityRowsAreInformational) {
  BenchmarkInstance instance;
  instance.gold_active[{"single", "s"}] = ActiveClaim::one(ArtifactId::parse("a:v1"));
  instance.gold_active[{"multi", "s"}] = ActiveClaim::many(ids({"m:v1", "n:v1"}));
  SystemSnapshot snapshot;
  snapshot.claimed_active[{"single", "s"}] = ActiveClaim::one(ArtifactId::parse("a:v1"));
  snapshot.claimed_active[{"multi", "s"}] = ActiveClaim::many(ids({"m:v1"}));
  Scorecard card = score(snapshot, instance);
  EXPECT_EQ(card.authority_acc, Ratio::of(1, 1));
  ASSERT_EQ(card.rows.size(), 2u);
  for (const auto& row : card.rows) {
    if (!row.single_authority) EXPECT_FALSE(row.match);
  }
}

TEST(Metrics, NoSingleAuthorityRolesScoresOne) {
  BenchmarkInstance instance;
  EXPECT_EQ(authority_accuracy(SystemSnapshot{}, instance), Ratio::of(1, 1));
}

TEST(Metrics, MonotonicDegradation) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::set<int> gold, claimed;
    for (int i = 0; i < 12; ++i) {
      if (rng() % 2) gold.insert(i);
      if (rng() % 2) claimed.insert(i);
    }
    PrecisionRecall base = precision_recall(claimed, gold);
    for (int x : claimed) {
      if (!gold.count(x)) continue;
      std::set<int> fewer = claimed;
      fewer.erase(x);
      ASSERT_LE(precision_recall(fewer, gold).recall.value(), base.recall.value());
    }
    for (int x = 12; x < 15; ++x) {
      std::set<int> more = claimed;
      more.insert(x);
      ASSERT_LE(precision_recall(more, gold).precision.value(), base.precision.value());
    }
  }
}

TEST(Metrics, AllValuesInUnitInterval) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    BenchmarkInstance instance = generate_instance(kAllFamilyKinds[seed % 4], seed);
    SystemSnapshot snapshot;
    snapshot.flagged_stale = {ArtifactId::parse("bogus:v1")};
    snapshot.revised_set = {"bogus"};
    Scorecard card = score(snapshot, instance);
    for (Ratio r : {card.authority_acc, card.stale_precision, card.stale_recall, card.stale_f1, card.loc_precision,
                    card.loc_recall}) {
      EXPECT_LE(r.num, r.den);
    }
  }
}

TEST(Generator, IsDeterministicInSeed) {
  for (FamilyKind kind : kAllFamilyKinds) {
    EXPECT_EQ(generate_instance(kind, 42), generate_instance(kind, 42));
    EXPECT_NE(to_document(generate_instance(kind, 42)).dump(), to_document(generate_instance(kind, 43)).dump());
  }
}

TEST(Generator, RejectsOutOfRangeSizes) {
  EXPECT_THROW(generate_instance(FamilyKind::kAuthoritySwap, 1, {.nodes = 4}), SubstrateError);
  EXPECT_THROW(generate_instance(FamilyKind::kAuthoritySwap, 1, {.nodes = 10001}), SubstrateError);
  EXPECT_NO_THROW(generate_instance(FamilyKind::kAuthoritySwap, 1, {.nodes = 5}));
}

TEST(Generator, FamiliesHaveTheirShape) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BenchmarkInstance swap = generate_instance(FamilyKind::kAuthoritySwap, seed);
    ASSERT_EQ(swap.perturbation_events.size(), 1u);
    EXPECT_EQ(swap.perturbation_events[0].kind, EventKind::kCommitSuperseding);
    EXPECT_FALSE(swap.gold_stale.empty());

    // Local and transitive perturbations both revise a first-layer evidence node.
    for (FamilyKind kind : {FamilyKind::kLocalCorrection, FamilyKind::kTransitiveImpact}) {
      BenchmarkInstance instance = generate_instance(kind, seed);
      ASSERT_EQ(instance.perturbation_events.size(), 1u);
      const auto& draft = std::get<ArtifactRecord>(instance.perturbation_events[0].body);
      EXPECT_EQ(draft.id.family.rfind("evidence_", 0), 0u) << draft.id.str();
    }

    BenchmarkInstance branch = generate_instance(FamilyKind::kBranchIsolated, seed);
    bool multi = false;
    for (const auto& [key, claim] : branch.gold_active) multi = multi || claim.is_set;
    EXPECT_TRUE(multi) << seed;
    // Nothing on branch a is touched by a branch-b perturbation.
    for (const auto& id : branch.gold_stale) {
      EXPECT_EQ(id.family.find("_a_"), std::string::npos) << id.str();
    }
  }
}

TEST(Generator, ReferenceEngineScoresPerfectly) {
  for (FamilyKind kind : kAllFamilyKinds) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (std::uint32_t nodes : {5u, 24u, 200u}) {
        BenchmarkInstance instance = generate_instance(kind, seed, {.nodes = nodes});
        Scorecard card = score(reference_snapshot(instance), instance);
        Ratio one = Ratio::of(1, 1);
        ASSERT_EQ(card.authority_acc, one) << to_string(kind) << " " << seed << " " << nodes;
        ASSERT_EQ(card.stale_f1, one);
        ASSERT_EQ(card.loc_precision, one);
        ASSERT_EQ(card.loc_recall, one);
      }
    }
  }
}

TEST(Serialization, InstanceSnapshotScorecardRoundTrip) {
  BenchmarkInstance instance = generate_instance(FamilyKind::kBranchIsolated, 9);
  EXPECT_EQ(instance_from_document(to_document(instance)), instance);
  SystemSnapshot snapshot = reference_snapshot(instance);
  EXPECT_EQ(snapshot_from_document(to_document(snapshot)), snapshot);
  Scorecard card = score(snapshot, instance);
  EXPECT_EQ(scorecard_from_document(to_document(card)), card);
  EXPECT_EQ(instance_from_document(to_document(testing::policy_benchmark_instance())),
            testing::policy_benchmark_instance());
}

TEST(Serialization, MalformedInputIsReported) {
  for (const char* text : {R"({})", R"({"family_kind":"nope","seed":1})", R"([1,2])",
                           R"({"family_kind":"authority_swap","seed":-3,"setup_events":[],"perturbation_events":[],
                               "gold_active":[],"gold_stale":[],"gold_affected":[]})"}) {
    try {
      instance_from_document(Document::parse(text));
      ADD_FAILURE() << text;
    } catch (const SubstrateError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedInput) << text;
    }
  }
}

TEST(Scorecard, TextRenderingListsMetrics) {
  BenchmarkInstance instance = testing::policy_benchmark_instance();
  SystemSnapshot snapshot = gold_snapshot(instance);
  snapshot.revised_set.erase("final_memo");
  std::string text = render_text(score(snapshot, instance));
  EXPECT_NE(text.find("loc_recall"), std::string::npos);
  EXPECT_NE(text.find("3/4"), std::string::npos);
  EXPECT_NE(text.find("0.75"), std::string::npos);
}

}  // namespace
}  // namespace substrate
