#pragma once

// Worked-example fixtures: the telehealth policy-analysis graph used across
// unit and acceptance tests.

#include <map>
#include <string>
#include <vector>

#include "substrate/benchmark.hpp"
#include "substrate/lineage.hpp"
#include "substrate/store.hpp"

namespace substrate::testing {

inline constexpr const char* kTelehealth = "telehealth:baseline";

ArtifactRecord make_draft(const std::string& id, const std::string& role,
                          const std::vector<std::string>& depends_on = {},
                          const std::vector<std::string>& supersedes = {},
                          Document payload = Document::object(),
                          const std::string& scope = kTelehealth);

std::set<ArtifactId> ids(std::initializer_list<const char*> texts);

// evidence_digest, claim_matrix, tension_analysis, decision_criteria,
// implementation_plan, recommendation, final_memo; all SingleActive.
void declare_telehealth_roles(Store& store);

// Lifecycle steps 1-2: criteria:v1, then plan/recommendation/memo v1.
void lifecycle_step1(Store& store);
void lifecycle_step2(Store& store);
// Step 3: criteria:v2 superseding criteria:v1.
CommitResult lifecycle_step3(Store& store);

// Staged-boundary example initial state:
//   evidence_digest:v1, claim_matrix:v1->v2, tension_analysis:v1->v2,
//   criteria:v1, implementation_plan:v1, recommendation:v1, final_memo:v1.
void build_worked_example(Store& store);
// The budget-neutrality revision: criteria:v2 supersedes criteria:v1.
CommitResult commit_budget_revision(Store& store);
// Drafts for every family in the revision's plan.
std::map<std::string, RegenerationDraft> regeneration_drafts(const RegenerationPlan& plan);

// The benchmark-style instance with hand-written gold annotations.
BenchmarkInstance policy_benchmark_instance();

}  // namespace substrate::testing
