#include "support/fixtures.hpp"

namespace substrate::testing {

ArtifactRecord make_draft(const std::string& id, const std::string& role,
                          const std::vector<std::string>& depends_on,
                          const std::vector<std::string>& supersedes, Document payload,
                          const std::string& scope) {
  ArtifactRecord draft;
  draft.id = ArtifactId::parse(id);
  draft.role = role;
  draft.scope = scope;
  for (const auto& d : depends_on) draft.depends_on.push_back({ArtifactId::parse(d), EdgeType::kConsumes});
  draft.lineage.produced_by = draft.id.family + "_block";
  for (const auto& s : supersedes) draft.lineage.supersedes.push_back(ArtifactId::parse(s));
  if (payload.is_object() && payload.empty()) payload = {{"summary", id}};
  draft.payload = Payload::make(role, std::move(payload));
  return draft;
}

std::set<ArtifactId> ids(std::initializer_list<const char*> texts) {
  std::set<ArtifactId> out;
  for (const char* t : texts) out.insert(ArtifactId::parse(t));
  return out;
}

void declare_telehealth_roles(Store& store) {
  for (const char* role : {"evidence_digest", "claim_matrix", "tension_analysis", "decision_criteria",
                           "implementation_plan", "recommendation", "final_memo"}) {
    store.declare_role({role, AuthorityMode::kSingleActive});
  }
}

void lifecycle_step1(Store& store) {
  store.commit_additive(make_draft("criteria:v1", "decision_criteria", {}, {},
                                   {{"constraint", "Expand access while maintaining feasibility"}}));
}

void lifecycle_step2(Store& store) {
  store.commit_additive(make_draft("implementation_plan:v1", "implementation_plan", {"criteria:v1"}));
  store.commit_additive(
      make_draft("recommendation:v1", "recommendation", {"criteria:v1", "implementation_plan:v1"}));
  store.commit_additive(
      make_draft("final_memo:v1", "final_memo", {"recommendation:v1", "implementation_plan:v1"}));
}

CommitResult lifecycle_step3(Store& store) {
  return store.commit_superseding(
      make_draft("criteria:v2", "decision_criteria", {}, {"criteria:v1"},
                 {{"constraint", "Year-one expansion must be budget-neutral"}}));
}

void build_worked_example(Store& store) {
  declare_telehealth_roles(store);
  store.commit_additive(make_draft("evidence_digest:v1", "evidence_digest"));
  store.commit_additive(make_draft("claim_matrix:v1", "claim_matrix", {"evidence_digest:v1"}));
  store.commit_superseding(
      make_draft("claim_matrix:v2", "claim_matrix", {"evidence_digest:v1"}, {"claim_matrix:v1"}));
  store.commit_additive(make_draft("tension_analysis:v1", "tension_analysis", {"evidence_digest:v1"}));
  store.commit_superseding(make_draft("tension_analysis:v2", "tension_analysis", {"evidence_digest:v1"},
                                      {"tension_analysis:v1"}));
  store.commit_additive(make_draft("criteria:v1", "decision_criteria",
                                   {"claim_matrix:v2", "tension_analysis:v2"}, {},
                                   {{"constraint", "Expand access while maintaining feasibility"}}));
  store.commit_additive(make_draft("implementation_plan:v1", "implementation_plan", {"criteria:v1"}));
  store.commit_additive(make_draft("recommendation:v1", "recommendation",
                                   {"claim_matrix:v2", "criteria:v1", "implementation_plan:v1",
                                    "tension_analysis:v2"}));
  store.commit_additive(
      make_draft("final_memo:v1", "final_memo", {"recommendation:v1", "implementation_plan:v1"}));
}

CommitResult commit_budget_revision(Store& store) {
  Document payload{{"constraint", "Year-one expansion must be budget-neutral"},
                   {"decision_rule", "Prefer phased rollout over full launch"},
                   {"priority_order", {"budget neutrality", "access expansion", "operational feasibility"}},
                   {"open_questions", {"Which sites can absorb added volume?"}}};
  ArtifactRecord draft = make_draft("criteria:v2", "decision_criteria",
                                    {"claim_matrix:v2", "tension_analysis:v2"}, {"criteria:v1"},
                                    std::move(payload));
  draft.payload = Payload::make("budget_constraint_matrix", draft.payload.content);
  return store.commit_superseding(std::move(draft));
}

std::map<std::string, RegenerationDraft> regeneration_drafts(const RegenerationPlan& plan) {
  std::map<std::string, RegenerationDraft> drafts;
  for (const auto& family : plan.rebuild_order) {
    drafts[family].payload = {{"summary", family + " regenerated under budget neutrality"}};
  }
  return drafts;
}

BenchmarkInstance policy_benchmark_instance() {
  Store store;
  for (const char* role :
       {"claim_matrix", "decision_criteria", "implementation_plan", "recommendation", "final_memo"}) {
    store.declare_role({role, AuthorityMode::kSingleActive});
  }
  store.commit_additive(make_draft("claim_matrix:v1", "claim_matrix"));
  store.commit_superseding(make_draft("claim_matrix:v2", "claim_matrix", {}, {"claim_matrix:v1"}));
  store.commit_additive(make_draft("criteria:v1", "decision_criteria", {"claim_matrix:v2"}));
  store.commit_additive(make_draft("implementation_plan:v1", "implementation_plan", {"criteria:v1"}));
  store.commit_additive(
      make_draft("recommendation:v1", "recommendation", {"claim_matrix:v2", "criteria:v1", "implementation_plan:v1"}));
  store.commit_additive(
      make_draft("final_memo:v1", "final_memo", {"recommendation:v1", "implementation_plan:v1"}));

  BenchmarkInstance instance;
  instance.family_kind = FamilyKind::kAuthoritySwap;
  instance.seed = 0;
  instance.setup_events = store.events();
  SubstrateEvent perturbation = SubstrateEvent::superseding(
      make_draft("criteria:v2", "decision_criteria", {"claim_matrix:v2"}, {"criteria:v1"},
                 {{"constraint", "Year-one expansion must be budget-neutral"}}));
  perturbation.seq = store.state().last_seq() + 1;
  instance.perturbation_events = {perturbation};

  auto gold = [](const char* role, const char* id) {
    return std::pair{RoleScope{role, kTelehealth}, ActiveClaim::one(ArtifactId::parse(id))};
  };
  instance.gold_active = {gold("claim_matrix", "claim_matrix:v2"), gold("decision_criteria", "criteria:v2"),
                          gold("implementation_plan", "implementation_plan:v2"),
                          gold("recommendation", "recommendation:v2"), gold("final_memo", "final_memo:v2")};
  instance.gold_stale = ids({"criteria:v1", "implementation_plan:v1", "recommendation:v1", "final_memo:v1"});
  instance.gold_affected = {"criteria", "implementation_plan", "recommendation", "final_memo"};
  return instance;
}

}  // namespace substrate::testing
