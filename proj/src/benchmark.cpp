#include "substrate/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "substrate/error.hpp"

namespace substrate {

namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw SubstrateError(ErrorCode::kMalformedInput, message);
}

constexpr const char* kConventions =
    "empty denominators score 1; f1 is 0 when precision + recall is 0; "
    "authority_acc counts single-authority roles only";

Document ids_to_document(const std::set<ArtifactId>& ids) {
  Document out = Document::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::set<ArtifactId> ids_from_document(const Document& doc, const char* field) {
  if (!doc.is_array()) malformed(std::string("'") + field + "' must be a list of ids");
  std::set<ArtifactId> out;
  for (const auto& v : doc) {
    if (!v.is_string()) malformed(std::string("'") + field + "' must be a list of ids");
    out.insert(ArtifactId::parse(v.get<std::string>()));
  }
  return out;
}

std::set<std::string> names_from_document(const Document& doc, const char* field) {
  if (!doc.is_array()) malformed(std::string("'") + field + "' must be a list of names");
  std::set<std::string> out;
  for (const auto& v : doc) {
    if (!v.is_string()) malformed(std::string("'") + field + "' must be a list of names");
    out.insert(v.get<std::string>());
  }
  return out;
}

const Document& field(const Document& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::string field_string(const Document& doc, const char* key) {
  const Document& v = field(doc, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Document claim_entry(const RoleScope& key, const ActiveClaim& claim) {
  Document entry{{"role", key.role}, {"scope", key.scope}};
  if (claim.is_set) {
    entry["artifact_ids"] = ids_to_document(claim.ids);
  } else {
    entry["artifact_id"] = claim.ids.begin()->str();
  }
  return entry;
}

ActiveClaim claim_from_entry(const Document& entry) {
  if (entry.contains("artifact_id")) {
    return ActiveClaim::one(ArtifactId::parse(field_string(entry, "artifact_id")));
  }
  return ActiveClaim::many(ids_from_document(field(entry, "artifact_ids"), "artifact_ids"));
}

Document active_map_to_document(const ActiveMap& map) {
  Document out = Document::array();
  for (const auto& [key, claim] : map) out.push_back(claim_entry(key, claim));
  return out;
}

ActiveMap active_map_from_document(const Document& doc, const char* name) {
  if (!doc.is_array()) malformed(std::string("'") + name + "' must be a list");
  ActiveMap out;
  for (const auto& entry : doc) {
    if (!entry.is_object()) malformed(std::string("'") + name + "' entries must be objects");
    RoleScope key{field_string(entry, "role"), field_string(entry, "scope")};
    if (!out.emplace(key, claim_from_entry(entry)).second) {
      malformed("duplicate entry for role '" + key.role + "' in scope '" + key.scope + "'");
    }
  }
  return out;
}

Document events_to_document(const std::vector<SubstrateEvent>& events) {
  Document out = Document::array();
  for (const auto& e : events) out.push_back(to_document(e));
  return out;
}

std::vector<SubstrateEvent> events_from_document(const Document& doc, const char* name) {
  if (!doc.is_array()) malformed(std::string("'") + name + "' must be a list");
  std::vector<SubstrateEvent> out;
  for (const auto& e : doc) out.push_back(event_from_document(e));
  return out;
}

Document ratio_to_document(Ratio r) {
  return {{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

Ratio ratio_from_document(const Document& doc) {
  if (!doc.is_object() || !doc.contains("num") || !doc.contains("den") ||
      !doc["num"].is_number_unsigned() || !doc["den"].is_number_unsigned()) {
    malformed("ratio needs unsigned num and den");
  }
  return Ratio::of(doc["num"].get<std::uint64_t>(), doc["den"].get<std::uint64_t>());
}

std::string claim_text(const ActiveClaim& claim) {
  std::string out;
  for (const auto& id : claim.ids) out += (out.empty() ? "" : ",") + id.str();
  if (claim.is_set) out = "{" + out + "}";
  return out;
}

}  // namespace

Ratio Ratio::of(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw SubstrateError(ErrorCode::kBadParameters, "ratio with zero denominator");
  std::uint64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return Ratio{num / g, den / g};
}

Ratio harmonic_mean(Ratio a, Ratio b) {
  // 2ab / (a + b) = 2 a.num b.num / (a.num b.den + b.num a.den)
  std::uint64_t top = 2 * a.num * b.num;
  std::uint64_t bottom = a.num * b.den + b.num * a.den;
  if (top == 0) return Ratio{0, 1};
  return Ratio::of(top, bottom);
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kAuthoritySwap: return "authority_swap";
    case FamilyKind::kLocalCorrection: return "local_correction";
    case FamilyKind::kBranchIsolated: return "branch_isolated";
    case FamilyKind::kTransitiveImpact: return "transitive_impact";
  }
  return "authority_swap";
}

FamilyKind parse_family_kind(std::string_view text) {
  for (FamilyKind kind : kAllFamilyKinds) {
    if (to_string(kind) == text) return kind;
  }
  throw SubstrateError(ErrorCode::kBadParameters, "unknown perturbation family '" + std::string(text) + "'");
}

Ratio authority_accuracy(const SystemSnapshot& snapshot, const BenchmarkInstance& instance) {
  std::uint64_t total = 0;
  std::uint64_t hits = 0;
  for (const auto& [key, gold] : instance.gold_active) {
    if (gold.is_set) continue;
    ++total;
    auto it = snapshot.claimed_active.find(key);
    if (it != snapshot.claimed_active.end() && !it->second.is_set && it->second.ids == gold.ids) ++hits;
  }
  if (total == 0) return Ratio{1, 1};
  return Ratio::of(hits, total);
}

PrecisionRecall stale_detection_scores(const SystemSnapshot& snapshot,
                                       const BenchmarkInstance& instance) {
  return precision_recall(snapshot.flagged_stale, instance.gold_stale);
}

PrecisionRecall localization_scores(const SystemSnapshot& snapshot,
                                    const BenchmarkInstance& instance) {
  return precision_recall(snapshot.revised_set, instance.gold_affected);
}

Scorecard score(const SystemSnapshot& snapshot, const BenchmarkInstance& instance) {
  Scorecard card;
  card.authority_acc = authority_accuracy(snapshot, instance);
  PrecisionRecall stale = stale_detection_scores(snapshot, instance);
  card.stale_precision = stale.precision;
  card.stale_recall = stale.recall;
  card.stale_f1 = stale.f1;
  PrecisionRecall loc = localization_scores(snapshot, instance);
  card.loc_precision = loc.precision;
  card.loc_recall = loc.recall;
  for (const auto& [key, gold] : instance.gold_active) {
    AuthorityRow row{key, !gold.is_set, gold, std::nullopt, false};
    auto it = snapshot.claimed_active.find(key);
    if (it != snapshot.claimed_active.end()) {
      row.claimed = it->second;
      row.match = it->second == gold;
    }
    card.rows.push_back(std::move(row));
  }
  return card;
}

ActiveMap active_map(const StoreState& state) {
  ActiveMap out;
  for (const auto& [key, ids] : state.active_index()) {
    Resolution r = resolve_active(state, key.role, key.scope);
    std::set<ArtifactId> set(r.ids.begin(), r.ids.end());
    switch (r.kind) {
      case Resolution::Kind::kSingle:
        out.emplace(key, ActiveClaim::one(r.ids.front()));
        break;
      case Resolution::Kind::kSet:
      case Resolution::Kind::kConflict:
        out.emplace(key, ActiveClaim::many(std::move(set)));
        break;
      case Resolution::Kind::kNoActive:
        break;
    }
  }
  return out;
}

Document to_document(const BenchmarkInstance& instance) {
  Document affected = Document::array();
  for (const auto& f : instance.gold_affected) affected.push_back(f);
  return {{"family_kind", std::string(to_string(instance.family_kind))},
          {"seed", instance.seed},
          {"setup_events", events_to_document(instance.setup_events)},
          {"perturbation_events", events_to_document(instance.perturbation_events)},
          {"gold_active", active_map_to_document(instance.gold_active)},
          {"gold_stale", ids_to_document(instance.gold_stale)},
          {"gold_affected", std::move(affected)}};
}

BenchmarkInstance instance_from_document(const Document& doc) {
  if (!doc.is_object()) malformed("instance must be an object");
  BenchmarkInstance instance;
  try {
    instance.family_kind = parse_family_kind(field_string(doc, "family_kind"));
  } catch (const SubstrateError& e) {
    malformed(e.what());
  }
  const Document& seed = field(doc, "seed");
  if (!seed.is_number_unsigned()) malformed("seed must be an unsigned integer");
  instance.seed = seed.get<std::uint64_t>();
  instance.setup_events = events_from_document(field(doc, "setup_events"), "setup_events");
  instance.perturbation_events =
      events_from_document(field(doc, "perturbation_events"), "perturbation_events");
  instance.gold_active = active_map_from_document(field(doc, "gold_active"), "gold_active");
  instance.gold_stale = ids_from_document(field(doc, "gold_stale"), "gold_stale");
  instance.gold_affected = names_from_document(field(doc, "gold_affected"), "gold_affected");
  return instance;
}

Document to_document(const SystemSnapshot& snapshot) {
  Document revised = Document::array();
  for (const auto& f : snapshot.revised_set) revised.push_back(f);
  return {{"claimed_active", active_map_to_document(snapshot.claimed_active)},
          {"flagged_stale", ids_to_document(snapshot.flagged_stale)},
          {"revised_set", std::move(revised)}};
}

SystemSnapshot snapshot_from_document(const Document& doc) {
  if (!doc.is_object()) malformed("snapshot must be an object");
  SystemSnapshot snapshot;
  snapshot.claimed_active = active_map_from_document(field(doc, "claimed_active"), "claimed_active");
  snapshot.flagged_stale = ids_from_document(field(doc, "flagged_stale"), "flagged_stale");
  snapshot.revised_set = names_from_document(field(doc, "revised_set"), "revised_set");
  return snapshot;
}

Document to_document(const Scorecard& card) {
  Document rows = Document::array();
  for (const auto& row : card.rows) {
    Document r{{"role", row.key.role},
               {"scope", row.key.scope},
               {"single_authority", row.single_authority},
               {"gold", ids_to_document(row.gold.ids)},
               {"match", row.match}};
    r["claimed"] = row.claimed ? ids_to_document(row.claimed->ids) : Document();
    r["claimed_is_set"] = row.claimed ? Document(row.claimed->is_set) : Document();
    rows.push_back(std::move(r));
  }
  return {{"authority_acc", ratio_to_document(card.authority_acc)},
          {"stale_precision", ratio_to_document(card.stale_precision)},
          {"stale_recall", ratio_to_document(card.stale_recall)},
          {"stale_f1", ratio_to_document(card.stale_f1)},
          {"loc_precision", ratio_to_document(card.loc_precision)},
          {"loc_recall", ratio_to_document(card.loc_recall)},
          {"conventions", kConventions},
          {"rows", std::move(rows)}};
}

Scorecard scorecard_from_document(const Document& doc) {
  if (!doc.is_object()) malformed("scorecard must be an object");
  Scorecard card;
  card.authority_acc = ratio_from_document(field(doc, "authority_acc"));
  card.stale_precision = ratio_from_document(field(doc, "stale_precision"));
  card.stale_recall = ratio_from_document(field(doc, "stale_recall"));
  card.stale_f1 = ratio_from_document(field(doc, "stale_f1"));
  card.loc_precision = ratio_from_document(field(doc, "loc_precision"));
  card.loc_recall = ratio_from_document(field(doc, "loc_recall"));
  const Document& rows = field(doc, "rows");
  if (!rows.is_array()) malformed("'rows' must be a list");
  for (const auto& r : rows) {
    AuthorityRow row;
    row.key = {field_string(r, "role"), field_string(r, "scope")};
    row.single_authority = field(r, "single_authority").get<bool>();
    row.gold = {!row.single_authority, ids_from_document(field(r, "gold"), "gold")};
    if (!field(r, "claimed").is_null()) {
      row.claimed = ActiveClaim{field(r, "claimed_is_set").get<bool>(),
                                ids_from_document(field(r, "claimed"), "claimed")};
    }
    row.match = field(r, "match").get<bool>();
    card.rows.push_back(std::move(row));
  }
  return card;
}

std::string render_text(const Scorecard& card) {
  auto line = [](const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += cells[i];
      if (i + 1 < cells.size()) out += std::string(widths[i] - cells[i].size() + 2, ' ');
    }
    return out + "\n";
  };
  auto table = [&](const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(rows.front().size(), 0);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) out += line(row, widths);
    return out;
  };
  auto metric = [](const char* name, Ratio r) {
    char value[32];
    std::snprintf(value, sizeof value, "%.4f", r.value());
    return std::vector<std::string>{name, value, std::to_string(r.num) + "/" + std::to_string(r.den)};
  };

  std::string out = table({{"metric", "value", "ratio"},
                           metric("authority_acc", card.authority_acc),
                           metric("stale_precision", card.stale_precision),
                           metric("stale_recall", card.stale_recall),
                           metric("stale_f1", card.stale_f1),
                           metric("loc_precision", card.loc_precision),
                           metric("loc_recall", card.loc_recall)});
  if (!card.rows.empty()) {
    std::vector<std::vector<std::string>> rows{{"role", "scope", "authority", "gold", "claimed", "match"}};
    for (const auto& row : card.rows) {
      rows.push_back({row.key.role, row.key.scope, row.single_authority ? "single" : "multi",
                      claim_text(row.gold), row.claimed ? claim_text(*row.claimed) : "-",
                      row.match ? "yes" : "no"});
    }
    out += "\n" + table(rows);
  }
  return out;
}

}  // namespace substrate
