#include "substrate/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "substrate/benchmark.hpp"
#include "substrate/lineage.hpp"
#include "substrate/log_file.hpp"
#include "substrate/resolver.hpp"
#include "substrate/store.hpp"

namespace substrate::cli {

namespace fs = std::filesystem;

namespace {

enum class OutputFormat { kText, kJson };

struct CliConfig {
  fs::path log_path = "substrate.log";
  OutputFormat output_format = OutputFormat::kText;
  bool allow_conflict = false;
  bool fsync = false;
};

// A store opened for writing: holds the lock and persists every new event.
struct WritableStore {
  explicit WritableStore(const CliConfig& config)
      : lock(config.log_path), store(read_log(config.log_path)) {
    writer = std::make_unique<LogWriter>(config.log_path, config.fsync);
    store.set_sink([w = writer.get()](const SubstrateEvent& e) { w->append(e); });
  }

  WriterLock lock;
  Store store;
  std::unique_ptr<LogWriter> writer;
};

Document read_json_file(const fs::path& path, ErrorCode on_bad) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SubstrateError(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Document doc = Document::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw SubstrateError(on_bad, path.string() + " is not valid JSON");
  return doc;
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SubstrateError(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

ArtifactId parse_id_arg(const std::string& text) {
  auto id = ArtifactId::try_parse(text);
  if (!id) throw SubstrateError(ErrorCode::kUnknownArtifact, "malformed artifact id '" + text + "'");
  return *id;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

constexpr std::string_view kInstanceSuffix = ".instance.json";
constexpr std::string_view kSnapshotSuffix = ".snapshot.json";

std::vector<fs::path> instance_files(const fs::path& path) {
  if (!fs::exists(path)) {
    throw SubstrateError(ErrorCode::kMalformedInput, "no such instance path " + path.string());
  }
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && ends_with(entry.path().filename().string(), kInstanceSuffix)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string instance_stem(const fs::path& path) {
  std::string name = path.filename().string();
  if (ends_with(name, kInstanceSuffix)) return name.substr(0, name.size() - kInstanceSuffix.size());
  if (ends_with(name, ".json")) return name.substr(0, name.size() - 5);
  return name;
}

}  // namespace

int exit_code_for(ErrorCode code, bool bench_command) {
  switch (code) {
    case ErrorCode::kValidationFailed:
    case ErrorCode::kSupersedeInactive:
    case ErrorCode::kAlreadyInactive:
    case ErrorCode::kNonFiniteNumber:
    case ErrorCode::kStaleDependency:
    case ErrorCode::kPlanMismatch:
      return kExitValidation;
    case ErrorCode::kMalformedInput:
    case ErrorCode::kBadParameters:
      return bench_command ? kExitBenchInput : kExitValidation;
    case ErrorCode::kAuthorityViolation:
    case ErrorCode::kAuthorityModeConflict:
      return kExitAuthority;
    case ErrorCode::kUnknownArtifact:
      return kExitUnknownArtifact;
    case ErrorCode::kUnknownRole:
      return kExitUnknownRole;
    case ErrorCode::kCorruptLog:
    case ErrorCode::kLockHeld:
    case ErrorCode::kIo:
      return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maintained-state artifact substrate: commit, resolve, plan and benchmark", "substrate"};
  app.require_subcommand(1);

  CliConfig config;
  std::string log_path = config.log_path.string();
  bool json = false;
  app.add_option("--log", log_path, "Log file path")->envname("SUBSTRATE_LOG");
  app.add_flag("--json", json, "Emit JSON instead of text");
  app.add_flag("--allow-conflict", config.allow_conflict,
               "Record commits that leave a SingleActive role in conflict instead of rejecting them");
  app.add_flag("--fsync", config.fsync, "fsync the log after every commit");

  std::string role_name, mode_name = "single", scope, file, id_text, produced_by;
  bool supersede_flag = false;

  auto* declare = app.add_subcommand("declare", "Declare a role and its authority mode");
  declare->add_option("role", role_name)->required();
  declare->add_option("--mode", mode_name, "single or multi")->check(CLI::IsMember({"single", "multi"}));

  auto add_commit_options = [&](CLI::App* sub) {
    sub->add_option("file", file, "Artifact draft document (JSON)")->required();
    sub->add_option("--scope", scope, "Scope used when the document has none");
    sub->add_option("--produced-by", produced_by, "Step id used when the document has none");
  };
  auto* commit = app.add_subcommand("commit", "Commit an artifact draft");
  add_commit_options(commit);
  commit->add_flag("--supersede", supersede_flag, "Commit as a superseding revision");
  auto* supersede = app.add_subcommand("supersede", "Commit a superseding artifact draft");
  add_commit_options(supersede);

  auto* resolve = app.add_subcommand("resolve", "Resolve the active artifact(s) for a role and scope");
  resolve->add_option("role", role_name)->required();
  resolve->add_option("scope", scope)->required();

  auto* show = app.add_subcommand("show", "Print one artifact record, pinned by id");
  show->add_option("id", id_text)->required();
  auto* snapshot = app.add_subcommand("snapshot", "Resolve every role with records in a scope");
  snapshot->add_option("scope", scope)->required();
  auto* plan = app.add_subcommand("plan", "Regeneration plan for a superseding artifact");
  plan->add_option("id", id_text)->required();
  auto* lineage_cmd = app.add_subcommand("lineage", "Lineage relations of an artifact");
  lineage_cmd->add_option("id", id_text)->required();
  auto* historical = app.add_subcommand("historical", "Mark an active artifact historical");
  historical->add_option("id", id_text)->required();

  auto* bench = app.add_subcommand("bench", "Benchmark instances and scoring");
  bench->require_subcommand(1);
  std::string family_name = "all", out_path, snapshot_path;
  std::uint64_t seed = 1;
  std::uint32_t count = 1, nodes = GeneratorParams{}.nodes;
  bool use_reference = false;
  auto* gen = bench->add_subcommand("gen", "Generate perturbation instances");
  gen->add_option("--family", family_name, "authority_swap, local_correction, branch_isolated, transitive_impact or all");
  gen->add_option("--seed", seed, "First seed");
  gen->add_option("--count", count, "Instances per family");
  gen->add_option("--nodes", nodes, "Artifacts per setup graph (5..10000)");
  gen->add_option("--out", out_path, "Output directory")->required();
  auto* solve = bench->add_subcommand("solve", "Write the reference engine's snapshot for an instance");
  solve->add_option("instance", file)->required();
  solve->add_option("--out", out_path, "Snapshot file (default stdout)");
  auto* score_cmd = bench->add_subcommand("score", "Score snapshots against instances");
  score_cmd->add_option("instances", file, "Instance file or directory of *.instance.json")->required();
  score_cmd->add_option("--snapshot", snapshot_path,
                        "Snapshot file, or directory of <name>.snapshot.json (default: beside each instance)");
  score_cmd->add_flag("--reference", use_reference, "Score the reference engine itself");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  config.log_path = log_path;
  config.output_format = json ? OutputFormat::kJson : OutputFormat::kText;
  const bool as_json = config.output_format == OutputFormat::kJson;
  const bool bench_command = bench->parsed();

  try {
    if (declare->parsed()) {
      WritableStore w(config);
      Role role{role_name, parse_authority_mode(mode_name)};
      w.store.declare_role(role);
      if (as_json) {
        out << canonical_json({{"role", role.name}, {"authority_mode", to_string(role.authority_mode)}}) << "\n";
      } else {
        out << "declared " << role.name << " " << to_string(role.authority_mode) << "\n";
      }
      return kExitOk;
    }

    if (commit->parsed() || supersede->parsed()) {
      const bool superseding = supersede->parsed() || supersede_flag;
      ArtifactRecord draft =
          draft_from_document(read_json_file(file, ErrorCode::kMalformedInput), {scope, produced_by});
      WritableStore w(config);
      CommitResult result;
      if (superseding) {
        result = w.store.commit_superseding(std::move(draft), config.allow_conflict);
      } else {
        result.id = w.store.commit_additive(std::move(draft), config.allow_conflict);
      }
      if (as_json) {
        Document displaced = Document::array();
        for (const auto& d : result.displaced) displaced.push_back(d.str());
        out << canonical_json({{"artifact_id", result.id.str()}, {"displaced", displaced}}) << "\n";
      } else {
        out << result.id.str() << "\n";
        for (const auto& d : result.displaced) out << "superseded " << d.str() << "\n";
      }
      return kExitOk;
    }

    if (historical->parsed()) {
      ArtifactId id = parse_id_arg(id_text);
      WritableStore w(config);
      w.store.mark_historical(id);
      if (as_json) {
        out << canonical_json({{"artifact_id", id.str()}, {"status", "historical"}}) << "\n";
      } else {
        out << "historical " << id.str() << "\n";
      }
      return kExitOk;
    }

    if (resolve->parsed() || show->parsed() || snapshot->parsed() || plan->parsed() ||
        lineage_cmd->parsed()) {
      const StoreState state = replay(read_log(config.log_path));
      if (resolve->parsed()) {
        Resolution r = resolve_active(state, role_name, scope);
        out << (as_json ? canonical_json(to_document(r)) : render_text(r)) << "\n";
        return r.kind == Resolution::Kind::kConflict ? kExitConflict : kExitOk;
      }
      if (show->parsed()) {
        const ArtifactRecord& record = resolve_pinned(state, parse_id_arg(id_text));
        out << (as_json ? canonical_json(to_document(record)) : to_document(record).dump(2)) << "\n";
        return kExitOk;
      }
      if (snapshot->parsed()) {
        auto snap = active_snapshot(state, scope);
        if (as_json) {
          Document doc = Document::object();
          for (const auto& [role, r] : snap) doc[role] = to_document(r);
          out << canonical_json(doc) << "\n";
        } else {
          for (const auto& [role, r] : snap) out << role << " " << render_text(r) << "\n";
        }
        return kExitOk;
      }
      if (plan->parsed()) {
        RegenerationPlan p = plan_regeneration(state, parse_id_arg(id_text));
        out << (as_json ? canonical_json(to_document(p)) + "\n" : render_text(p));
        return kExitOk;
      }
      LineageView view = lineage(state, parse_id_arg(id_text));
      out << (as_json ? canonical_json(to_document(view)) + "\n" : render_text(view));
      return kExitOk;
    }

    if (gen->parsed()) {
      std::vector<FamilyKind> kinds;
      if (family_name == "all") {
        kinds.assign(std::begin(kAllFamilyKinds), std::end(kAllFamilyKinds));
      } else {
        kinds.push_back(parse_family_kind(family_name));
      }
      Document written = Document::array();
      for (FamilyKind kind : kinds) {
        for (std::uint32_t i = 0; i < count; ++i) {
          BenchmarkInstance instance = generate_instance(kind, seed + i, {nodes});
          fs::path path = fs::path(out_path) / (std::string(to_string(kind)) + "-" +
                                                std::to_string(seed + i) + std::string(kInstanceSuffix));
          write_text_file(path, canonical_json(to_document(instance)) + "\n");
          written.push_back(path.string());
          if (!as_json) out << path.string() << "\n";
        }
      }
      if (as_json) out << canonical_json(written) << "\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      BenchmarkInstance instance =
          instance_from_document(read_json_file(file, ErrorCode::kMalformedInput));
      std::string text = canonical_json(to_document(reference_snapshot(instance))) + "\n";
      if (out_path.empty()) {
        out << text;
      } else {
        write_text_file(out_path, text);
      }
      return kExitOk;
    }

    if (score_cmd->parsed()) {
      std::vector<fs::path> instances = instance_files(file);
      Document results = Document::array();
      std::string text;
      double sums[6] = {0, 0, 0, 0, 0, 0};
      for (const auto& path : instances) {
        BenchmarkInstance instance =
            instance_from_document(read_json_file(path, ErrorCode::kMalformedInput));
        SystemSnapshot snap;
        if (use_reference) {
          snap = reference_snapshot(instance);
        } else {
          fs::path snap_path;
          if (!snapshot_path.empty() && !fs::is_directory(snapshot_path)) {
            snap_path = snapshot_path;
          } else {
            fs::path dir = snapshot_path.empty() ? path.parent_path() : fs::path(snapshot_path);
            snap_path = dir / (instance_stem(path) + std::string(kSnapshotSuffix));
          }
          if (!fs::exists(snap_path)) {
            throw SubstrateError(ErrorCode::kMalformedInput, "missing snapshot " + snap_path.string());
          }
          snap = snapshot_from_document(read_json_file(snap_path, ErrorCode::kMalformedInput));
        }
        Scorecard card = score(snap, instance);
        const Ratio metrics[6] = {card.authority_acc, card.stale_precision, card.stale_recall,
                                  card.stale_f1,      card.loc_precision,   card.loc_recall};
        for (int i = 0; i < 6; ++i) sums[i] += metrics[i].value();
        results.push_back({{"instance", instance_stem(path)}, {"scorecard", to_document(card)}});
        text += "== " + instance_stem(path) + " ==\n" + render_text(card) + "\n";
      }
      static constexpr const char* kNames[6] = {"authority_acc", "stale_precision", "stale_recall",
                                                "stale_f1",      "loc_precision",   "loc_recall"};
      Document summary{{"instances", instances.size()}};
      std::string summary_text = "summary over " + std::to_string(instances.size()) + " instance(s)\n";
      for (int i = 0; i < 6 && !instances.empty(); ++i) {
        double mean = sums[i] / static_cast<double>(instances.size());
        summary["mean_" + std::string(kNames[i])] = mean;
        char line[64];
        std::snprintf(line, sizeof line, "%-16s %.4f\n", kNames[i], mean);
        summary_text += line;
      }
      if (as_json) {
        out << canonical_json({{"results", results}, {"summary", summary}}) << "\n";
      } else {
        out << (instances.empty() ? std::string("no instances\n") : text + summary_text);
      }
      return kExitOk;
    }
  } catch (const SubstrateError& e) {
    if (as_json) {
      err << canonical_json({{"error", error_code_name(e.code())},
                             {"message", e.what()},
                             {"details", e.details()}})
          << "\n";
    } else {
      err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
      for (const auto& d : e.details()) err << "  " << d << "\n";
    }
    return exit_code_for(e.code(), bench_command);
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace substrate::cli
