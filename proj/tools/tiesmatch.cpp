// Command-line front end. Exit codes:
//   0 ok, 1 check failed, 2 parse or usage error, 3 event budget exhausted,
//   4 instance too large for the oracle, 5 replay mismatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tiesmatch/fuzz.hpp"
#include "tiesmatch/output.hpp"
#include "tiesmatch/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tiesmatch;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3, kTooLarge = 4, kMismatch = 5 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct RunFlags {
  std::string instance_path;
  std::optional<std::uint64_t> seed;
  std::string policy_script;
  std::optional<std::size_t> alternation;
  std::size_t budget_factor = 50;
  std::size_t oracle_guard = kDefaultOracleGuard;
  std::string mutation = "none";
  std::string out;
  std::string format = "text";
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("instance", f.instance_path, "Instance file")->required();
  auto* seed = cmd->add_option("--seed", f.seed, "Seeded random policy");
  cmd->add_option("--policy-script", f.policy_script, "Decision log to replay")->excludes(seed);
  cmd->add_option("--alternation", f.alternation, "Pin every component alternation (0 or 1)");
  cmd->add_option("--budget-factor", f.budget_factor, "Event budget is factor * (|E| + 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mutation", f.mutation, "Engine mutation for testing")
      ->check(CLI::IsMember({"none", "no-forward", "no-special-reject", "no-promotion"}));
  cmd->add_option("--out", f.out, "Directory for output files");
  cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"text", "structured"}));
}

std::unique_ptr<Policy> make_policy(const RunFlags& f) {
  std::unique_ptr<Policy> p;
  if (!f.policy_script.empty())
    p = std::make_unique<ScriptedPolicy>(parse_log(read_file(f.policy_script)));
  else if (f.seed)
    p = std::make_unique<SeededRandomPolicy>(*f.seed);
  else
    p = std::make_unique<CanonicalFirstPolicy>();
  if (f.alternation) p = std::make_unique<AlternationOverride>(std::move(p), *f.alternation);
  return p;
}

PipelineOptions pipeline_options(const RunFlags& f) {
  PipelineOptions o;
  o.budget_factor = f.budget_factor;
  o.oracle_guard = f.oracle_guard;
  o.mutation = *mutation_from_string(f.mutation);
  return o;
}

void check_script_consumed(const Policy& p) {
  if (auto* s = dynamic_cast<const ScriptedPolicy*>(&p); s && !s->exhausted())
    throw ReplayMismatch("policy script has unused entries");
}

int cmd_solve(const RunFlags& f) {
  const Instance inst = parse_instance(read_file(f.instance_path));
  auto policy = make_policy(f);
  RunResult r = run(inst, *policy, default_budget(inst, f.budget_factor), engine_options(*mutation_from_string(f.mutation)));
  const Matching m = extract_matching(r.graph, *policy);
  check_script_consumed(*policy);

  const std::string matching_text = serialize_matching(inst, m);
  const std::string trace_text = serialize_trace(inst, r.trace);
  const std::string log_text = serialize_log(policy->log());
  if (!f.out.empty()) {
    write_file(fs::path(f.out) / "matching.tsv", matching_text);
    write_file(fs::path(f.out) / "trace.txt", trace_text);
    write_file(fs::path(f.out) / "decisions.log", log_text);
  }
  if (f.format == "structured") {
    nlohmann::ordered_json j;
    j["instance_digest"] = digest(serialize_instance(inst));
    j["events"] = r.trace.size();
    j["trace_digest"] = digest(trace_text);
    j["m_size"] = m.size();
    std::vector<std::vector<std::string>> pairs;
    for (const auto& e : m.pairs()) pairs.push_back({inst.name(man(e.man)), inst.name(woman(e.woman))});
    j["m"] = pairs;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << matching_text;
    std::cerr << "size " << m.size() << ", " << r.trace.size() << " events, trace " << digest(trace_text) << '\n';
  }
  return kOk;
}

int cmd_audit(RunFlags f) {
  const Instance inst = parse_instance(read_file(f.instance_path));
  auto policy = make_policy(f);
  const Evaluation ev = evaluate(inst, *policy, pipeline_options(f));
  if (ev.failure == kBudgetCheck) {
    std::cerr << "event budget exhausted\n";
    return kBudget;
  }
  check_script_consumed(*policy);
  const std::string report =
      f.format == "structured" ? report_json(inst, ev, f.seed) : report_text(inst, ev, f.seed);
  if (!f.out.empty()) {
    write_file(fs::path(f.out) / (f.format == "structured" ? "report.json" : "report.txt"), report);
    write_file(fs::path(f.out) / "trace.txt", ev.trace_text);
    write_file(fs::path(f.out) / "decisions.log", serialize_log(ev.log));
  }
  std::cout << report;
  return ev.ok() ? kOk : kCheckFailed;
}

int cmd_oracle(const std::string& path, std::size_t guard, const std::string& format) {
  const Instance inst = parse_instance(read_file(path));
  const OracleResult r = max_stable(inst, guard);
  if (format == "structured") {
    nlohmann::ordered_json j;
    j["max_cardinality"] = r.max_cardinality;
    j["min_cardinality"] = r.min_cardinality;
    j["stable_matchings"] = r.total_stable_count;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& w : r.witnesses) {
      std::vector<std::vector<std::string>> pairs;
      for (const auto& e : w.pairs()) pairs.push_back({inst.name(man(e.man)), inst.name(woman(e.woman))});
      ws.push_back(pairs);
    }
    j["witnesses"] = ws;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "max_cardinality: " << r.max_cardinality << '\n'
              << "min_cardinality: " << r.min_cardinality << '\n'
              << "stable_matchings: " << r.total_stable_count << '\n';
    for (const auto& w : r.witnesses) {
      std::cout << "witness:";
      for (const auto& e : w.pairs()) std::cout << " (" << inst.name(man(e.man)) << ',' << inst.name(woman(e.woman)) << ')';
      std::cout << '\n';
    }
  }
  return kOk;
}

int cmd_fuzz(const FuzzConfig& config, const std::string& out, const std::string& format) {
  const FuzzSummary s = run_fuzz(config);
  if (!out.empty())
    for (const auto& f : s.failures)
      write_file(fs::path(out) / ("bundle-" + std::to_string(f.instance_index) + ".json"), serialize_bundle(f.bundle));

  if (format == "structured") {
    nlohmann::ordered_json j;
    j["instances"] = s.instances;
    j["runs"] = s.runs;
    j["failures"] = s.failures_total;
    j["max_ratio"] = s.max_ratio_string();
    j["ratio_violations"] = s.ratio_violations;
    j["unstable_outputs"] = s.unstable_outputs;
    j["nondeterministic"] = s.nondeterministic;
    j["max_events"] = s.max_events;
    j["max_events_per_edge"] = s.max_events_per_edge;
    j["max_proposals_per_edge"] = s.max_proposals_per_edge;
    j["length5_paths"] = s.length5_paths;
    nlohmann::ordered_json by = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < failure_ids().size(); ++i)
      if (s.failures_by_check[i]) by[failure_ids()[i]] = s.failures_by_check[i];
    j["failures_by_check"] = by;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "instances: " << s.instances << '\n'
              << "runs: " << s.runs << '\n'
              << "failures: " << s.failures_total << '\n'
              << "max_ratio: " << s.max_ratio_string() << '\n'
              << "ratio_violations: " << s.ratio_violations << '\n'
              << "unstable_outputs: " << s.unstable_outputs << '\n'
              << "nondeterministic: " << s.nondeterministic << '\n'
              << "max_events: " << s.max_events << '\n'
              << "max_events_per_edge: " << s.max_events_per_edge << '\n'
              << "max_proposals_per_edge: " << s.max_proposals_per_edge << '\n'
              << "length5_paths: " << s.length5_paths << '\n';
    for (std::size_t i = 0; i < failure_ids().size(); ++i)
      if (s.failures_by_check[i]) std::cout << "  " << failure_ids()[i] << ": " << s.failures_by_check[i] << '\n';
    for (const auto& f : s.failures)
      std::cout << "bundle " << f.instance_index << ": " << f.bundle.check << '\n';
  }
  return s.failures_total ? kCheckFailed : kOk;
}

int cmd_replay(const std::string& path, std::size_t guard, const std::string& trace_out) {
  const ReproBundle bundle = parse_bundle(read_file(path));
  const ReplayOutcome r = replay(bundle, guard);
  std::cout << r.evaluation.trace_text;
  if (!trace_out.empty()) write_file(trace_out, r.evaluation.trace_text);
  std::cerr << "check: " << (r.evaluation.ok() ? "none" : r.evaluation.failure) << '\n';
  if (!r.trace_matches || !r.check_matches) {
    std::cerr << "not reproduced (trace " << (r.trace_matches ? "matches" : "differs") << ", expected check '"
              << bundle.check << "')\n";
    return kMismatch;
  }
  return kOk;
}

int cmd_show(const std::string& path) {
  const Instance inst = parse_instance(read_file(path));
  std::cout << serialize_instance(inst);
  std::cout << "# men " << inst.men_count() << ", women " << inst.women_count() << ", edges " << inst.edge_count()
            << ", digest " << digest(serialize_instance(inst)) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-proposal stable matching with ties of size two"};
  app.require_subcommand(1);

  RunFlags solve_flags, audit_flags;
  auto* solve = app.add_subcommand("solve", "Run the proposal algorithm and write M, trace and decision log");
  add_run_flags(solve, solve_flags);
  auto* audit_cmd = app.add_subcommand("audit", "Solve, compute OPT, and check the charging scheme");
  add_run_flags(audit_cmd, audit_flags);
  audit_cmd->add_option("--oracle-guard", audit_flags.oracle_guard, "Max |E| for the exhaustive oracle");

  std::string oracle_path, oracle_format = "text";
  std::size_t oracle_guard = kDefaultOracleGuard;
  auto* oracle = app.add_subcommand("oracle", "Enumerate stable matchings and report the maximum");
  oracle->add_option("instance", oracle_path)->required();
  oracle->add_option("--oracle-guard", oracle_guard);
  oracle->add_option("--format", oracle_format)->check(CLI::IsMember({"text", "structured"}));

  FuzzConfig fc;
  std::string fuzz_out, fuzz_format = "text", fuzz_mutation = "none";
  bool no_shrink = false;
  auto* fuzz = app.add_subcommand("fuzz", "Random instances x seeds x alternations, shrinking failures");
  fuzz->add_option("--count", fc.count);
  fuzz->add_option("--seed", fc.seed);
  fuzz->add_option("--max-men", fc.max_men)->check(CLI::PositiveNumber);
  fuzz->add_option("--max-women", fc.max_women)->check(CLI::PositiveNumber);
  fuzz->add_option("--edge-density", fc.edge_density);
  fuzz->add_option("--tie-probability", fc.tie_probability);
  fuzz->add_option("--policies", fc.policies_per_instance);
  fuzz->add_option("--budget-factor", fc.budget_factor)->check(CLI::PositiveNumber);
  fuzz->add_option("--max-edges", fc.max_edges);
  fuzz->add_option("--threads", fc.threads);
  fuzz->add_option("--mutation", fuzz_mutation)
      ->check(CLI::IsMember({"none", "no-forward", "no-special-reject", "no-promotion"}));
  fuzz->add_flag("--no-shrink", no_shrink);
  fuzz->add_option("--out", fuzz_out, "Directory for repro bundles");
  fuzz->add_option("--format", fuzz_format)->check(CLI::IsMember({"text", "structured"}));

  std::string bundle_path, replay_trace_out;
  std::size_t replay_guard = kDefaultOracleGuard;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a repro bundle");
  replay_cmd->add_option("bundle", bundle_path)->required();
  replay_cmd->add_option("--oracle-guard", replay_guard);
  replay_cmd->add_option("--trace-out", replay_trace_out);

  std::string show_path;
  auto* show = app.add_subcommand("show", "Print the canonical form of an instance");
  show->add_option("instance", show_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_flags);
    if (*audit_cmd) return cmd_audit(audit_flags);
    if (*oracle) return cmd_oracle(oracle_path, oracle_guard, oracle_format);
    if (*fuzz) {
      fc.mutation = *mutation_from_string(fuzz_mutation);
      fc.shrink = !no_shrink;
      return cmd_fuzz(fc, fuzz_out, fuzz_format);
    }
    if (*replay_cmd) return cmd_replay(bundle_path, replay_guard, replay_trace_out);
    if (*show) return cmd_show(show_path);
  } catch (const InstanceError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExhausted& e) {
    std::cerr << "event budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const InstanceTooLarge& e) {
    std::cerr << e.what() << '\n';
    return kTooLarge;
  } catch (const ReplayMismatch& e) {
    std::cerr << "replay mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed bundle: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
