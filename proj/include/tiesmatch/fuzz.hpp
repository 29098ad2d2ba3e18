#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tiesmatch/instance.hpp"
#include "tiesmatch/pipeline.hpp"

namespace tiesmatch {

struct FuzzConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  Index max_men = 6;
  Index max_women = 6;
  double edge_density = 0.5;     // (0, 1]
  double tie_probability = 0.5;  // [0, 1]
  std::size_t policies_per_instance = 3;
  std::size_t budget_factor = 50;
  std::size_t max_edges = kDefaultOracleGuard;
  Mutation mutation = Mutation::None;
  bool shrink = true;
  unsigned threads = 1;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Samples the edge set first, then orders each neighborhood at random and
/// merges adjacent entries into ties with `tie_probability`. Deterministic
/// in (config.seed, index).
Instance generate_instance(const FuzzConfig& config, std::size_t index);

/// Policy seed for the `slot`-th policy on the `index`-th instance.
std::uint64_t policy_seed(const FuzzConfig& config, std::size_t index, std::size_t slot);

/// Keeps only the listed people and the edges accepted by `keep_edge`.
/// Ties that lose a member become singletons.
Instance restrict_instance(const Instance& instance, const std::function<bool(PersonId)>& keep_person,
                           const std::function<bool(Index, Index)>& keep_edge);
/// Splits tie group `group` of `owner` into two singleton groups.
Instance untie(const Instance& instance, PersonId owner, std::size_t group);

struct ReproBundle {
  std::string instance_text;
  std::string log_text;
  std::string check;  // failing check id; empty for a passing run
  bool minimized = false;
  std::uint64_t seed = 0;
  std::size_t alternation = 0;
  Mutation mutation = Mutation::None;
  std::size_t budget_factor = 50;
  std::string trace_digest;
};

std::string serialize_bundle(const ReproBundle& bundle);
ReproBundle parse_bundle(std::string_view text);

/// Runs the full pipeline with SeededRandom(seed) behind an alternation
/// override.
Evaluation evaluate_seeded(const Instance& instance, std::uint64_t seed, std::size_t alternation,
                           const PipelineOptions& options, const OracleResult* oracle = nullptr);

/// Greedy deletion: drop a man, a woman, an edge, or split a tie; keep the
/// change whenever the same check still fails. Repeats to a fixed point.
Instance shrink(const Instance& instance, std::uint64_t seed, std::size_t alternation,
                const PipelineOptions& options, const std::string& check);

struct ReplayOutcome {
  Evaluation evaluation;
  bool trace_matches = true;  // vs. the bundle digest, when present
  bool check_matches = true;
};

/// Re-executes a bundle under a scripted policy. Throws ReplayMismatch on
/// candidate-set drift.
ReplayOutcome replay(const ReproBundle& bundle, std::size_t oracle_guard = kDefaultOracleGuard);

struct FuzzFailure {
  std::size_t instance_index = 0;
  ReproBundle bundle;
};

struct FuzzSummary {
  std::size_t instances = 0;
  std::size_t runs = 0;
  std::size_t failures_total = 0;
  std::vector<FuzzFailure> failures;  // shrunk bundles, at most one per instance
  std::size_t max_opt_num = 0;        // max ratio as a fraction
  std::size_t max_m_den = 1;
  double max_events_per_edge = 0.0;     // all trace events / max(|E|, 1)
  double max_proposals_per_edge = 0.0;  // PROPOSE events / max(|E|, 1)
  std::size_t max_events = 0;
  std::size_t ratio_violations = 0;
  std::size_t unstable_outputs = 0;
  std::size_t nondeterministic = 0;
  std::size_t ratio_not_one = 0;  // runs with |OPT| != |M|
  std::size_t length5_paths = 0;  // deep-checked M-augmenting paths
  std::size_t stable_cardinality_spread = 0;  // instances whose stable matchings differ in size
  std::vector<std::size_t> failures_by_check;  // count per id in failure_ids()

  double max_ratio() const { return max_m_den ? double(max_opt_num) / double(max_m_den) : 0.0; }
  std::string max_ratio_string() const;
};

/// Runs count x policies x {alternation 0, 1}: solve, oracle, audit, and a
/// replay of each decision log.
FuzzSummary run_fuzz(const FuzzConfig& config);

/// Adds `part` into `into`; failures are appended in order.
void merge(FuzzSummary& into, const FuzzSummary& part);

/// All failure ids the fuzzer can report.
const std::vector<std::string>& failure_ids();

}  // namespace tiesmatch
