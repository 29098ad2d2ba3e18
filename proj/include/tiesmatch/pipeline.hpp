#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tiesmatch/audit.hpp"
#include "tiesmatch/engine.hpp"
#include "tiesmatch/graph.hpp"
#include "tiesmatch/instance.hpp"
#include "tiesmatch/oracle.hpp"
#include "tiesmatch/policy.hpp"

namespace tiesmatch {

enum class Mutation : std::uint8_t { None, NoForward, NoSpecialReject, NoPromotion };

std::string_view to_string(Mutation m);
std::optional<Mutation> mutation_from_string(std::string_view s);
EngineOptions engine_options(Mutation m);

struct PipelineOptions {
  std::size_t budget_factor = 50;
  std::size_t oracle_guard = kDefaultOracleGuard;
  Mutation mutation = Mutation::None;
};

/// Failure identifiers raised outside the audit proper.
inline constexpr const char* kBudgetCheck = "budget";
inline constexpr const char* kStabilityCheck = "stability";
inline constexpr const char* kDeterminismCheck = "determinism";

/// One end-to-end run: proposal phase, output matching, oracle, audit
/// against every maximum stable witness.
struct Evaluation {
  std::optional<RunResult> run;  // empty when the budget ran out
  Matching m;
  DecisionLog log;
  std::string trace_text;
  std::size_t events = 0;
  std::vector<Edge> blocking;
  OracleResult oracle;
  std::vector<AuditReport> reports;  // parallel to oracle.witnesses
  std::string failure;               // first failing check id, empty when clean

  bool ok() const { return failure.empty(); }
};

/// `oracle` may carry a precomputed result for the instance; otherwise it
/// is computed here (and may throw InstanceTooLarge).
Evaluation evaluate(const Instance& instance, Policy& policy, const PipelineOptions& options,
                    const OracleResult* oracle = nullptr);

/// Structured key-value report, stable field order. `seed` is informational.
std::string report_json(const Instance& instance, const Evaluation& eval, std::optional<std::uint64_t> seed);
std::string report_text(const Instance& instance, const Evaluation& eval, std::optional<std::uint64_t> seed);

}  // namespace tiesmatch
