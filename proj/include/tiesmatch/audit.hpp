#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tiesmatch/engine.hpp"
#include "tiesmatch/graph.hpp"
#include "tiesmatch/instance.hpp"

namespace tiesmatch {

/// Raised when the audit inputs are inconsistent (OPT unstable, M not a
/// subgraph of G'). Check failures are verdicts, not exceptions.
class AuditInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Facts about people, derived only from the trace and G'.
struct NodeFlags {
  std::vector<bool> popular;              // per woman: rejected at least once
  std::vector<ManStatus> final_status;    // per man
  std::vector<int> man_degree;            // in G'
  std::vector<int> woman_degree;          // in G'
  std::set<std::pair<Index, Index>> rejected;  // (woman, man): she rejected him at least once

  int degree(PersonId p) const { return p.side == Side::Man ? man_degree[p.index] : woman_degree[p.index]; }
  bool successful(PersonId p) const { return degree(p) == 2; }
  bool did_reject(Index w, Index m) const { return rejected.contains({w, m}); }
};

NodeFlags derive_flags(const Instance& instance, const ProposalGraph& graph, const Trace& trace);

enum class Grade : std::uint8_t { Good, Bad };

struct EdgeClass {
  GraphEdge edge;
  bool in_m = false;
  bool in_opt = false;
  Grade input = Grade::Good;   // meaningful only when free()
  Grade output = Grade::Good;  // meaningful only when free()

  bool free() const { return !in_m && !in_opt; }
};

struct Classification {
  NodeFlags flags;
  std::vector<EdgeClass> edges;  // parallel to graph.edges()

  bool has_good_input(Index w) const;
  bool has_bad_output(Index m) const;
  int good_inputs() const;
  int bad_outputs() const;
};

/// Associates every G' edge with M, OPT or neither and grades the free
/// ones. Of two parallel copies, one goes to M and the other to OPT when
/// OPT has the pair; otherwise the other copy is free.
Classification classify(const Instance& instance, const ProposalGraph& graph, const Trace& trace,
                        const Matching& m, const Matching& opt);

/// Men: deg + 1 with a bad output. Women: deg - 1 with a good input.
int node_cost(PersonId p, const Classification& c);

enum class Shape : std::uint8_t {
  IsolatedNode,
  TrivialCycle,
  SharedEdge,
  AlternatingPath,
  AlternatingCycle,
  OptAugmentingPath,
  MAugmentingPath,
};

std::string_view to_string(Shape s);

struct Component {
  Shape shape = Shape::IsolatedNode;
  /// Walk order. M-augmenting paths start at the man endpoint:
  /// a0 b0 a1 b1 ... ak bk with (ai, bi) in OPT.
  std::vector<PersonId> nodes;
  std::vector<Edge> opt_pairs;
  std::vector<Edge> m_pairs;
  int opt_count = 0;
  int m_count = 0;
  int cost = 0;

  std::size_t length() const { return static_cast<std::size_t>(opt_count + m_count); }
};

/// Components of the multigraph OPT + M over all of A and B. Costs are
/// filled in when a classification is given.
std::vector<Component> decompose(const Instance& instance, const Matching& m, const Matching& opt,
                                  const ProposalGraph& graph, const Classification* costs = nullptr);

/// For an M-augmenting component a0 b0 ... ak bk and 0 <= i < k: b_i
/// strictly prefers a_{i+1} to a_i, or is indifferent and a_{i+1} ended
/// the run promoted.
bool points_right(const Instance& instance, const Component& path, std::size_t i, const NodeFlags& flags);

struct Verdict {
  std::string id;
  bool pass = true;
  std::string witness;  // first counterexample when failing
};

struct Totals {
  int sum_degree = 0;
  int cost = 0;
  int effect = 0;
  int good_inputs = 0;
  int bad_outputs = 0;
  std::size_t m_size = 0;
  std::size_t opt_size = 0;
};

struct AuditReport {
  Classification classification;
  std::vector<int> man_cost;
  std::vector<int> woman_cost;
  std::vector<Component> components;
  Totals totals;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
  /// Id of the first failing check, or empty.
  std::string first_failure() const;
};

/// Stable identifiers of every check, in report order.
const std::vector<std::string>& check_ids();

/// Evaluates every check against already computed artifacts.
std::vector<Verdict> check_all(const Instance& instance, const AuditReport& report);

/// classify + costs + decompose + check_all.
AuditReport audit(const Instance& instance, const ProposalGraph& graph, const Trace& trace,
                  const Matching& m, const Matching& opt);

/// "p/q" in lowest terms; "1" when both matchings are empty.
std::string ratio_string(std::size_t opt, std::size_t m);

}  // namespace tiesmatch
