#pragma once

#include <vector>

#include "tiesmatch/engine.hpp"
#include "tiesmatch/graph.hpp"
#include "tiesmatch/instance.hpp"
#include "tiesmatch/policy.hpp"

namespace tiesmatch {

/// One multiedge per held token.
ProposalGraph build_graph(const Instance& instance, const EngineState& state);

/// Maximum matching of a max-degree-2 multigraph that covers every
/// degree-2 node. Components are walked from their smallest node (men
/// before women); alternation 0 takes the first edge of the walk. Even
/// paths and cycles of length >= 4 ask the policy for the alternation.
Matching extract_matching(const ProposalGraph& graph, Policy& policy);

/// Pairs (a, b) in E where each side is unmatched or strictly prefers the
/// other to its partner. Empty iff the matching is (weakly) stable.
std::vector<Edge> blocking_pairs(const Instance& instance, const Matching& matching);

inline bool is_stable(const Instance& instance, const Matching& matching) {
  return blocking_pairs(instance, matching).empty();
}

}  // namespace tiesmatch
