#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiesmatch/instance.hpp"

namespace tiesmatch {

/// One held proposal at run end: `woman` holds token `token` (1 or 2) of `man`.
struct GraphEdge {
  Index man = 0;
  Index woman = 0;
  int token = 1;

  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

/// G': the bipartite multigraph of proposals held when the proposal phase
/// ends. Parallel edges appear when a woman holds both tokens of one man.
class ProposalGraph {
 public:
  ProposalGraph() = default;
  ProposalGraph(Index men, Index women, std::vector<GraphEdge> edges);

  Index men_count() const { return men_; }
  Index women_count() const { return women_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  int degree(PersonId p) const;
  /// Edge indices incident to p.
  std::vector<std::size_t> incident(PersonId p) const;
  /// Number of (man, woman) edges, counting parallels.
  int multiplicity(Index man, Index woman) const;

 private:
  Index men_ = 0;
  Index women_ = 0;
  std::vector<GraphEdge> edges_;
};

/// Node-disjoint set of (man, woman) pairs.
class Matching {
 public:
  Matching() = default;
  /// Throws std::invalid_argument when two pairs share an endpoint.
  explicit Matching(const std::vector<Edge>& pairs);

  std::size_t size() const { return by_man_.size(); }
  bool empty() const { return by_man_.empty(); }
  std::optional<Index> partner_of_man(Index m) const;
  std::optional<Index> partner_of_woman(Index w) const;
  std::optional<Index> partner(PersonId p) const {
    return p.side == Side::Man ? partner_of_man(p.index) : partner_of_woman(p.index);
  }
  bool contains(Index m, Index w) const { return partner_of_man(m) == w; }
  /// Pairs ordered by man index.
  std::vector<Edge> pairs() const;

  friend bool operator==(const Matching& a, const Matching& b) { return a.by_man_ == b.by_man_; }
  friend bool operator<(const Matching& a, const Matching& b) { return a.by_man_ < b.by_man_; }

 private:
  std::map<Index, Index> by_man_;
  std::map<Index, Index> by_woman_;
};

/// `man<TAB>woman` lines sorted lexicographically.
std::string serialize_matching(const Instance& instance, const Matching& m);

}  // namespace tiesmatch
