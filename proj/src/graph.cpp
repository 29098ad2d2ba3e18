#include "tiesmatch/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiesmatch {

ProposalGraph::ProposalGraph(Index men, Index women, std::vector<GraphEdge> edges)
    : men_(men), women_(women), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
}

int ProposalGraph::degree(PersonId p) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
    return p.side == Side::Man ? e.man == p.index : e.woman == p.index;
  }));
}

std::vector<std::size_t> ProposalGraph::incident(PersonId p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (p.side == Side::Man ? e.man == p.index : e.woman == p.index) out.push_back(i);
  }
  return out;
}

int ProposalGraph::multiplicity(Index man, Index woman) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
    return e.man == man && e.woman == woman;
  }));
}

Matching::Matching(const std::vector<Edge>& pairs) {
  for (const auto& e : pairs) {
    if (!by_man_.emplace(e.man, e.woman).second || !by_woman_.emplace(e.woman, e.man).second)
      throw std::invalid_argument("matching pairs are not node-disjoint");
  }
}

std::optional<Index> Matching::partner_of_man(Index m) const {
  auto it = by_man_.find(m);
  if (it == by_man_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> Matching::partner_of_woman(Index w) const {
  auto it = by_woman_.find(w);
  if (it == by_woman_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> Matching::pairs() const {
  std::vector<Edge> out;
  out.reserve(by_man_.size());
  for (const auto& [m, w] : by_man_) out.push_back({m, w});
  return out;
}

std::string serialize_matching(const Instance& instance, const Matching& m) {
  std::vector<std::string> lines;
  for (const auto& e : m.pairs())
    lines.push_back(instance.name(man(e.man)) + '\t' + instance.name(woman(e.woman)));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

}  // namespace tiesmatch
