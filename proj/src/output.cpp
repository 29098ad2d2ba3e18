#include "tiesmatch/output.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiesmatch {

ProposalGraph build_graph(const Instance& instance, const EngineState& state) {
  std::vector<GraphEdge> edges;
  for (Index w = 0; w < instance.women_count(); ++w)
    for (auto t : state.held[w]) edges.push_back({t.man, w, t.token});
  return ProposalGraph(instance.men_count(), instance.women_count(), std::move(edges));
}

ProposalGraph Engine::graph() const { return build_graph(*instance_, state_); }

namespace {

// Node numbering for the walk: men [0, men), women [men, men + women).
struct Walker {
  const ProposalGraph& g;
  std::vector<std::vector<std::size_t>> adj;  // node -> incident edge ids

  explicit Walker(const ProposalGraph& graph) : g(graph) {
    adj.resize(static_cast<std::size_t>(g.men_count() + g.women_count()));
    const auto& es = g.edges();
    for (std::size_t i = 0; i < es.size(); ++i) {
      adj[es[i].man].push_back(i);
      adj[g.men_count() + es[i].woman].push_back(i);
      if (adj[es[i].man].size() > 2 || adj[g.men_count() + es[i].woman].size() > 2)
        throw std::invalid_argument("proposal graph has a node of degree > 2");
    }
  }

  std::size_t other_end(std::size_t edge, std::size_t node) const {
    const auto& e = g.edges()[edge];
    const std::size_t m = e.man;
    const std::size_t w = g.men_count() + e.woman;
    return node == m ? w : m;
  }

  /// Edge sequence of the walk starting at `start` along `first`.
  std::vector<std::size_t> walk(std::size_t start, std::size_t first) const {
    std::vector<std::size_t> seq{first};
    std::size_t node = other_end(first, start);
    std::size_t prev = first;
    while (node != start) {
      std::size_t next = adj[node].size() == 2 ? (adj[node][0] == prev ? adj[node][1] : adj[node][0])
                                               : SIZE_MAX;
      if (next == SIZE_MAX) break;
      seq.push_back(next);
      node = other_end(next, node);
      prev = next;
    }
    return seq;
  }
};

}  // namespace

Matching extract_matching(const ProposalGraph& graph, Policy& policy) {
  Walker wk(graph);
  const std::size_t n = wk.adj.size();
  const auto men = static_cast<std::size_t>(graph.men_count());
  std::vector<bool> seen(n, false);
  std::vector<Edge> chosen;

  auto label = [&](std::size_t node) {
    return node < men ? "m" + std::to_string(node) : "w" + std::to_string(node - men);
  };

  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s] || wk.adj[s].empty()) continue;

    // Collect the component, then pick its walk start.
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (auto e : wk.adj[comp[i]]) {
        auto o = wk.other_end(e, comp[i]);
        if (!seen[o]) {
          seen[o] = true;
          comp.push_back(o);
        }
      }
    const bool cycle = std::all_of(comp.begin(), comp.end(), [&](auto v) { return wk.adj[v].size() == 2; });

    std::size_t start;
    if (cycle) {
      start = *std::min_element(comp.begin(), comp.end());
    } else {
      start = SIZE_MAX;
      for (auto v : comp)
        if (wk.adj[v].size() == 1) start = std::min(start, v);
    }
    // First edge: toward the smaller neighbor.
    std::size_t first = wk.adj[start][0];
    if (wk.adj[start].size() == 2 &&
        wk.other_end(wk.adj[start][1], start) < wk.other_end(first, start))
      first = wk.adj[start][1];

    const auto seq = wk.walk(start, first);
    std::size_t alternation = 0;
    const bool two_choices = seq.size() % 2 == 0 && seq.size() >= (cycle ? 4u : 2u);
    if (two_choices) {
      DecisionPoint point{DecisionKind::ComponentAlternation,
                          std::string(cycle ? "cycle@" : "path@") + label(start), {"first", "second"}};
      alternation = policy.decide(point);
    }
    for (std::size_t i = alternation; i < seq.size(); i += 2) {
      const auto& e = graph.edges()[seq[i]];
      chosen.push_back({e.man, e.woman});
    }
  }
  return Matching(chosen);
}

std::vector<Edge> blocking_pairs(const Instance& instance, const Matching& matching) {
  std::vector<Edge> out;
  for (const auto& e : instance.edges()) {
    const bool man_wants = instance.prefers(man(e.man), e.woman, matching.partner_of_man(e.man));
    const bool woman_wants = instance.prefers(woman(e.woman), e.man, matching.partner_of_woman(e.woman));
    if (man_wants && woman_wants) out.push_back(e);
  }
  return out;
}

}  // namespace tiesmatch
