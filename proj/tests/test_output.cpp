#include <doctest.h>

#include <functional>

#include "support.hpp"
#include "tiesmatch/fuzz.hpp"
#include "tiesmatch/output.hpp"

using namespace tiesmatch;

namespace {

Matching extract(const ProposalGraph& g, std::size_t alternation) {
  AlternationOverride policy(std::make_unique<CanonicalFirstPolicy>(), alternation);
  return extract_matching(g, policy);
}

ProposalGraph tight_graph() {
  // Final holdings of the tight example.
  return ProposalGraph(4, 4, {{3, 0, 2}, {1, 0, 2}, {2, 1, 2}, {1, 1, 1}, {3, 3, 1}, {2, 3, 1}});
}

// Largest matching of g that covers every degree-2 node, by exhaustion.
std::size_t brute_best(const ProposalGraph& g) {
  const auto& es = g.edges();
  std::size_t best = 0;
  bool found = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << es.size()); ++mask) {
    std::vector<int> mdeg(g.men_count()), wdeg(g.women_count());
    std::size_t size = 0;
    bool ok = true;
    for (std::size_t i = 0; i < es.size() && ok; ++i)
      if (mask >> i & 1) {
        ok = ++mdeg[es[i].man] == 1 && ++wdeg[es[i].woman] == 1;
        ++size;
      }
    if (!ok) continue;
    for (Index m = 0; m < g.men_count() && ok; ++m) ok = g.degree(man(m)) < 2 || mdeg[m] == 1;
    for (Index w = 0; w < g.women_count() && ok; ++w) ok = g.degree(woman(w)) < 2 || wdeg[w] == 1;
    if (ok) {
      found = true;
      best = std::max(best, size);
    }
  }
  REQUIRE(found);
  return best;
}

}  // namespace

TEST_CASE("tight 6-cycle: alternation 0 gives the published M") {
  const auto g = tight_graph();
  CHECK(extract(g, 0) == Matching({{1, 0}, {2, 1}, {3, 3}}));
  CHECK(extract(g, 1) == Matching({{1, 1}, {2, 3}, {3, 0}}));
}

TEST_CASE("parallel pair is forced and asks nothing") {
  const ProposalGraph g(1, 1, {{0, 0, 1}, {0, 0, 2}});
  CanonicalFirstPolicy policy;
  CHECK(extract_matching(g, policy) == Matching({{0, 0}}));
  CHECK(policy.log().empty());
}

TEST_CASE("odd path takes both end edges") {
  // a0 - b0 - a1 - b1
  const ProposalGraph g(2, 2, {{0, 0, 1}, {1, 0, 1}, {1, 1, 2}});
  CanonicalFirstPolicy policy;
  CHECK(extract_matching(g, policy) == Matching({{0, 0}, {1, 1}}));
  CHECK(policy.log().empty());
}

TEST_CASE("even path asks for an alternation") {
  // a0 - b0 - a1
  const ProposalGraph g(2, 1, {{0, 0, 1}, {1, 0, 1}});
  CHECK(extract(g, 0) == Matching({{0, 0}}));
  CHECK(extract(g, 1) == Matching({{1, 0}}));
}

TEST_CASE("empty graph gives an empty matching") {
  CanonicalFirstPolicy policy;
  CHECK(extract_matching(ProposalGraph(3, 2, {}), policy).empty());
}

TEST_CASE("degree above two is rejected") {
  const ProposalGraph g(3, 1, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}});
  CanonicalFirstPolicy policy;
  CHECK_THROWS_AS(extract_matching(g, policy), std::invalid_argument);
}

TEST_CASE("extraction is maximum and covers degree-2 nodes on random runs") {
  FuzzConfig config;
  config.seed = 5;
  for (std::size_t i = 0; i < 300; ++i) {
    const Instance inst = generate_instance(config, i);
    SeededRandomPolicy run_policy(i);
    const RunResult r = run(inst, run_policy, default_budget(inst));
    const std::size_t best = brute_best(r.graph);
    for (std::size_t alt = 0; alt < 2; ++alt) {
      const Matching m = extract(r.graph, alt);
      CHECK(m.size() == best);
      for (const auto& e : m.pairs()) CHECK(r.graph.multiplicity(e.man, e.woman) > 0);
      for (Index a = 0; a < inst.men_count(); ++a)
        if (r.graph.degree(man(a)) == 2) CHECK(m.partner_of_man(a).has_value());
      for (Index b = 0; b < inst.women_count(); ++b)
        if (r.graph.degree(woman(b)) == 2) CHECK(m.partner_of_woman(b).has_value());
    }
  }
}

TEST_CASE("blocking pairs on the tight instance") {
  const Instance inst = testsupport::tight();
  CHECK(blocking_pairs(inst, Matching({{1, 0}, {2, 1}, {3, 3}})).empty());
  CHECK(blocking_pairs(inst, Matching({{0, 0}, {1, 1}, {2, 2}, {3, 3}})).empty());
  CHECK(blocking_pairs(inst, Matching()).size() == 8);
  // a2 strictly prefers the free b1 and b3 to b2.
  CHECK(blocking_pairs(inst, Matching({{2, 2}})) ==
        std::vector<Edge>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 3}, {3, 0}, {3, 3}});
}

TEST_CASE("indifference never blocks") {
  const Instance inst = parse_instance(
      "men: a0 a1\nwomen: b0 b1\npref a0: (b0 b1)\npref a1: b0\npref b0: (a0 a1)\npref b1: a0\n");
  CHECK(is_stable(inst, Matching({{0, 0}})));
  CHECK(is_stable(inst, Matching({{0, 1}, {1, 0}})));
  CHECK_FALSE(is_stable(inst, Matching({{0, 1}})));
}

TEST_CASE("matching text is sorted by names") {
  const Instance inst = testsupport::tight();
  CHECK(serialize_matching(inst, Matching({{3, 3}, {1, 0}, {2, 1}})) == "a1\tb0\na2\tb1\na3\tb3\n");
  CHECK_THROWS_AS(Matching({{0, 0}, {1, 0}}), std::invalid_argument);
}
