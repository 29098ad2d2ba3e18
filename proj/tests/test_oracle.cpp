#include <doctest.h>

#include "support.hpp"
#include "tiesmatch/fuzz.hpp"
#include "tiesmatch/oracle.hpp"
#include "tiesmatch/output.hpp"

using namespace tiesmatch;

namespace {

// Every matching over subsets of E, filtered by stability.
std::vector<Matching> naive_stable(const Instance& inst) {
  const auto& es = inst.edges();
  std::vector<Matching> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << es.size()); ++mask) {
    std::vector<Edge> pick;
    std::vector<bool> mu(inst.men_count()), wu(inst.women_count());
    bool ok = true;
    for (std::size_t i = 0; i < es.size() && ok; ++i)
      if (mask >> i & 1) {
        ok = !mu[es[i].man] && !wu[es[i].woman];
        mu[es[i].man] = wu[es[i].woman] = true;
        pick.push_back(es[i]);
      }
    if (!ok) continue;
    Matching m(pick);
    if (is_stable(inst, m)) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("tight example has a unique maximum stable matching of size 4") {
  const OracleResult r = max_stable(testsupport::tight());
  CHECK(r.max_cardinality == 4);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0] == Matching({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  CHECK(r.min_cardinality == 2);  // e.g. {(a3,b0),(a2,b1)}
}

TEST_CASE("single pair") {
  const OracleResult r = max_stable(parse_instance("men: a0\nwomen: b0\npref a0: b0\npref b0: a0\n"));
  CHECK(r.max_cardinality == 1);
  CHECK(r.total_stable_count == 1);
}

TEST_CASE("empty instance has exactly the empty stable matching") {
  const OracleResult r = max_stable(parse_instance("men:\nwomen:\n"));
  CHECK(r.max_cardinality == 0);
  CHECK(r.total_stable_count == 1);
  CHECK(r.witnesses.size() == 1);
}

TEST_CASE("guard refuses large instances") {
  FuzzConfig config;
  config.max_edges = 100;
  config.edge_density = 1.0;
  config.max_men = config.max_women = 6;
  for (std::size_t i = 0;; ++i) {
    const Instance inst = generate_instance(config, i);
    if (inst.edge_count() <= 24) continue;
    CHECK_THROWS_AS(max_stable(inst), InstanceTooLarge);
    CHECK_NOTHROW(max_stable(inst, inst.edge_count()));
    break;
  }
}

TEST_CASE("pruned search agrees with naive enumeration") {
  FuzzConfig config;
  config.seed = 11;
  config.max_men = config.max_women = 4;
  config.tie_probability = 0.6;
  for (std::size_t i = 0; i < 300; ++i) {
    const Instance inst = generate_instance(config, i);
    REQUIRE(enumerate_stable(inst) == naive_stable(inst));
  }
}

TEST_CASE("strict instances: all stable matchings share one size") {
  FuzzConfig config;
  config.seed = 3;
  config.tie_probability = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const OracleResult r = max_stable(generate_instance(config, i));
    CHECK(r.min_cardinality == r.max_cardinality);
  }
}
