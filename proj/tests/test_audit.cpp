#include <doctest.h>

#include "support.hpp"
#include "tiesmatch/audit.hpp"
#include "tiesmatch/output.hpp"
#include "tiesmatch/pipeline.hpp"

using namespace tiesmatch;

namespace {

struct TightRun {
  Instance inst = testsupport::tight();
  RunResult run;
  Matching m{{{1, 0}, {2, 1}, {3, 3}}};
  Matching opt{{{0, 0}, {1, 1}, {2, 2}, {3, 3}}};

  TightRun() {
    ScriptedPolicy policy(parse_log(testsupport::read_data("tight.decisions")));
    run = tiesmatch::run(inst, policy, default_budget(inst));
  }
  AuditReport report() const { return audit(inst, run.graph, run.trace, m, opt); }
};

const Verdict& verdict(const std::vector<Verdict>& vs, const std::string& id) {
  for (const auto& v : vs)
    if (v.id == id) return v;
  FAIL("unknown check " << id);
  return vs.front();
}

const EdgeClass& edge(const Classification& c, Index a, Index b) {
  for (const auto& e : c.edges)
    if (e.edge.man == a && e.edge.woman == b) return e;
  FAIL("no such edge");
  return c.edges.front();
}

}  // namespace

TEST_CASE("tight example: flags derived from trace and G'") {
  TightRun t;
  const NodeFlags f = derive_flags(t.inst, t.run.graph, t.run.trace);
  CHECK(f.popular == std::vector<bool>{true, false, false, false});
  CHECK(f.final_status[0] == ManStatus::Stopped);
  CHECK(f.final_status[1] == ManStatus::Basic);
  CHECK(f.man_degree == std::vector<int>{0, 2, 2, 2});
  CHECK(f.woman_degree == std::vector<int>{2, 2, 0, 2});
  CHECK(f.did_reject(0, 0));
  CHECK_FALSE(f.did_reject(0, 1));
}

TEST_CASE("tight example: edge classification") {
  TightRun t;
  const Classification c = classify(t.inst, t.run.graph, t.run.trace, t.m, t.opt);
  CHECK(edge(c, 1, 0).in_m);
  CHECK(edge(c, 2, 1).in_m);
  CHECK(edge(c, 3, 3).in_m);
  CHECK(edge(c, 3, 3).in_opt);
  // (a1,b1) belongs to OPT, so it is not free.
  CHECK(edge(c, 1, 1).in_opt);
  CHECK_FALSE(edge(c, 1, 1).free());

  const auto& a3b0 = edge(c, 3, 0);
  REQUIRE(a3b0.free());
  CHECK(a3b0.input == Grade::Bad);
  CHECK(a3b0.output == Grade::Good);
  const auto& a2b3 = edge(c, 2, 3);
  REQUIRE(a2b3.free());
  CHECK(a2b3.input == Grade::Good);
  CHECK(a2b3.output == Grade::Bad);
  CHECK(c.good_inputs() == 1);
  CHECK(c.bad_outputs() == 1);
}

TEST_CASE("tight example: costs, components and verdicts") {
  TightRun t;
  const AuditReport r = t.report();
  CHECK(r.man_cost == std::vector<int>{0, 2, 3, 2});
  CHECK(r.woman_cost == std::vector<int>{2, 2, 0, 1});
  CHECK(r.totals.cost == 12);
  CHECK(r.totals.cost == 3 * int(r.totals.opt_size));
  CHECK(r.totals.cost == 4 * int(r.totals.m_size));
  CHECK(r.totals.effect == 0);

  int augmenting = 0, shared = 0, isolated = 0;
  for (const auto& c : r.components) {
    if (c.shape == Shape::MAugmentingPath) {
      ++augmenting;
      CHECK(c.length() == 5);
      CHECK(c.cost == 9);
      CHECK(c.nodes == std::vector<PersonId>{man(0), woman(0), man(1), woman(1), man(2), woman(2)});
      const NodeFlags f = derive_flags(t.inst, t.run.graph, t.run.trace);
      CHECK(points_right(t.inst, c, 0, f));
      CHECK(r.man_cost[1] + r.woman_cost[1] + r.man_cost[2] + r.woman_cost[2] == 7);
    } else if (c.shape == Shape::SharedEdge) {
      ++shared;
      CHECK(c.cost == 3);
    } else if (c.shape == Shape::IsolatedNode) {
      ++isolated;
    }
  }
  CHECK(augmenting == 1);
  CHECK(shared == 1);
  CHECK(isolated == 0);
  CHECK(r.all_pass());
  CHECK(r.first_failure().empty());
  CHECK(ratio_string(4, 3) == "4/3");
}

TEST_CASE("flipping b3's good input breaks the chain") {
  TightRun t;
  AuditReport r = t.report();
  for (auto& e : r.classification.edges)
    if (e.edge.man == 2 && e.edge.woman == 3) e.input = Grade::Bad;
  const auto vs = check_all(t.inst, r);
  CHECK_FALSE(verdict(vs, "ratio_chain").pass);
  CHECK_FALSE(verdict(vs, "double_bad").pass);
  CHECK_FALSE(verdict(vs, "inputs_cover_outputs").pass);
  CHECK(verdict(vs, "effect_identity").pass);
}

TEST_CASE("inconsistent audit inputs are rejected") {
  TightRun t;
  // M is stable but {(a2,b2)} alone is not.
  CHECK_THROWS_AS(audit(t.inst, t.run.graph, t.run.trace, t.m, Matching({{2, 2}})), AuditInputError);
  // (a0,b0) is not in G'.
  CHECK_THROWS_AS(audit(t.inst, t.run.graph, t.run.trace, Matching({{0, 0}}), t.opt), AuditInputError);
}

TEST_CASE("parallel copies: one to M, the other to OPT or free") {
  const Instance inst = parse_instance("men: a0\nwomen: b0\npref a0: b0\npref b0: a0\n");
  CanonicalFirstPolicy policy;
  const RunResult r = run(inst, policy, 100);
  REQUIRE(r.graph.multiplicity(0, 0) == 2);
  const Matching m({{0, 0}});
  const AuditReport rep = audit(inst, r.graph, r.trace, m, m);
  CHECK(rep.classification.edges[0].in_m);
  CHECK_FALSE(rep.classification.edges[0].in_opt);
  CHECK(rep.classification.edges[1].in_opt);
  CHECK_FALSE(rep.classification.edges[1].in_m);
  REQUIRE(rep.components.size() == 1);
  CHECK(rep.components[0].shape == Shape::TrivialCycle);
  CHECK(rep.components[0].cost == 4);
  CHECK(rep.all_pass());
  CHECK(ratio_string(1, 1) == "1");
}

TEST_CASE("empty instance passes vacuously with ratio 1") {
  const Instance inst = parse_instance("men:\nwomen:\n");
  CanonicalFirstPolicy policy;
  const Evaluation ev = evaluate(inst, policy, {});
  CHECK(ev.ok());
  CHECK(ev.oracle.max_cardinality == 0);
  CHECK(ratio_string(ev.oracle.max_cardinality, ev.m.size()) == "1");
  REQUIRE(ev.reports.size() == 1);
  CHECK(ev.reports[0].all_pass());
}

TEST_CASE("ratio strings") {
  CHECK(ratio_string(0, 0) == "1");
  CHECK(ratio_string(2, 0) == "inf");
  CHECK(ratio_string(6, 6) == "1");
  CHECK(ratio_string(8, 6) == "4/3");
  CHECK(ratio_string(5, 4) == "5/4");
}

TEST_CASE("check ids are stable") {
  CHECK(check_ids().size() == 13);
  CHECK(check_ids().front() == "double_bad");
  CHECK(check_ids().back() == "path_end");
}
