#include <doctest.h>

#include "support.hpp"
#include "tiesmatch/engine.hpp"
#include "tiesmatch/policy.hpp"

using namespace tiesmatch;

namespace {

DecisionPoint point(DecisionKind kind, std::size_t n) {
  DecisionPoint p{kind, "ctx", {}};
  for (std::size_t i = 0; i < n; ++i) p.candidates.push_back("c" + std::to_string(i));
  return p;
}

}  // namespace

TEST_CASE("canonical-first always picks index 0 and logs it") {
  CanonicalFirstPolicy p;
  CHECK(p.decide(point(DecisionKind::BounceChoice, 3)) == 0);
  REQUIRE(p.log().size() == 1);
  CHECK(p.log()[0].kind == DecisionKind::BounceChoice);
  CHECK(p.log()[0].candidate_count == 3);
}

TEST_CASE("empty candidate list is a programming error") {
  CanonicalFirstPolicy p;
  CHECK_THROWS_AS(p.decide(point(DecisionKind::NextProposer, 0)), std::logic_error);
}

TEST_CASE("seeded random is reproducible and in range") {
  SeededRandomPolicy a(42), b(42);
  for (int i = 0; i < 200; ++i) {
    const auto pa = a.decide(point(DecisionKind::RejectChoice, 1 + i % 5));
    CHECK(pa == b.decide(point(DecisionKind::RejectChoice, 1 + i % 5)));
    CHECK(pa < std::size_t(1 + i % 5));
  }
  CHECK(a.log() == b.log());
}

TEST_CASE("scripted policy replays and detects drift") {
  DecisionLog script{{DecisionKind::NextProposer, 2, 3, ""}, {DecisionKind::TargetTieBreak, 1, 2, ""}};
  ScriptedPolicy p(script);
  CHECK(p.decide(point(DecisionKind::NextProposer, 3)) == 2);
  CHECK_THROWS_AS(p.decide(point(DecisionKind::TargetTieBreak, 3)), ReplayMismatch);

  ScriptedPolicy q(script);
  q.decide(point(DecisionKind::NextProposer, 3));
  CHECK_THROWS_AS(q.decide(point(DecisionKind::BounceChoice, 2)), ReplayMismatch);

  ScriptedPolicy r(script);
  r.decide(point(DecisionKind::NextProposer, 3));
  r.decide(point(DecisionKind::TargetTieBreak, 2));
  CHECK(r.exhausted());
  CHECK_THROWS_AS(r.decide(point(DecisionKind::NextProposer, 1)), ReplayMismatch);
}

TEST_CASE("empty log on a nonempty instance is a mismatch") {
  ScriptedPolicy p({});
  CHECK_THROWS_AS(run(testsupport::tight(), p, 1000), ReplayMismatch);
}

TEST_CASE("log text round-trips and rejects malformed lines") {
  DecisionLog log{{DecisionKind::NextProposer, 6, 8, ""},
                  {DecisionKind::SpecialRejectChoice, 1, 2, ""},
                  {DecisionKind::ComponentAlternation, 0, 2, ""}};
  const std::string text = serialize_log(log);
  CHECK(text == "0 NextProposer 6 8\n1 SpecialRejectChoice 1 2\n2 ComponentAlternation 0 2\n");
  CHECK(parse_log(text) == log);
  CHECK_THROWS_AS(parse_log("0 NextProposer 3 3\n"), ReplayMismatch);
  CHECK_THROWS_AS(parse_log("0 Whatever 0 1\n"), ReplayMismatch);
  CHECK_THROWS_AS(parse_log("1 NextProposer 0 1\n"), ReplayMismatch);
  CHECK_THROWS_AS(parse_log("0 NextProposer\n"), ReplayMismatch);
}

TEST_CASE("alternation override pins only component alternation") {
  AlternationOverride p(std::make_unique<ScriptedPolicy>(DecisionLog{{DecisionKind::BounceChoice, 1, 2, ""}}), 1);
  CHECK(p.decide(point(DecisionKind::ComponentAlternation, 2)) == 1);
  CHECK(p.decide(point(DecisionKind::BounceChoice, 2)) == 1);
  CHECK(p.decide(point(DecisionKind::ComponentAlternation, 1)) == 0);
  CHECK(p.log().size() == 3);
}

TEST_CASE("the shipped tight log reproduces its trace") {
  ScriptedPolicy p(parse_log(testsupport::read_data("tight.decisions")));
  const Instance inst = testsupport::tight();
  const RunResult r = run(inst, p, default_budget(inst));
  CHECK(serialize_trace(inst, r.trace) == testsupport::read_data("tight.trace"));
}
