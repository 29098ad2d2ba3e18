#include <doctest.h>

#include "support.hpp"
#include "tiesmatch/fuzz.hpp"

using namespace tiesmatch;

TEST_CASE("bundle JSON round-trips") {
  ReproBundle b;
  b.instance_text = serialize_instance(testsupport::tight());
  b.log_text = testsupport::read_data("tight.decisions");
  b.check = "path_interior";
  b.minimized = true;
  b.seed = 18446744073709551615ULL;
  b.alternation = 1;
  b.mutation = Mutation::NoForward;
  b.budget_factor = 40;
  b.trace_digest = "0123456789abcdef";
  const ReproBundle c = parse_bundle(serialize_bundle(b));
  CHECK(c.instance_text == b.instance_text);
  CHECK(c.log_text == b.log_text);
  CHECK(c.check == b.check);
  CHECK(c.minimized);
  CHECK(c.seed == b.seed);
  CHECK(c.alternation == 1);
  CHECK(c.mutation == Mutation::NoForward);
  CHECK(c.budget_factor == 40);
  CHECK(c.trace_digest == b.trace_digest);
}

TEST_CASE("the shipped tight bundle replays to the golden trace") {
  const ReplayOutcome r = replay(parse_bundle(testsupport::read_data("tight.bundle.json")));
  CHECK(r.trace_matches);
  CHECK(r.check_matches);
  CHECK(r.evaluation.trace_text == testsupport::read_data("tight.trace"));
  CHECK(r.evaluation.m.size() == 3);
}

TEST_CASE("replay with an empty log is a mismatch") {
  ReproBundle b;
  b.instance_text = serialize_instance(testsupport::tight());
  CHECK_THROWS_AS(replay(b), ReplayMismatch);
}

TEST_CASE("replay with leftover entries is a mismatch") {
  ReproBundle b = parse_bundle(testsupport::read_data("tight.bundle.json"));
  b.log_text += "19 NextProposer 0 1\n";
  CHECK_THROWS_AS(replay(b), ReplayMismatch);
}

TEST_CASE("small clean campaign") {
  FuzzConfig config;
  config.count = 60;
  config.seed = 17;
  const FuzzSummary s = run_fuzz(config);
  CHECK(s.instances == 60);
  CHECK(s.runs == 60 * 3 * 2);
  CHECK(s.failures_total == 0);
  CHECK(s.nondeterministic == 0);
  CHECK(3 * s.max_opt_num <= 4 * s.max_m_den);
}

TEST_CASE("threaded campaign matches the sequential one") {
  FuzzConfig config;
  config.count = 80;
  config.seed = 23;
  config.mutation = Mutation::NoPromotion;
  config.shrink = false;
  const FuzzSummary one = run_fuzz(config);
  config.threads = 4;
  const FuzzSummary four = run_fuzz(config);
  CHECK(one.failures_total == four.failures_total);
  CHECK(one.failures_by_check == four.failures_by_check);
  CHECK(one.max_events == four.max_events);
  REQUIRE(one.failures.size() == four.failures.size());
  for (std::size_t i = 0; i < one.failures.size(); ++i) {
    CHECK(one.failures[i].instance_index == four.failures[i].instance_index);
    CHECK(serialize_bundle(one.failures[i].bundle) == serialize_bundle(four.failures[i].bundle));
  }
}

TEST_CASE("shrink keeps the failing check and never grows the instance") {
  FuzzConfig config;
  config.count = 200;
  config.seed = 1;
  config.mutation = Mutation::NoPromotion;
  const FuzzSummary s = run_fuzz(config);
  REQUIRE(!s.failures.empty());
  for (std::size_t i = 0; i < std::min<std::size_t>(s.failures.size(), 10); ++i) {
    const auto& f = s.failures[i];
    CHECK(f.bundle.minimized);
    const Instance small = parse_instance(f.bundle.instance_text);
    const Instance orig = generate_instance(config, f.instance_index);
    CHECK(small.edge_count() <= orig.edge_count());
    const ReplayOutcome r = replay(f.bundle);
    CHECK(r.check_matches);
    CHECK(r.trace_matches);
    CHECK(r.evaluation.failure == f.bundle.check);
  }
}

TEST_CASE("config validation") {
  FuzzConfig c;
  c.edge_density = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = FuzzConfig{};
  c.tie_probability = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = FuzzConfig{};
  CHECK_NOTHROW(c.validate());
}
