#include <doctest.h>

#include "support.hpp"
#include "tiesmatch/fuzz.hpp"
#include "tiesmatch/instance.hpp"

using namespace tiesmatch;

namespace {

InstanceErrorKind parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const InstanceError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return InstanceErrorKind::Syntax;
}

}  // namespace

TEST_CASE("tight document parses to four men, four women, eight edges") {
  const Instance inst = testsupport::tight();
  CHECK(inst.men_count() == 4);
  CHECK(inst.women_count() == 4);
  CHECK(inst.edge_count() == 8);
  CHECK(inst.tie_partner(man(2), 1) == 3);
  CHECK_FALSE(inst.tie_partner(man(2), 2).has_value());
}

TEST_CASE("empty sections give an empty instance") {
  const Instance inst = parse_instance("men:\nwomen:\n");
  CHECK(inst.empty());
  CHECK(inst.edge_count() == 0);
  CHECK(parse_instance(serialize_instance(inst)) == inst);
}

TEST_CASE("malformed documents report the right error kind") {
  const std::string head = "men: a0 a1\nwomen: b0 b1 b2\n";
  CHECK(parse_error(head + "pref a0: (b0 b1 b2)\n") == InstanceErrorKind::TieTooLarge);
  CHECK(parse_error("men: a0 a0\nwomen: b0\n") == InstanceErrorKind::DuplicateIdentifier);
  CHECK(parse_error("men: x\nwomen: x\n") == InstanceErrorKind::DuplicateIdentifier);
  CHECK(parse_error(head + "pref a0: b0 b0\npref b0: a0\n") == InstanceErrorKind::DuplicateNeighbor);
  CHECK(parse_error(head + "pref a0: b0\n") == InstanceErrorKind::AsymmetricEdge);
  CHECK(parse_error(head + "pref a0: b9\n") == InstanceErrorKind::UnknownIdentifier);
  CHECK(parse_error(head + "pref a0: (b0\n") == InstanceErrorKind::Syntax);
  CHECK(parse_error("men a0\n") == InstanceErrorKind::Syntax);
}

TEST_CASE("parse errors carry the source line") {
  try {
    parse_instance("men: a0\nwomen: b0\n# note\npref a0: (b0 b1 b2)\n");
    FAIL("no error");
  } catch (const InstanceError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("compare follows tie groups and ranks Nobody last") {
  const Instance inst = testsupport::tight();
  const PersonId b0 = woman(0);
  CHECK(inst.compare(b0, 1, 3) == Preference::Indifferent);
  CHECK(inst.compare(b0, 1, 0) == Preference::StrictlyPrefersX);
  CHECK(inst.compare(b0, 0, 3) == Preference::StrictlyPrefersY);
  CHECK(inst.compare(b0, 0, std::nullopt) == Preference::StrictlyPrefersX);
  CHECK(inst.compare(b0, std::nullopt, std::nullopt) == Preference::Indifferent);
  CHECK(inst.compare(b0, 0, 0) == Preference::Indifferent);
  CHECK(inst.compare(man(2), 1, 2) == Preference::StrictlyPrefersX);
  CHECK_THROWS_AS(inst.compare(b0, 2, 0), InstanceError);
}

TEST_CASE("canonical serialization of the tight instance") {
  const Instance inst = testsupport::tight();
  CHECK(serialize_instance(inst) ==
        "men: a0 a1 a2 a3\n"
        "women: b0 b1 b2 b3\n"
        "pref a0: b0\n"
        "pref a1: (b0 b1)\n"
        "pref a2: (b1 b3) b2\n"
        "pref a3: (b0 b3)\n"
        "pref b0: (a1 a3) a0\n"
        "pref b1: (a1 a2)\n"
        "pref b2: a2\n"
        "pref b3: (a2 a3)\n");
  CHECK(digest("") == "cbf29ce484222325");
}

TEST_CASE("generated instances round-trip through the text format") {
  FuzzConfig config;
  config.seed = 7;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Instance inst = generate_instance(config, i);
    const std::string text = serialize_instance(inst);
    const Instance again = parse_instance(text);
    REQUIRE(again == inst);
    REQUIRE(serialize_instance(again) == text);
  }
}

TEST_CASE("generator respects size, tie and edge limits") {
  FuzzConfig config;
  config.max_men = 3;
  config.max_women = 5;
  config.edge_density = 1.0;
  config.tie_probability = 1.0;
  config.max_edges = 10;
  for (std::size_t i = 0; i < 200; ++i) {
    const Instance inst = generate_instance(config, i);
    CHECK(inst.men_count() <= 3);
    CHECK(inst.women_count() <= 5);
    CHECK(inst.edge_count() <= 10);
  }
  config.tie_probability = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    const Instance inst = generate_instance(config, i);
    for (Index m = 0; m < inst.men_count(); ++m)
      for (const auto& g : inst.prefs(man(m)).groups) CHECK(g.size() == 1);
  }
  CHECK(serialize_instance(generate_instance(config, 3)) == serialize_instance(generate_instance(config, 3)));
}

TEST_CASE("restrict and untie keep instances valid") {
  const Instance inst = testsupport::tight();
  const Instance no_a0 = restrict_instance(inst, [](PersonId p) { return p != man(0); },
                                           [](Index, Index) { return true; });
  CHECK(no_a0.men_count() == 3);
  CHECK(no_a0.edge_count() == 7);
  CHECK(no_a0.names(Side::Man).front() == "a1");

  const Instance cut = restrict_instance(inst, [](PersonId) { return true; },
                                         [](Index m, Index w) { return !(m == 1 && w == 1); });
  CHECK(cut.edge_count() == 7);
  CHECK(cut.prefs(man(1)).groups == std::vector<std::vector<Index>>{{0}});

  const Instance split = untie(inst, woman(0), 0);
  CHECK(split.compare(woman(0), 1, 3) == Preference::StrictlyPrefersX);
  CHECK_THROWS(untie(inst, man(0), 0));
}
