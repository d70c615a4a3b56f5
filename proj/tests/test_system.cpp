// ============================================================================
//  test_system.cpp -- clock arithmetic, constraint parsing, validation, JSON
// ============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "stctl/system.hpp"

using namespace stctl;

TEST_CASE("eval_constraint: examples") {
  std::vector<std::string> names{"x1", "x2"};
  CHECK(eval_constraint(ClockConstraint{}, {1.0, 2.0}));  // true

  ClockConstraint diff = parse_constraint("x1 - x2 <= 1", names);
  CHECK_FALSE(eval_constraint(diff, {1.5, 0.2}));  // 1.3 <= 1 fails
  CHECK(eval_constraint(diff, {1.0, 0.2}));

  ClockConstraint window = parse_constraint("x1 >= 1 & x1 <= 7", names);
  CHECK(eval_constraint(window, {6.0, 0.0}));
  CHECK_FALSE(eval_constraint(window, {0.5, 0.0}));
  CHECK_FALSE(eval_constraint(window, {7.5, 0.0}));
}

TEST_CASE("delay and reset") {
  ClockValuation v{0.0, 0.0};
  CHECK(delay(v, 1.5) == ClockValuation{1.5, 1.5});
  CHECK(delay(v, 0.0) == v);
  CHECK(delay(ClockValuation{2.1}, 0.9)[0] == doctest::Approx(3.0));

  ClockValuation w{1.5, 0.2};
  CHECK(reset(w, {0}) == ClockValuation{0.0, 0.2});
  CHECK(reset(w, {}) == w);
  CHECK(reset(w, {0, 1}) == ClockValuation{0.0, 0.0});
}

TEST_CASE("parse_constraint: errors and round trip") {
  std::vector<std::string> names{"x", "y"};
  CHECK(parse_constraint("", names).is_true());
  CHECK(parse_constraint("true", names).is_true());
  CHECK_THROWS_AS(parse_constraint("z <= 1", names), ModelError);
  CHECK_THROWS_AS(parse_constraint("x <=", names), ModelError);
  CHECK_THROWS_AS(parse_constraint("x ! 1", names), ModelError);

  ClockConstraint cc = parse_constraint("x<2 & y>=1 & x-y=0", names);
  REQUIRE(cc.atoms.size() == 3);
  std::string text = constraint_to_string(cc, names);
  CHECK(parse_constraint(text, names) == cc);
}

TEST_CASE("eval_constraint agrees with direct rational arithmetic") {
  std::mt19937_64 rng(42);
  std::vector<std::string> names{"a", "b", "c"};
  for (int trial = 0; trial < 1000; ++trial) {
    // valuations on a quarter-integer grid are exact in double
    std::vector<long> quarters(3);
    ClockValuation v(3);
    for (int i = 0; i < 3; ++i) {
      quarters[i] = static_cast<long>(rng() % 41);  // 0 .. 10 in steps of 1/4
      v[i] = static_cast<double>(quarters[i]) / 4.0;
    }
    ClockConstraint cc;
    bool expect = true;
    int n_atoms = static_cast<int>(rng() % 4);
    for (int k = 0; k < n_atoms; ++k) {
      ClockAtom a;
      a.clock = static_cast<int>(rng() % 3);
      a.diff = rng() % 2 == 0;
      if (a.diff) a.clock2 = static_cast<int>(rng() % 3);
      a.rel = static_cast<Rel>(rng() % 5);
      a.bound = static_cast<std::uint32_t>(rng() % 6);
      cc.atoms.push_back(a);
      long lhs4 = quarters[a.clock] - (a.diff ? quarters[a.clock2] : 0);
      long rhs4 = 4L * static_cast<long>(a.bound);
      bool ok = false;
      switch (a.rel) {
        case Rel::Lt: ok = lhs4 < rhs4; break;
        case Rel::Le: ok = lhs4 <= rhs4; break;
        case Rel::Eq: ok = lhs4 == rhs4; break;
        case Rel::Ge: ok = lhs4 >= rhs4; break;
        case Rel::Gt: ok = lhs4 > rhs4; break;
      }
      expect = expect && ok;
    }
    CHECK(eval_constraint(cc, v) == expect);
  }
}

namespace {

const char* kTwoAgentModel = R"JSON({
  "coordination": "async",
  "semantics": "continuous",
  "agents": [
    {
      "name": "V",
      "locals": ["q0", "q1"],
      "initial": "q0",
      "transitions": [
        {"from": "q0", "action": "reg", "to": "q1"},
        {"from": "q1", "action": "idle", "to": "q1"}
      ],
      "labels": {"q1": ["registered"]}
    },
    {
      "name": "EA",
      "locals": ["s0", "s1"],
      "clocks": ["t", "x"],
      "invariants": {"s1": "x <= 0"},
      "transitions": [
        {"from": "s0", "action": "reg", "guard": "t <= 1", "reset": ["x"], "to": "s1"},
        {"from": "s1", "action": "tick", "to": "s1"}
      ]
    }
  ]
})JSON";

}  // namespace

TEST_CASE("parse_model: defaults and derived protocol") {
  SystemSpec spec = parse_model(kTwoAgentModel);
  CHECK(spec.coordination == Coordination::Async);
  CHECK(spec.semantics == Semantics::Continuous);
  REQUIRE(spec.agents.size() == 2);

  const AgentSpec& v = spec.agents[0];
  CHECK(v.name == "V");
  CHECK(v.initial == 0);
  CHECK(v.actions == std::vector<std::string>{"reg", "idle"});
  CHECK(v.protocol[0] == std::vector<int>{0});
  CHECK(v.protocol[1] == std::vector<int>{1});
  CHECK(v.transitions[0].guard.is_true());   // omitted guard defaults to true
  CHECK(v.transitions[0].duration == 1);     // omitted duration defaults to 1
  CHECK(v.labels[1] == std::vector<std::string>{"registered"});

  const AgentSpec& ea = spec.agents[1];
  CHECK(ea.clocks == std::vector<std::string>{"t", "x"});
  CHECK(ea.transitions[0].resets == std::vector<int>{1});
  CHECK_FALSE(ea.invariants[1].is_true());

  CHECK(validate(spec).empty());
}

TEST_CASE("parse_model: schema errors carry paths") {
  CHECK_THROWS_AS(parse_model("not json"), ModelError);
  CHECK_THROWS_WITH_AS(parse_model(R"({"agents":[]})"),
                       doctest::Contains("at-least-one-agent"), ModelError);
  CHECK_THROWS_WITH_AS(
      parse_model(R"({"agents":[{"locals":["a"]}]})"),
      doctest::Contains("/agents/0/name"), ModelError);
  CHECK_THROWS_WITH_AS(
      parse_model(
          R"({"agents":[{"name":"a","locals":["x"],
               "transitions":[{"from":"x","action":"go","to":"y"}]}]})"),
      doctest::Contains("/agents/0/transitions/0/to"), ModelError);
}

TEST_CASE("validate: diagnostic rules") {
  SystemSpec spec = parse_model(kTwoAgentModel);

  SUBCASE("empty protocol") {
    spec.agents[0].protocol[1].clear();
    auto ds = validate(spec);
    REQUIRE_FALSE(ds.empty());
    CHECK(ds[0].rule == "empty-protocol");
    CHECK(ds[0].agent == "V");
  }
  SUBCASE("non-positive duration in discrete mode") {
    spec.semantics = Semantics::Discrete;
    for (auto& ag : spec.agents) {
      ag.clocks.clear();
      for (auto& inv : ag.invariants) inv = ClockConstraint{};
      for (auto& tr : ag.transitions) {
        tr.guard = ClockConstraint{};
        tr.resets.clear();
      }
    }
    spec.agents[0].transitions[0].duration = 0;
    auto ds = validate(spec);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].rule == "non-positive-duration");
  }
  SUBCASE("clocks rejected outside continuous semantics") {
    spec.semantics = Semantics::Untimed;
    auto ds = validate(spec);
    bool found = false;
    for (const auto& d : ds) found = found || d.rule == "untimed-has-clocks";
    CHECK(found);
  }
  SUBCASE("sync constraints rejected in async mode") {
    spec.agents[0].transitions[0].sync.push_back({"EA", "reg"});
    auto ds = validate(spec);
    REQUIRE_FALSE(ds.empty());
    CHECK(ds[0].rule == "sync-in-async");
  }
  SUBCASE("sync constraint checks in sync mode") {
    spec.coordination = Coordination::Sync;
    spec.agents[0].transitions[0].sync.push_back({"nobody", "reg"});
    spec.agents[0].transitions[0].sync.push_back({"EA", "ghost"});
    auto ds = validate(spec);
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].rule == "sync-unknown-agent");
    CHECK(ds[1].rule == "sync-unknown-action");
  }
}

TEST_CASE("spec_to_json round trip") {
  SystemSpec spec = parse_model(kTwoAgentModel);
  std::string dumped = spec_to_json(spec);
  SystemSpec again = parse_model(dumped);
  CHECK(spec_to_json(again) == dumped);
  CHECK(again.agents[1].transitions[0].resets == std::vector<int>{1});
  CHECK(validate(again).empty());
}
