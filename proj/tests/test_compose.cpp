// ============================================================================
//  test_compose.cpp -- sync/async product construction
// ============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "stctl/compose.hpp"
#include "stctl/fixtures.hpp"

using namespace stctl;

namespace {

SystemSpec single_agent_spec() {
  return parse_model(R"JSON({
    "coordination": "sync", "semantics": "untimed",
    "agents": [{
      "name": "only", "locals": ["a", "b"],
      "transitions": [
        {"from": "a", "action": "go", "to": "b"},
        {"from": "a", "action": "stay", "to": "a"},
        {"from": "b", "action": "stay", "to": "b"}
      ]
    }]
  })JSON");
}

}  // namespace

TEST_CASE("compose_sync: unary product equals the agent graph") {
  GlobalModel m = compose_sync(single_agent_spec());
  CHECK(m.states.size() == 2);
  CHECK(m.edges.size() == 3);
  CHECK(m.initial == 0);
  CHECK(m.out[0].size() == 2);
  CHECK(m.out[1].size() == 1);
}

TEST_CASE("compose_sync: expressivity fixture M is isomorphic to template a") {
  ExpressivityPair pair = gen_expressivity();
  REQUIRE(validate(pair.M).empty());
  REQUIRE(validate(pair.Mprime).empty());

  // full product cardinality |S| = product of |L_i|
  GlobalModel full = compose_sync(pair.M, ComposeMode::Full);
  CHECK(full.states.size() == 16);

  GlobalModel m = compose_sync(pair.M);  // reachable
  CHECK(m.states.size() == 4);
  CHECK(m.edges.size() == 7);
  // reachable states are the diagonal ones
  for (const auto& tuple : m.states) CHECK(tuple[0] == tuple[1]);
  // p labels exactly (q2,q2)
  int p = m.prop_index("p");
  REQUIRE(p >= 0);
  int labeled = 0;
  for (std::size_t s = 0; s < m.states.size(); ++s)
    if (m.state_has_prop(static_cast<int>(s), p)) {
      ++labeled;
      CHECK(m.state_name(static_cast<int>(s)) == "q2,q2");
    }
  CHECK(labeled == 1);

  // reachable_restrict on the full product matches the reachable build
  GlobalModel restricted = reachable_restrict(full);
  CHECK(restricted.states.size() == m.states.size());
  CHECK(restricted.edges.size() == m.edges.size());

  GlobalModel mp = compose_sync(pair.Mprime);
  CHECK(mp.states.size() == 3);
  CHECK(mp.edges.size() == 5);
}

TEST_CASE("compose_sync: discrete duration mismatch drops the edge with a lint") {
  SystemSpec spec = parse_model(R"JSON({
    "coordination": "sync", "semantics": "discrete",
    "agents": [
      {"name": "x", "locals": ["l"], "transitions": [
        {"from": "l", "action": "step", "to": "l", "duration": 2}]},
      {"name": "y", "locals": ["l"], "transitions": [
        {"from": "l", "action": "step", "to": "l", "duration": 3}]}
    ]
  })JSON");
  REQUIRE(validate(spec).empty());
  GlobalModel m = compose_sync(spec);
  CHECK(m.edges.empty());
  REQUIRE(m.lints.size() == 1);
  CHECK(m.lints[0].find("duration mismatch") != std::string::npos);
}

TEST_CASE("compose_async: voting registration edge carries the EA guard") {
  SystemSpec spec = gen_voting(1, 2);
  REQUIRE(validate(spec).empty());
  GlobalModel m = compose_async(spec);

  // initial state offers the three registration events
  REQUIRE(m.initial == 0);
  std::set<std::string> initial_events;
  for (int e : m.out[0])
    initial_events.insert(m.events[static_cast<std::size_t>(m.edges[static_cast<std::size_t>(e)].event)]);
  CHECK(initial_events ==
        std::set<std::string>{"reg_m_1", "reg_i_1", "reg_p_1", "close"});

  for (int e : m.out[0]) {
    const GlobalEdge& ge = m.edges[static_cast<std::size_t>(e)];
    if (m.events[static_cast<std::size_t>(ge.event)] != "reg_m_1") continue;
    CHECK(m.state_name(ge.dst) == "reg_m,wait_m");
    CHECK(constraint_to_string(ge.guard, m.clocks) == "EA.t <= 1");
    REQUIRE(ge.resets.size() == 1);
    CHECK(m.clocks[static_cast<std::size_t>(ge.resets[0])] == "EA.x");
    CHECK(ge.movers == std::vector<int>{0, 1});
  }

  // derived: exhaustive graph search gives 23 reachable states
  CHECK(m.states.size() == 23);
}

TEST_CASE("compose_async: frame condition and valuation union law") {
  GlobalModel m = compose_async(gen_voting(2, 2));
  for (const GlobalEdge& e : m.edges) {
    const auto& src = m.states[static_cast<std::size_t>(e.src)];
    const auto& dst = m.states[static_cast<std::size_t>(e.dst)];
    for (std::size_t i = 0; i < src.size(); ++i) {
      bool mover = std::find(e.movers.begin(), e.movers.end(),
                             static_cast<int>(i)) != e.movers.end();
      if (!mover) CHECK(src[i] == dst[i]);
    }
  }
  // valuation(s) = union of local labels, recomputed independently
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    std::set<std::string> expect;
    for (std::size_t i = 0; i < m.spec.agents.size(); ++i)
      for (const std::string& p :
           m.spec.agents[i].labels[static_cast<std::size_t>(m.states[s][i])])
        expect.insert(p);
    std::set<std::string> got;
    for (int p : m.state_props[s])
      got.insert(m.props[static_cast<std::size_t>(p)]);
    CHECK(got == expect);
  }
}

TEST_CASE("compose_async: discrete event duration is the movers' max") {
  SystemSpec spec = parse_model(R"JSON({
    "coordination": "async", "semantics": "discrete",
    "agents": [
      {"name": "x", "locals": ["l"], "transitions": [
        {"from": "l", "action": "shared", "to": "l", "duration": 2},
        {"from": "l", "action": "mine", "to": "l", "duration": 7}]},
      {"name": "y", "locals": ["l"], "transitions": [
        {"from": "l", "action": "shared", "to": "l", "duration": 5}]}
    ]
  })JSON");
  GlobalModel m = compose_async(spec);
  REQUIRE(m.edges.size() == 2);
  for (const GlobalEdge& e : m.edges) {
    if (m.events[static_cast<std::size_t>(e.event)] == "shared") {
      CHECK(e.duration == 5);
      CHECK(e.movers.size() == 2);
    } else {
      CHECK(e.duration == 7);
      CHECK(e.movers.size() == 1);
    }
  }
}

TEST_CASE("untimed degeneracy: clock-free model has trivial timing structure") {
  GlobalModel m = compose_sync(gen_expressivity().M);
  CHECK(m.clocks.empty());
  for (const auto& inv : m.invariants) CHECK(inv.is_true());
  for (const auto& e : m.edges) {
    CHECK(e.guard.is_true());
    CHECK(e.resets.empty());
  }
}

TEST_CASE("model_to_json is stable and self-consistent") {
  GlobalModel m = compose_async(gen_voting(1, 2));
  std::string a = model_to_json(m);
  std::string b = model_to_json(compose_async(gen_voting(1, 2)));
  CHECK(a == b);
  CHECK(a.find("\"initial\": 0") != std::string::npos);
}

TEST_CASE("fixtures validate cleanly") {
  CHECK(validate(gen_voting(1, 2)).empty());
  CHECK(validate(gen_voting(3, 2)).empty());
  CHECK(validate(gen_voting(2, 3, Semantics::Discrete)).empty());
  CHECK(validate(gen_voting(2, 1, Semantics::Untimed)).empty());
  for (auto sem : {Semantics::Untimed, Semantics::Discrete, Semantics::Continuous}) {
    ExpressivityPair p = gen_expressivity(sem);
    CHECK(validate(p.M).empty());
    CHECK(validate(p.Mprime).empty());
  }
}
