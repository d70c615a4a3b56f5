// ============================================================================
//  test_mc_engine.cpp -- CTL / TCTL / ATL fixpoint engines
// ============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stctl/fixtures.hpp"
#include "stctl/mc_engine.hpp"

using namespace stctl;

namespace {

// State-formula evaluation over model states (no strategic operators).
StateSet eval_state(const GlobalModel& m, const StateFormula& f) {
  const std::size_t n = m.states.size();
  switch (f.kind) {
    case StateFormula::Kind::True:
      return StateSet::all(n);
    case StateFormula::Kind::False:
      return StateSet(n);
    case StateFormula::Kind::Prop: {
      StateSet r(n);
      int p = m.prop_index(f.prop);
      if (p >= 0)
        for (std::size_t s = 0; s < n; ++s)
          if (m.state_has_prop(static_cast<int>(s), p)) r.set(s);
      return r;
    }
    case StateFormula::Kind::Not:
      return eval_state(m, *f.lhs).complement();
    case StateFormula::Kind::And:
      return eval_state(m, *f.lhs) & eval_state(m, *f.rhs);
    case StateFormula::Kind::Or:
      return eval_state(m, *f.lhs) | eval_state(m, *f.rhs);
    default:
      throw std::logic_error("unexpected state formula in test lift");
  }
}

// Same over region vertices.
StateSet eval_region_state(const RegionGraph& g, const StateFormula& f) {
  const GlobalModel& m = *g.model;
  const std::size_t n = g.vertices.size();
  switch (f.kind) {
    case StateFormula::Kind::True:
      return StateSet::all(n);
    case StateFormula::Kind::False:
      return StateSet(n);
    case StateFormula::Kind::Prop: {
      StateSet r(n);
      int p = m.prop_index(f.prop);
      if (p >= 0)
        for (std::size_t v = 0; v < n; ++v)
          if (m.state_has_prop(g.vertices[v].state, p)) r.set(v);
      return r;
    }
    case StateFormula::Kind::Not:
      return eval_region_state(g, *f.lhs).complement();
    case StateFormula::Kind::And:
      return eval_region_state(g, *f.lhs) & eval_region_state(g, *f.rhs);
    case StateFormula::Kind::Or:
      return eval_region_state(g, *f.lhs) | eval_region_state(g, *f.rhs);
    default:
      throw std::logic_error("unexpected state formula in test lift");
  }
}

PathPtr path_of(const std::string& text) {
  StatePtr f = parse_formula(text);
  REQUIRE(f->kind == StateFormula::Kind::Coalition);
  return f->path;
}

}  // namespace

TEST_CASE("StateSet algebra") {
  StateSet a(70), b(70);
  a.set(0);
  a.set(69);
  b.set(69);
  CHECK((a & b).count() == 1);
  CHECK((a | b).count() == 2);
  CHECK(a.complement().count() == 68);
  CHECK(StateSet::all(70).count() == 70);
  CHECK_FALSE(StateSet(70).any());
  a.reset(69);
  CHECK(a.count() == 1);
}

namespace {

// Prunes agent `ag`'s edges to the single action chosen per local state.
EdgeMask strategy_mask(const GlobalModel& m, int ag,
                       const std::vector<int>& choice) {
  EdgeMask mask(m.edges.size(), 1);
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const GlobalEdge& ge = m.edges[e];
    int local = m.states[static_cast<std::size_t>(ge.src)]
                        [static_cast<std::size_t>(ag)];
    if (ge.action[static_cast<std::size_t>(ag)] !=
        choice[static_cast<std::size_t>(local)])
      mask[e] = 0;
  }
  return mask;
}

}  // namespace

TEST_CASE("check_ctl on the two-agent fixtures, unpruned and pruned") {
  ExpressivityPair pair = gen_expressivity(Semantics::Untimed);
  GlobalModel m = compose(pair.M);
  GlobalModel mp = compose(pair.Mprime);
  PathPtr g = path_of("<<>>(E F p & E G !p)");

  auto lift_m = [&](const StateFormula& sf) { return eval_state(m, sf); };
  auto lift_mp = [&](const StateFormula& sf) { return eval_state(mp, sf); };
  // without pruning both models satisfy the path part: the distinction is
  // strategic, not behavioural
  CHECK(check_ctl(m, g, lift_m).test(static_cast<std::size_t>(m.initial)));
  CHECK(check_ctl(mp, g, lift_mp).test(static_cast<std::size_t>(mp.initial)));

  const AgentSpec& a1 = m.spec.agents[0];
  int a = a1.action_index("a"), x1 = a1.action_index("a1"),
      x2 = a1.action_index("a2");
  // M: agent 1 loops at q1 and escapes at q3; both conjuncts survive pruning
  std::vector<int> split(a1.locals.size(), a);
  split[static_cast<std::size_t>(a1.local_index("q1"))] = x1;
  split[static_cast<std::size_t>(a1.local_index("q3"))] = x2;
  EdgeMask good = strategy_mask(m, 0, split);
  CHECK(check_ctl(m, g, lift_m, &good).test(static_cast<std::size_t>(m.initial)));

  // M': q1 forces one action for agent 1, so some conjunct always dies
  const AgentSpec& a1p = mp.spec.agents[0];
  for (int pick : {a1p.action_index("a1"), a1p.action_index("a2")}) {
    std::vector<int> choice(a1p.locals.size(), a1p.action_index("a"));
    choice[static_cast<std::size_t>(a1p.local_index("q1"))] = pick;
    EdgeMask mask = strategy_mask(mp, 0, choice);
    CHECK_FALSE(
        check_ctl(mp, g, lift_mp, &mask).test(static_cast<std::size_t>(mp.initial)));
  }
}

TEST_CASE("check_ctl basics: EF at a labeled initial state, AX") {
  SystemSpec spec = parse_model(R"JSON({
    "coordination": "sync", "semantics": "untimed",
    "agents": [{
      "name": "a", "locals": ["s0", "s1", "s2"], "labels": {"s0": ["p"], "s1": ["q"]},
      "transitions": [
        {"from": "s0", "action": "go", "to": "s1"},
        {"from": "s0", "action": "jump", "to": "s2"},
        {"from": "s1", "action": "go", "to": "s1"},
        {"from": "s2", "action": "go", "to": "s2"}
      ]
    }]
  })JSON");
  GlobalModel m = compose(spec);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  CHECK(check_ctl(m, path_of("<<>> E F p"), lift)
            .test(static_cast<std::size_t>(m.initial)));
  // both successors of s0 must be q for A X q: s2 is not labeled
  CHECK_FALSE(check_ctl(m, path_of("<<>> X q"), lift)
                  .test(static_cast<std::size_t>(m.initial)));
  CHECK(check_ctl(m, path_of("<<>> E X q"), lift)
            .test(static_cast<std::size_t>(m.initial)));
}

TEST_CASE("check_ctl: duality and core relativization") {
  ExpressivityPair pair = gen_expressivity(Semantics::Untimed);
  GlobalModel m = compose(pair.M);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  StateSet core = untimed_core(m);
  CHECK(core == StateSet::all(m.states.size()));  // every state loops

  StateSet eu = check_ctl(m, path_of("<<>> E (!p U p)"), lift);
  StateSet ar = check_ctl(m, path_of("<<>> A (p R !p)"), lift);
  // duality on the core: E(a U b) = ~A(!a R !b)
  CHECK((eu & core) == (ar.complement() & core));

  // monotonicity: enlarging the target never shrinks E U
  StateSet bigger = check_ctl(m, path_of("<<>> E (!p U true)"), lift);
  CHECK((eu & bigger) == eu);
}

TEST_CASE("check_ctl rejects timed intervals on untimed structures") {
  GlobalModel m = compose(gen_expressivity(Semantics::Untimed).M);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  CHECK_THROWS_AS(check_ctl(m, path_of("<<>> E F[0,3] p"), lift), EngineError);
}

TEST_CASE("check_tctl_discrete: unit steps and long durations") {
  SystemSpec two_steps = parse_model(R"JSON({
    "coordination": "sync", "semantics": "discrete",
    "agents": [{
      "name": "a", "locals": ["s0", "s1", "s2"], "labels": {"s2": ["p"]},
      "transitions": [
        {"from": "s0", "action": "go", "to": "s1"},
        {"from": "s1", "action": "go", "to": "s2"},
        {"from": "s2", "action": "go", "to": "s2"}
      ]
    }]
  })JSON");
  GlobalModel m = compose(two_steps);
  TimedStateGraph tg = build_dts(m, 2);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  CHECK(check_tctl_discrete(tg, path_of("<<>> E F[0,2] p"), lift)
            .test(static_cast<std::size_t>(m.initial)));
  CHECK_FALSE(check_tctl_discrete(tg, path_of("<<>> E F[0,1] p"), lift)
                  .test(static_cast<std::size_t>(m.initial)));
  CHECK(check_tctl_discrete(tg, path_of("<<>> E F[2,2] p"), lift)
            .test(static_cast<std::size_t>(m.initial)));

  SystemSpec slow = parse_model(R"JSON({
    "coordination": "sync", "semantics": "discrete",
    "agents": [{
      "name": "a", "locals": ["s0", "s1"], "labels": {"s1": ["p"]},
      "transitions": [
        {"from": "s0", "action": "go", "to": "s1", "duration": 3},
        {"from": "s1", "action": "go", "to": "s1"}
      ]
    }]
  })JSON");
  GlobalModel ms = compose(slow);
  TimedStateGraph tgs = build_dts(ms, 2);
  auto lifts = [&](const StateFormula& sf) { return eval_state(ms, sf); };
  CHECK_FALSE(check_tctl_discrete(tgs, path_of("<<>> E F[0,2] p"), lifts)
                  .test(static_cast<std::size_t>(ms.initial)));
}

TEST_CASE("unit-duration collapse: discrete equals untimed on full intervals") {
  GlobalModel m = compose(gen_voting(1, 2, Semantics::Discrete));
  TimedStateGraph tg = build_dts(m, 4);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  for (const char* text :
       {"<<>> E F v1", "<<>> A F v1", "<<>> E G !v2", "<<>> A (v1 R !v2)",
        "<<>> E (!v1 U v2)", "<<>> !E F (v1 & v2)"}) {
    PathPtr g = path_of(text);
    CHECK(check_ctl(m, g, lift) == check_tctl_discrete(tg, g, lift));
  }
}

TEST_CASE("check_tctl_region: voting windows") {
  GlobalModel m = compose(gen_voting(1, 2, Semantics::Continuous));
  RegionGraph rg = build_region_graph(m, 8);
  auto lift = [&](const StateFormula& sf) { return eval_region_state(rg, sf); };
  StateSet in_window = check_tctl_region(rg, path_of("<<>> E F[0,8] v1"), lift);
  CHECK(in_window.test(static_cast<std::size_t>(rg.initial)));
  // registration and packet steps take no time, but voting needs t >= 1
  StateSet at_zero = check_tctl_region(rg, path_of("<<>> E F[0,0] v1"), lift);
  CHECK_FALSE(at_zero.test(static_cast<std::size_t>(rg.initial)));
  // X is undefined under continuous semantics
  CHECK_THROWS_AS(check_tctl_region(rg, path_of("<<>> X v1"), lift),
                  EngineError);
}

TEST_CASE("zero-clock continuous model matches check_ctl bit-for-bit") {
  GlobalModel m = compose(gen_expressivity(Semantics::Continuous).M);
  RegionGraph rg = build_region_graph(m, 0);
  for (const char* text :
       {"<<>>(E F p & E G !p)", "<<>> A F p", "<<>> E G !p", "<<>> !E F p"}) {
    PathPtr g = path_of(text);
    StateSet on_states =
        check_ctl(m, g, [&](const StateFormula& sf) { return eval_state(m, sf); });
    StateSet on_regions = check_tctl_region(
        rg, g, [&](const StateFormula& sf) { return eval_region_state(rg, sf); });
    for (std::size_t v = 0; v < rg.vertices.size(); ++v)
      CHECK(on_regions.test(v) ==
            on_states.test(static_cast<std::size_t>(rg.vertices[v].state)));
  }
}

TEST_CASE("edge masks prune behaviour") {
  ExpressivityPair pair = gen_expressivity(Semantics::Untimed);
  GlobalModel m = compose(pair.M);
  auto lift = [&](const StateFormula& sf) { return eval_state(m, sf); };
  // drop every edge into a p-state: E F p shrinks to the p-states themselves,
  // and they leave the infinite-path core unless they have kept self-loops
  int p = m.prop_index("p");
  EdgeMask mask(m.edges.size(), 1);
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    if (m.state_has_prop(m.edges[e].dst, p) &&
        !m.state_has_prop(m.edges[e].src, p))
      mask[e] = 0;
  StateSet efp = check_ctl(m, path_of("<<>> E F p"), lift, &mask);
  CHECK_FALSE(efp.test(static_cast<std::size_t>(m.initial)));
}

TEST_CASE("check_atl_perfect: coalition extremes") {
  SystemSpec spec = parse_model(R"JSON({
    "coordination": "sync", "semantics": "untimed",
    "agents": [
      {"name": "one", "locals": ["a0", "a1"], "labels": {"a1": ["p"]},
       "transitions": [
         {"from": "a0", "action": "stay", "to": "a0"},
         {"from": "a0", "action": "move", "to": "a1"},
         {"from": "a1", "action": "stay", "to": "a1"},
         {"from": "a1", "action": "move", "to": "a1"}]},
      {"name": "two", "locals": ["b0"],
       "transitions": [
         {"from": "b0", "action": "stay", "to": "b0"},
         {"from": "b0", "action": "move", "to": "b0"}]}
    ]
  })JSON");
  GlobalModel m = compose(spec, ComposeMode::Full);
  std::size_t init = static_cast<std::size_t>(m.initial);
  // agent one alone can force reaching p
  CHECK(check_atl_perfect(m, parse_formula("<<one>> F p")).test(init));
  // nobody can do it without control: empty coalition = all paths
  CHECK_FALSE(check_atl_perfect(m, parse_formula("<<>> F p")).test(init));
  CHECK(check_atl_perfect(m, parse_formula("<<>> G !p | <<one>> F p")).test(init));
  // full coalition F p = existential reachability
  CHECK(check_atl_perfect(m, parse_formula("<<one,two>> F p")).test(init));
  // <<one>> G !p: stay forever
  CHECK(check_atl_perfect(m, parse_formula("<<one>> G !p")).test(init));
}

TEST_CASE("check_atl_perfect: ATL cannot distinguish the two-agent fixtures") {
  ExpressivityPair pair = gen_expressivity(Semantics::Untimed);
  GlobalModel m = compose(pair.M);
  GlobalModel mp = compose(pair.Mprime);
  for (const char* text : {"<<1>> F p", "<<1>> G !p", "<<1,2>> F p",
                           "<<2>> F p", "<<1>> X !p", "<<1>> (!p U p)"}) {
    StatePtr f = parse_formula(text);
    CHECK(check_atl_perfect(m, f).test(static_cast<std::size_t>(m.initial)) ==
          check_atl_perfect(mp, f).test(static_cast<std::size_t>(mp.initial)));
  }
}

TEST_CASE("check_atl_perfect rejects non-ATL bodies") {
  GlobalModel m = compose(gen_expressivity(Semantics::Untimed).M);
  CHECK_THROWS_AS(check_atl_perfect(m, parse_formula("<<1>> E F p")),
                  EngineError);
  CHECK_THROWS_AS(check_atl_perfect(m, parse_formula("<<1>> F[0,3] p")),
                  EngineError);
}
