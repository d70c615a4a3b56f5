// ============================================================================
//  test_region.cpp -- region algebra and region-graph construction
// ============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <iostream>
#include <random>

#include "stctl/fixtures.hpp"
#include "stctl/region.hpp"

using namespace stctl;

TEST_CASE("region_of: bucketing examples") {
  MaxConsts maxc{2};
  Region r = region_of({1.4}, maxc);
  CHECK(r.ip[0] == 1);
  CHECK(r.fr[0] == 0);  // fraction > 0

  Region zero = region_of({0.0}, maxc);
  CHECK(zero.ip[0] == 0);
  CHECK(zero.fr[0] == -1);

  Region beyond = region_of({3.7}, maxc);
  CHECK(beyond.beyond(0));
  CHECK(region_of({2.1}, maxc).beyond(0));
  CHECK_FALSE(region_of({2.0}, maxc).beyond(0));
}

TEST_CASE("time_successor: one clock with max 2 walks 6 regions") {
  MaxConsts maxc{2};
  Region r = region_of({0.0}, maxc);
  std::vector<Region> chain{r};
  for (;;) {
    Region s = time_successor(chain.back(), maxc);
    if (s == chain.back()) break;
    chain.push_back(s);
  }
  REQUIRE(chain.size() == 6);  // {0},(0,1),{1},(1,2),{2},(2,inf)
  CHECK(chain[1].ip[0] == 0);
  CHECK(chain[1].fr[0] == 0);
  CHECK(chain[2].ip[0] == 1);
  CHECK(chain[2].fr[0] == -1);
  CHECK(chain[4].ip[0] == 2);
  CHECK(chain[5].beyond(0));
  CHECK(time_successor(chain[5], maxc) == chain[5]);  // fixpoint
}

TEST_CASE("time_successor: chains reach all-beyond and stay (random)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 3;
    MaxConsts maxc;
    ClockValuation v;
    for (std::size_t c = 0; c < n; ++c) {
      maxc.push_back(static_cast<std::uint32_t>(rng() % 4));
      v.push_back(static_cast<double>(rng() % 16) / 4.0);
    }
    Region r = region_of(v, maxc);
    int steps = 0;
    while (!r.all_beyond()) {
      Region s = time_successor(r, maxc);
      REQUIRE_FALSE(s == r);
      r = s;
      REQUIRE(++steps < 200);
    }
    CHECK(time_successor(r, maxc) == r);
  }
}

TEST_CASE("reset_region examples") {
  MaxConsts maxc{2, 3};
  Region beyond = region_of({2.5, 1.2}, maxc);
  Region r = reset_region(beyond, {0});
  CHECK(r.ip[0] == 0);
  CHECK(r.fr[0] == -1);
  CHECK(r.ip[1] == 1);
  Region same = reset_region(r, {});
  CHECK(same == r);
}

TEST_CASE("reset_region agrees with valuation-level reset (sampled)") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    MaxConsts maxc{static_cast<std::uint32_t>(rng() % 4),
                   static_cast<std::uint32_t>(rng() % 4)};
    ClockValuation v{static_cast<double>(rng() % 20) / 4.0,
                     static_cast<double>(rng() % 20) / 4.0};
    std::vector<int> xs;
    if (rng() % 2) xs.push_back(0);
    if (rng() % 2) xs.push_back(1);
    CHECK(reset_region(region_of(v, maxc), xs) ==
          region_of(reset(v, xs), maxc));
  }
}

TEST_CASE("region_satisfies: examples") {
  MaxConsts maxc{2};
  std::vector<std::string> names{"x"};
  Region r = region_of({1.4}, maxc);
  CHECK(region_satisfies(r, parse_constraint("x < 2", names), maxc));
  CHECK_FALSE(region_satisfies(r, parse_constraint("x <= 1", names), maxc));
  CHECK(region_satisfies(r, parse_constraint("x > 1", names), maxc));
  CHECK_FALSE(region_satisfies(r, parse_constraint("x = 1", names), maxc));
  CHECK_THROWS(region_satisfies(r, parse_constraint("x < 3", names), maxc));
}

TEST_CASE("region_of is constant on regions: order-preserving jitter") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::string> names{"a", "b", "c"};
  for (int trial = 0; trial < 1000; ++trial) {
    MaxConsts maxc{3, 3, 3};
    // random region from a random valuation, then jitter fractions while
    // keeping their strict order and zero/beyond statuses
    ClockValuation v(3), w(3);
    for (int c = 0; c < 3; ++c) {
      int ipart = static_cast<int>(rng() % 5);
      int kind = static_cast<int>(rng() % 3);
      double f = kind == 0 ? 0.0 : 0.2 + 0.2 * static_cast<double>(c);
      v[c] = ipart + f;
      w[c] = ipart + (f == 0.0 ? 0.0 : f + 0.05);
    }
    Region rv = region_of(v, maxc), rw = region_of(w, maxc);
    REQUIRE(rv == rw);
    // all atoms with constants <= max agree between the two valuations
    for (int c = 0; c < 3; ++c)
      for (std::uint32_t k = 0; k <= 3; ++k)
        for (Rel rel : {Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt}) {
          ClockAtom a;
          a.clock = c;
          a.rel = rel;
          a.bound = k;
          ClockConstraint cc{{a}};
          bool on_region = region_satisfies(rv, cc, maxc);
          CHECK(on_region == eval_constraint(cc, v));
          CHECK(on_region == eval_constraint(cc, w));
        }
  }
}

TEST_CASE("difference atoms agree with representative sampling") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    MaxConsts maxc{4, 4};
    ClockValuation v{static_cast<double>(rng() % 16) / 4.0,
                     static_cast<double>(rng() % 16) / 4.0};
    Region r = region_of(v, maxc);
    if (r.beyond(0) || r.beyond(1)) continue;  // canonical reading, see header
    ClockAtom a;
    a.diff = true;
    a.clock = 0;
    a.clock2 = 1;
    a.rel = static_cast<Rel>(rng() % 5);
    a.bound = static_cast<std::uint32_t>(rng() % 5);
    ClockConstraint cc{{a}};
    CHECK(region_satisfies(r, cc, maxc) == eval_constraint(cc, v));
    CHECK(region_satisfies(r, cc, maxc) ==
          eval_constraint(cc, representative(r, maxc)));
  }
}

TEST_CASE("region_in_interval") {
  MaxConsts maxc{8};
  CHECK(region_in_interval(region_of({5.0}, maxc), 0, Interval{0, 8, true, true}, maxc));
  CHECK_FALSE(region_in_interval(region_of({0.0}, maxc), 0,
                                 Interval{0, 3, false, true}, maxc));
  Region beyond = region_of({9.5}, maxc);
  CHECK(region_in_interval(beyond, 0, Interval{2, Interval::kInf, true, false}, maxc));
  CHECK_FALSE(region_in_interval(beyond, 0, Interval{0, 8, true, true}, maxc));
}

TEST_CASE("build_region_graph: zero-clock model collapses to the global model") {
  GlobalModel m = compose_sync(gen_expressivity(Semantics::Continuous).M);
  RegionGraph g = build_region_graph(m, 0);
  // the only clock is z (max 0), so each state splits into {z=0} and z-beyond
  REQUIRE(g.vertices.size() == 2 * m.states.size());
  for (const RegionVertex& vx : g.vertices) {
    CHECK(vx.actions.size() == m.out[static_cast<std::size_t>(vx.state)].size());
    CHECK(vx.z_reset >= 0);
    CHECK(g.vertices[static_cast<std::size_t>(vx.z_reset)].region.fr[0] == -1);
    if (vx.region.all_beyond())
      CHECK(vx.delay_succ == -1);
    else
      CHECK(g.vertices[static_cast<std::size_t>(vx.delay_succ)].region.all_beyond());
  }
  CHECK(g.initial == 0);
}

TEST_CASE("build_region_graph: single clock max 2 yields 6 regions") {
  SystemSpec spec = parse_model(R"JSON({
    "coordination": "sync", "semantics": "continuous",
    "agents": [{
      "name": "only", "locals": ["l"], "clocks": ["x"],
      "transitions": [{"from": "l", "action": "loop", "guard": "x <= 2", "to": "l"}]
    }]
  })JSON");
  GlobalModel m = compose_sync(spec);
  RegionGraph g = build_region_graph(m, 0, false);
  CHECK(g.vertices.size() == 6);
}

TEST_CASE("region count respects the classical bound on fixtures") {
  auto factorial = [](std::size_t n) {
    double f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
  };
  for (int v = 1; v <= 2; ++v) {
    GlobalModel m = compose_async(gen_voting(v, 2));
    RegionGraph g = build_region_graph(m, 8, true);
    std::size_t n = g.maxc.size();
    double bound = factorial(n) * std::pow(2.0, static_cast<double>(n));
    for (std::uint32_t c : g.maxc) bound *= 2.0 * c + 2.0;
    bound *= static_cast<double>(m.states.size());
    CHECK(static_cast<double>(g.vertices.size()) <= bound);
    std::cout << "voting v=" << v << " region vertices: " << g.vertices.size()
              << "\n";
  }
}

TEST_CASE("action/delay edges match the concrete semantics on representatives") {
  GlobalModel m = compose_async(gen_voting(1, 2));
  RegionGraph g = build_region_graph(m, 8, true);
  std::mt19937_64 rng(31);
  int trials = 0;
  while (trials < 500) {
    const RegionVertex& vx = g.vertices[rng() % g.vertices.size()];
    ClockValuation v = representative(vx.region, g.maxc);
    if (!eval_constraint(m.invariants[static_cast<std::size_t>(vx.state)], v))
      continue;
    // every model edge out of the state appears iff the representative admits
    // the concrete action transition
    for (int e : m.out[static_cast<std::size_t>(vx.state)]) {
      const GlobalEdge& ge = m.edges[static_cast<std::size_t>(e)];
      bool concrete =
          eval_constraint(ge.guard, v) &&
          eval_constraint(m.invariants[static_cast<std::size_t>(ge.dst)],
                          reset(v, ge.resets));
      bool abstract = false;
      for (const auto& [eid, tgt] : vx.actions) abstract = abstract || eid == e;
      CHECK(concrete == abstract);
      ++trials;
    }
  }
}
