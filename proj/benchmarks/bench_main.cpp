// ============================================================================
//  bench_main.cpp -- microbenchmarks for the hot paths
// ============================================================================

#include <benchmark/benchmark.h>

#include "stctl/fixtures.hpp"
#include "stctl/oracle.hpp"
#include "stctl/region.hpp"
#include "stctl/strategy_engine.hpp"

using namespace stctl;

namespace {

StatePtr voting_goal(int k) {
  std::vector<std::string> coal;
  for (int i = 1; i <= k; ++i) coal.push_back("voter" + std::to_string(i));
  Interval win{0, 8, true, true};
  return desugar(
      mk_coalition(coal, mk_ex_finally(win, mk_lift(mk_prop("v1")))));
}

}  // namespace

static void BM_ParseFormula(benchmark::State& state) {
  for (auto _ : state) {
    auto f = parse_formula("<<1>>(E F[0,8] v1 & !(A (p U[2,5] q)))");
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_ParseFormula);

static void BM_ComposeVoting(benchmark::State& state) {
  SystemSpec spec =
      gen_voting(static_cast<int>(state.range(0)), 2, Semantics::Continuous);
  for (auto _ : state) {
    GlobalModel m = compose(spec);
    benchmark::DoNotOptimize(m.states.size());
  }
}
BENCHMARK(BM_ComposeVoting)->Arg(1)->Arg(2)->Arg(3);

static void BM_RegionGraphVoting(benchmark::State& state) {
  GlobalModel m = compose(gen_voting(static_cast<int>(state.range(0)), 2,
                                     Semantics::Continuous));
  for (auto _ : state) {
    RegionGraph rg = build_region_graph(m, 8, true);
    benchmark::DoNotOptimize(rg.vertices.size());
  }
}
BENCHMARK(BM_RegionGraphVoting)->Arg(1)->Arg(2);

// lazy on-the-fly search; never materializes the composition
static void BM_CheckVotingLazy(benchmark::State& state) {
  SystemSpec spec =
      gen_voting(static_cast<int>(state.range(0)), 2, Semantics::Continuous);
  StatePtr f = voting_goal(1);
  for (auto _ : state) {
    Verdict v = check_strategic(spec, f);
    benchmark::DoNotOptimize(v.holds);
  }
}
BENCHMARK(BM_CheckVotingLazy)->Arg(1)->Arg(5)->Arg(10)->Arg(20);

// region-graph fixpoints over all 24 voter strategies
static void BM_CheckVotingRegionGraph(benchmark::State& state) {
  SystemSpec spec = gen_voting(1, 2, Semantics::Continuous);
  StatePtr f = parse_formula("<<voter1>>(E F[0,8] v1 & E F[0,8] v1)");
  for (auto _ : state) {
    Verdict v = check_strategic(spec, f);
    benchmark::DoNotOptimize(v.holds);
  }
}
BENCHMARK(BM_CheckVotingRegionGraph);

static void BM_CheckVotingDiscrete(benchmark::State& state) {
  SystemSpec spec = gen_voting(1, 2, Semantics::Discrete);
  StatePtr f = parse_formula("<<voter1>> E F[0,8] v1");
  for (auto _ : state) {
    Verdict v = check_strategic(spec, f);
    benchmark::DoNotOptimize(v.holds);
  }
}
BENCHMARK(BM_CheckVotingDiscrete);

static void BM_ExpressivityIr(benchmark::State& state) {
  ExpressivityPair pair = gen_expressivity(Semantics::Untimed);
  StatePtr f = parse_formula("<<1>>(E F p & E G !p)");
  for (auto _ : state) {
    Verdict v = check_strategic(pair.M, f);
    benchmark::DoNotOptimize(v.holds);
  }
}
BENCHMARK(BM_ExpressivityIr);

static void BM_OracleRandom(benchmark::State& state) {
  RandomSystemParams p;
  SystemSpec spec = random_system(p, 11);
  StatePtr f = parse_formula("<<ag1>> F p");
  for (auto _ : state) {
    bool r = oracle_check(spec, f, StrategyKind::ir);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_OracleRandom);

static void BM_AtlFixpoint(benchmark::State& state) {
  GlobalModel m = compose(gen_expressivity(Semantics::Untimed).M);
  StatePtr f = parse_formula("<<1>> F p");
  for (auto _ : state) {
    StateSet s = check_atl_perfect(m, f);
    benchmark::DoNotOptimize(s.count());
  }
}
BENCHMARK(BM_AtlFixpoint);

BENCHMARK_MAIN();
