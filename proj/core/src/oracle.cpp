// ============================================================================
//  oracle.cpp -- brute-force reference semantics and random instances
// ============================================================================

#include "stctl/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

namespace stctl {

namespace {

constexpr std::size_t kMaxVertices = 512;
constexpr std::uint64_t kMaxOracleStrategies = 1ull << 20;

// ---------------------------------------------------------------------------
//  Arena: the oracle's own product, expanded straight from the definitions
// ---------------------------------------------------------------------------

struct Step {
  int dst = -1;
  std::uint32_t duration = 1;
  // action id per agent; -1 when the agent does not move (async bystander)
  std::vector<int> action;
};

struct Arena {
  const SystemSpec* spec = nullptr;
  std::vector<std::vector<int>> states;  // local-state tuples
  std::vector<std::vector<Step>> steps;
  int initial = 0;
};

template <typename Fn>
void for_each_sync_step(const SystemSpec& spec, const std::vector<int>& tuple,
                        Fn&& fn) {
  const std::size_t n = spec.agents.size();
  std::vector<std::vector<const LocalTransition*>> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const LocalTransition& tr : spec.agents[i].transitions)
      if (tr.from == tuple[i]) cands[i].push_back(&tr);
    if (cands[i].empty()) return;
  }
  std::vector<std::size_t> pick(n, 0);
  std::vector<int> actions(n), target(n);
  for (;;) {
    bool ok = true;
    std::uint32_t dur = 0;
    bool mismatch = false;
    for (std::size_t i = 0; i < n; ++i) {
      const LocalTransition* tr = cands[i][pick[i]];
      actions[i] = tr->action;
      target[i] = tr->to;
    }
    for (std::size_t i = 0; i < n && ok; ++i) {
      const LocalTransition* tr = cands[i][pick[i]];
      for (const SyncConstraint& sc : tr->sync) {
        int j = spec.agent_index(sc.agent);
        int a = j < 0 ? -1
                      : spec.agents[static_cast<std::size_t>(j)].action_index(
                            sc.action);
        if (j < 0 || a < 0)
          throw std::invalid_argument("oracle: unresolved sync constraint");
        if (actions[static_cast<std::size_t>(j)] != a) {
          ok = false;
          break;
        }
      }
      if (i == 0) dur = tr->duration;
      else if (tr->duration != dur) mismatch = true;
    }
    if (ok && !(mismatch && spec.semantics == Semantics::Discrete))
      fn(target, actions, dur);
    std::size_t i = 0;
    while (i < n && ++pick[i] == cands[i].size()) pick[i] = 0, ++i;
    if (i == n) break;
  }
}

template <typename Fn>
void for_each_async_step(const SystemSpec& spec, const std::vector<int>& tuple,
                         Fn&& fn) {
  const std::size_t n = spec.agents.size();
  // event pool: union of action names, in first-appearance order
  std::vector<std::string> events;
  for (const AgentSpec& ag : spec.agents)
    for (const std::string& a : ag.actions)
      if (std::find(events.begin(), events.end(), a) == events.end())
        events.push_back(a);
  for (const std::string& ev : events) {
    std::vector<int> movers;
    std::vector<std::vector<const LocalTransition*>> cands;
    bool blocked = false;
    for (std::size_t i = 0; i < n && !blocked; ++i) {
      int a = spec.agents[i].action_index(ev);
      if (a < 0) continue;  // not in this agent's alphabet
      movers.push_back(static_cast<int>(i));
      cands.emplace_back();
      for (const LocalTransition& tr : spec.agents[i].transitions)
        if (tr.from == tuple[i] && tr.action == a) cands.back().push_back(&tr);
      if (cands.back().empty()) blocked = true;
    }
    if (blocked || movers.empty()) continue;
    std::vector<std::size_t> pick(movers.size(), 0);
    std::vector<int> actions(n), target(n);
    for (;;) {
      actions.assign(n, -1);
      for (std::size_t i = 0; i < n; ++i) target[i] = tuple[i];
      std::uint32_t dur = 1;
      for (std::size_t m = 0; m < movers.size(); ++m) {
        const LocalTransition* tr = cands[m][pick[m]];
        std::size_t i = static_cast<std::size_t>(movers[m]);
        actions[i] = tr->action;
        target[i] = tr->to;
        dur = m == 0 ? tr->duration : std::max(dur, tr->duration);
      }
      fn(target, actions, dur);
      std::size_t m = 0;
      while (m < movers.size() && ++pick[m] == cands[m].size())
        pick[m] = 0, ++m;
      if (m == movers.size()) break;
    }
  }
}

Arena build_arena(const SystemSpec& spec) {
  if (spec.semantics == Semantics::Continuous)
    throw EngineError("oracle-continuous",
                      "the oracle supports untimed and discrete specs only");
  Arena a;
  a.spec = &spec;
  std::map<std::vector<int>, int> index;
  std::vector<int> init;
  for (const AgentSpec& ag : spec.agents) init.push_back(ag.initial);
  index.emplace(init, 0);
  a.states.push_back(init);
  a.initial = 0;
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    a.steps.emplace_back();
    std::vector<int> tuple = a.states[s];  // copy: a.states grows below
    auto emit = [&](const std::vector<int>& target,
                    const std::vector<int>& actions, std::uint32_t dur) {
      auto [it, fresh] = index.emplace(target, static_cast<int>(a.states.size()));
      if (fresh) {
        a.states.push_back(target);
        if (a.states.size() > kMaxVertices)
          throw EngineError("oracle-too-large",
                            "instance exceeds the oracle's vertex budget");
      }
      Step st;
      st.dst = it->second;
      st.duration = dur;
      st.action = actions;
      a.steps[s].push_back(std::move(st));
    };
    if (spec.coordination == Coordination::Sync)
      for_each_sync_step(spec, tuple, emit);
    else
      for_each_async_step(spec, tuple, emit);
  }
  return a;
}

bool arena_prop(const Arena& a, int s, const std::string& p) {
  const std::vector<int>& tuple = a.states[static_cast<std::size_t>(s)];
  for (std::size_t i = 0; i < a.spec->agents.size(); ++i) {
    const auto& labels =
        a.spec->agents[i].labels[static_cast<std::size_t>(tuple[i])];
    if (std::find(labels.begin(), labels.end(), p) != labels.end()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
//  Strategies: per-agent choice maps, enumerated by recursive backtracking
// ---------------------------------------------------------------------------

struct ChoiceSlot {
  int agent = -1;   // index into spec.agents
  int key = -1;     // local state (ir) or arena state (Ir)
  std::vector<int> menu;
};

struct OracleStrategy {
  // choice[agent][key] -> action id; keys as in ChoiceSlot
  std::vector<std::map<int, int>> choice;
  StrategyKind kind = StrategyKind::ir;
};

std::vector<ChoiceSlot> choice_slots(const Arena& a,
                                     const std::vector<int>& coalition,
                                     StrategyKind kind) {
  std::vector<ChoiceSlot> slots;
  std::uint64_t total = 1;
  for (int ag : coalition) {
    const AgentSpec& spec_ag = a.spec->agents[static_cast<std::size_t>(ag)];
    if (kind == StrategyKind::ir) {
      for (std::size_t l = 0; l < spec_ag.locals.size(); ++l)
        slots.push_back({ag, static_cast<int>(l),
                         spec_ag.protocol[l]});
    } else {
      for (std::size_t s = 0; s < a.states.size(); ++s)
        slots.push_back(
            {ag, static_cast<int>(s),
             spec_ag.protocol[static_cast<std::size_t>(a.states[s][
                 static_cast<std::size_t>(ag)])]});
    }
  }
  for (const ChoiceSlot& sl : slots) {
    if (sl.menu.empty())
      throw EngineError("empty-protocol",
                        "oracle: a choice point offers no action");
    total *= sl.menu.size();
    if (total > kMaxOracleStrategies)
      throw EngineError("oracle-too-large",
                        "coalition strategy space exceeds the oracle budget");
  }
  return slots;
}

// Calls fn for every strategy; stops early when fn returns true.
template <typename Fn>
bool for_each_strategy(const Arena& a, const std::vector<int>& coalition,
                       StrategyKind kind, Fn&& fn) {
  std::vector<ChoiceSlot> slots = choice_slots(a, coalition, kind);
  OracleStrategy s;
  s.kind = kind;
  s.choice.resize(a.spec->agents.size());
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == slots.size()) return fn(s);
    for (int act : slots[i].menu) {
      s.choice[static_cast<std::size_t>(slots[i].agent)][slots[i].key] = act;
      if (self(self, i + 1)) return true;
    }
    s.choice[static_cast<std::size_t>(slots[i].agent)].erase(slots[i].key);
    return false;
  };
  return rec(rec, 0);
}

// ---------------------------------------------------------------------------
//  Pruned arena and its infinite-execution core
// ---------------------------------------------------------------------------

struct Pruned {
  const Arena* arena = nullptr;
  std::vector<std::vector<const Step*>> allowed;
  std::vector<char> core;  // admits an infinite execution
};

bool step_allowed(const Arena& a, const std::vector<int>& coalition,
                  const OracleStrategy& s, int src, const Step& st) {
  for (int ag : coalition) {
    std::size_t i = static_cast<std::size_t>(ag);
    if (st.action[i] < 0) continue;  // bystander in an async event
    int key = s.kind == StrategyKind::ir
                  ? a.states[static_cast<std::size_t>(src)][i]
                  : src;
    auto it = s.choice[i].find(key);
    if (it == s.choice[i].end() || it->second != st.action[i]) return false;
  }
  return true;
}

// A vertex admits an infinite execution iff it reaches a cycle.
std::vector<char> compute_core(const Pruned& p) {
  const std::size_t n = p.arena->states.size();
  std::vector<signed char> mark(n, 0);  // 0 unknown, 1 on stack, 2 no, 3 yes
  std::vector<char> core(n, 0);
  auto dfs = [&](auto&& self, std::size_t v) -> bool {
    if (mark[v] == 1 || mark[v] == 3) return true;  // closed a lasso
    if (mark[v] == 2) return false;
    mark[v] = 1;
    bool ok = false;
    for (const Step* st : p.allowed[v])
      if (self(self, static_cast<std::size_t>(st->dst))) {
        ok = true;
        break;
      }
    mark[v] = ok ? 3 : 2;
    return ok;
  };
  for (std::size_t v = 0; v < n; ++v) core[v] = dfs(dfs, v) ? 1 : 0;
  return core;
}

Pruned prune_arena(const Arena& a, const std::vector<int>& coalition,
                   const OracleStrategy& s) {
  Pruned p;
  p.arena = &a;
  p.allowed.resize(a.states.size());
  for (std::size_t v = 0; v < a.states.size(); ++v)
    for (const Step& st : a.steps[v])
      if (step_allowed(a, coalition, s, static_cast<int>(v), st))
        p.allowed[v].push_back(&st);
  p.core = compute_core(p);
  return p;
}

// ---------------------------------------------------------------------------
//  Path-formula evaluation by explicit search
// ---------------------------------------------------------------------------

bool in_interval(std::uint32_t d, const Interval& iv, std::uint32_t clamp) {
  bool lo_ok = d > iv.lo || (d == iv.lo && iv.lo_closed);
  if (iv.hi == Interval::kInf) return lo_ok;
  if (d >= clamp) return false;  // clamped: the true value exceeds hi
  bool hi_ok = d < iv.hi || (d == iv.hi && iv.hi_closed);
  return lo_ok && hi_ok;
}

struct Oracle {
  const SystemSpec& spec;
  Arena arena;
  StrategyKind kind;
  std::uint32_t clamp;  // counter saturation bound (discrete)
  std::map<std::pair<const StateFormula*, int>, bool> phi_memo;

  Oracle(const SystemSpec& sp, const StatePtr& f, StrategyKind k,
         std::uint32_t extra_bound)
      : spec(sp), arena(build_arena(sp)), kind(k) {
    std::uint32_t maxdur = 0;
    for (const AgentSpec& ag : sp.agents)
      for (const LocalTransition& tr : ag.transitions)
        maxdur = std::max(maxdur, tr.duration);
    clamp = max_constant(f) + maxdur + 1 + extra_bound;
  }

  bool phi(const StateFormula* f, int s);
  bool gamma(const Pruned& p,
             std::map<std::pair<const PathFormula*, int>, bool>& memo,
             const PathFormula* g, int s);

  // predicate over states used as a U/R operand
  using Pred = std::function<bool(int)>;

  bool search_eu(const Pruned& p, const Pred& a, const Pred& b,
                 const Interval& iv, int s);
  bool search_er(const Pruned& p, const Pred& a, const Pred& b,
                 const Interval& iv, int s);
};

bool Oracle::phi(const StateFormula* f, int s) {
  auto key = std::make_pair(f, s);
  auto it = phi_memo.find(key);
  if (it != phi_memo.end()) return it->second;
  bool r = false;
  switch (f->kind) {
    case StateFormula::Kind::True: r = true; break;
    case StateFormula::Kind::False: r = false; break;
    case StateFormula::Kind::Prop: r = arena_prop(arena, s, f->prop); break;
    case StateFormula::Kind::Not: r = !phi(f->lhs.get(), s); break;
    case StateFormula::Kind::And:
      r = phi(f->lhs.get(), s) && phi(f->rhs.get(), s);
      break;
    case StateFormula::Kind::Or:
      r = phi(f->lhs.get(), s) || phi(f->rhs.get(), s);
      break;
    case StateFormula::Kind::Implies:
      r = !phi(f->lhs.get(), s) || phi(f->rhs.get(), s);
      break;
    case StateFormula::Kind::Coalition: {
      std::vector<int> coalition;
      for (const std::string& name : f->agents) {
        int id = spec.agent_index(name);
        if (id < 0)
          throw EngineError("unknown-agent", "unknown agent: " + name);
        coalition.push_back(id);
      }
      r = for_each_strategy(
          arena, coalition, kind, [&](const OracleStrategy& strat) {
            Pruned p = prune_arena(arena, coalition, strat);
            if (!p.core[static_cast<std::size_t>(s)]) return true;  // vacuous
            std::map<std::pair<const PathFormula*, int>, bool> memo;
            return gamma(p, memo, f->path.get(), s);
          });
      break;
    }
  }
  phi_memo.emplace(key, r);
  return r;
}

bool Oracle::search_eu(const Pruned& p, const Pred& a, const Pred& b,
                       const Interval& iv, int s) {
  // reachability through a-vertices to a b/in-interval/core vertex over the
  // (state, saturated counter) product
  const std::size_t n = p.arena->states.size();
  std::vector<char> visited(n * (clamp + 1), 0);
  auto dfs = [&](auto&& self, int v, std::uint32_t d) -> bool {
    std::size_t id = static_cast<std::size_t>(v) * (clamp + 1) + d;
    if (visited[id]) return false;
    visited[id] = 1;
    if (in_interval(d, iv, clamp) && b(v) && p.core[static_cast<std::size_t>(v)])
      return true;
    if (!a(v)) return false;
    for (const Step* st : p.allowed[static_cast<std::size_t>(v)])
      if (self(self, st->dst, std::min(d + st->duration, clamp))) return true;
    return false;
  };
  return dfs(dfs, s, 0);
}

bool Oracle::search_er(const Pruned& p, const Pred& a, const Pred& b,
                       const Interval& iv, int s) {
  // a lasso (or a-released prefix) whose every in-interval position
  // satisfies b; release positions need an infinite continuation
  const std::size_t n = p.arena->states.size();
  std::vector<signed char> mark(n * (clamp + 1), 0);  // 1 on stack, 2 done
  auto ok = [&](int v, std::uint32_t d) {
    return !in_interval(d, iv, clamp) || b(v);
  };
  auto dfs = [&](auto&& self, int v, std::uint32_t d) -> bool {
    if (!ok(v, d)) return false;
    std::size_t id = static_cast<std::size_t>(v) * (clamp + 1) + d;
    if (mark[id] == 1) return true;  // closed an all-ok lasso
    if (mark[id] == 2) return false;
    if (a(v) && p.core[static_cast<std::size_t>(v)]) return true;  // released
    mark[id] = 1;
    for (const Step* st : p.allowed[static_cast<std::size_t>(v)])
      if (self(self, st->dst, std::min(d + st->duration, clamp))) return true;
    mark[id] = 2;
    return false;
  };
  return dfs(dfs, s, 0);
}

bool Oracle::gamma(const Pruned& p,
                   std::map<std::pair<const PathFormula*, int>, bool>& memo,
                   const PathFormula* g, int s) {
  auto key = std::make_pair(g, s);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const bool in_core = p.core[static_cast<std::size_t>(s)] != 0;
  auto require_untimed = [&](const Interval& iv) {
    if (spec.semantics == Semantics::Untimed && !iv.is_full())
      throw EngineError("timed-on-untimed",
                        "timed operators need discrete or continuous time");
  };
  Pred lhs_pred = [&](int v) { return gamma(p, memo, g->lhs.get(), v); };
  Pred rhs_pred = [&](int v) { return gamma(p, memo, g->rhs.get(), v); };
  Pred not_lhs = [&](int v) {
    return p.core[static_cast<std::size_t>(v)] && !gamma(p, memo, g->lhs.get(), v);
  };
  Pred not_rhs = [&](int v) {
    return p.core[static_cast<std::size_t>(v)] && !gamma(p, memo, g->rhs.get(), v);
  };
  bool r = false;
  switch (g->kind) {
    case PathFormula::Kind::Lift: r = phi(g->state.get(), s); break;
    case PathFormula::Kind::Not:
      r = in_core && !gamma(p, memo, g->lhs.get(), s);
      break;
    case PathFormula::Kind::And:
      r = gamma(p, memo, g->lhs.get(), s) && gamma(p, memo, g->rhs.get(), s);
      break;
    case PathFormula::Kind::AllNext: {
      r = true;
      for (const Step* st : p.allowed[static_cast<std::size_t>(s)])
        if (p.core[static_cast<std::size_t>(st->dst)] &&
            !gamma(p, memo, g->lhs.get(), st->dst)) {
          r = false;
          break;
        }
      break;
    }
    case PathFormula::Kind::ExUntil:
      require_untimed(g->interval);
      r = search_eu(p, lhs_pred, rhs_pred, g->interval, s);
      break;
    case PathFormula::Kind::ExRelease:
      require_untimed(g->interval);
      r = search_er(p, lhs_pred, rhs_pred, g->interval, s);
      break;
    case PathFormula::Kind::AllUntil:
      require_untimed(g->interval);
      r = !search_er(p, not_lhs, not_rhs, g->interval, s);
      break;
    case PathFormula::Kind::AllRelease:
      require_untimed(g->interval);
      r = !search_eu(p, not_lhs, not_rhs, g->interval, s);
      break;
    default:
      throw std::logic_error("oracle: formula is not desugared");
  }
  memo.emplace(key, r);
  return r;
}

}  // namespace

bool oracle_check(const SystemSpec& spec, const StatePtr& f, StrategyKind kind,
                  std::uint32_t extra_bound) {
  StatePtr core_f = desugar(f);
  Oracle o(spec, core_f, kind, extra_bound);
  return o.phi(core_f.get(), o.arena.initial);
}

// ---------------------------------------------------------------------------
//  Random instances
// ---------------------------------------------------------------------------

SystemSpec random_system(const RandomSystemParams& params, std::uint64_t seed) {
  if (params.semantics == Semantics::Continuous)
    throw std::invalid_argument("random_system: continuous not supported");
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  SystemSpec spec;
  spec.semantics = params.semantics;
  spec.coordination = pick(0, 1) ? Coordination::Async : Coordination::Sync;

  static const char* kActionPool[] = {"a", "b", "c", "d"};
  static const char* kPropPool[] = {"p", "q", "r"};

  const int n = pick(1, params.max_agents);
  // alphabets first, so sync constraints can reference later agents
  std::vector<std::vector<std::string>> alphabets(static_cast<std::size_t>(n));
  for (auto& al : alphabets) {
    int nact = pick(1, params.max_actions);
    std::vector<int> ids = {0, 1, 2, 3};
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int k = 0; k < nact; ++k)
      al.push_back(kActionPool[static_cast<std::size_t>(ids[
          static_cast<std::size_t>(k)])]);
    std::sort(al.begin(), al.end());
  }

  for (int i = 0; i < n; ++i) {
    AgentSpec ag;
    ag.name = "ag" + std::to_string(i + 1);
    ag.actions = alphabets[static_cast<std::size_t>(i)];
    const int nloc = pick(1, params.max_locals);
    for (int l = 0; l < nloc; ++l) {
      ag.locals.push_back("q" + std::to_string(l));
      ag.invariants.emplace_back();
      ag.labels.emplace_back();
      for (const char* prop : kPropPool)
        if (pick(0, 3) == 0) ag.labels.back().push_back(prop);
    }
    ag.initial = 0;
    for (int l = 0; l < nloc; ++l) {
      const int ntr = pick(1, 2);
      for (int t = 0; t < ntr; ++t) {
        LocalTransition tr;
        tr.from = l;
        tr.action = pick(0, static_cast<int>(ag.actions.size()) - 1);
        tr.to = pick(0, nloc - 1);
        tr.duration = params.semantics == Semantics::Discrete
                          ? static_cast<std::uint32_t>(
                                pick(1, params.max_duration))
                          : 1;
        if (spec.coordination == Coordination::Sync && n > 1 && pick(0, 5) == 0) {
          int other = pick(0, n - 2);
          if (other >= i) ++other;
          const auto& al = alphabets[static_cast<std::size_t>(other)];
          tr.sync.push_back(
              {"ag" + std::to_string(other + 1),
               al[static_cast<std::size_t>(
                   pick(0, static_cast<int>(al.size()) - 1))]});
        }
        ag.transitions.push_back(std::move(tr));
      }
    }
    ag.protocol.assign(ag.locals.size(), {});
    for (const LocalTransition& tr : ag.transitions)
      ag.protocol[static_cast<std::size_t>(tr.from)].push_back(tr.action);
    for (auto& menu : ag.protocol) {
      std::sort(menu.begin(), menu.end());
      menu.erase(std::unique(menu.begin(), menu.end()), menu.end());
    }
    spec.agents.push_back(std::move(ag));
  }
  return spec;
}

}  // namespace stctl
