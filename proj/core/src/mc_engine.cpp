// ============================================================================
//  mc_engine.cpp -- CTL / TCTL / ATL fixpoint engines
// ============================================================================

#include "stctl/mc_engine.hpp"

#include <bit>
#include <cassert>
#include <unordered_map>

namespace stctl {

// ---------------------------------------------------------------------------
//  StateSet
// ---------------------------------------------------------------------------

StateSet StateSet::all(std::size_t n) {
  StateSet s(n);
  for (std::size_t i = 0; i < s.w_.size(); ++i) s.w_[i] = ~std::uint64_t{0};
  if (n & 63) s.w_.back() = (std::uint64_t{1} << (n & 63)) - 1;
  return s;
}

std::size_t StateSet::count() const {
  std::size_t c = 0;
  for (std::uint64_t x : w_) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

bool StateSet::any() const {
  for (std::uint64_t x : w_)
    if (x) return true;
  return false;
}

StateSet& StateSet::operator&=(const StateSet& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

StateSet& StateSet::operator|=(const StateSet& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

StateSet& StateSet::subtract(const StateSet& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
  return *this;
}

StateSet StateSet::complement() const {
  StateSet r = all(n_);
  r.subtract(*this);
  return r;
}

// ---------------------------------------------------------------------------
//  Shared helpers
// ---------------------------------------------------------------------------

namespace {

bool kept(const EdgeMask* mask, int e) {
  return mask == nullptr || (*mask)[static_cast<std::size_t>(e)];
}

void require_full(const Interval& iv, const char* structure) {
  if (!iv.is_full())
    throw EngineError("timed-on-untimed",
                      std::string("interval-bounded operator on an ") +
                          structure + " structure");
}

[[noreturn]] void not_desugared() {
  throw std::logic_error("engine requires a desugared formula");
}

// Guards the asserted convergence bound of every fixpoint loop.
struct IterationGuard {
  std::size_t left;
  explicit IterationGuard(std::size_t n) : left(n + 2) {}
  void tick() {
    if (left-- == 0) throw std::logic_error("fixpoint failed to converge");
  }
};

}  // namespace

// ---------------------------------------------------------------------------
//  Infinite-path cores
// ---------------------------------------------------------------------------

StateSet untimed_core(const GlobalModel& m, const EdgeMask* mask) {
  const std::size_t n = m.states.size();
  StateSet alive = StateSet::all(n);
  IterationGuard guard(n);
  for (bool changed = true; changed;) {
    guard.tick();
    changed = false;
    StateSet next(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive.test(v)) continue;
      bool ok = false;
      for (int e : m.out[v])
        if (kept(mask, e) &&
            alive.test(static_cast<std::size_t>(
                m.edges[static_cast<std::size_t>(e)].dst))) {
          ok = true;
          break;
        }
      if (ok)
        next.set(v);
      else
        changed = true;
    }
    alive = next;
  }
  return alive;
}

StateSet region_core(const RegionGraph& rg, const EdgeMask* mask) {
  const std::size_t n = rg.vertices.size();
  StateSet alive = StateSet::all(n);
  IterationGuard guard(n);
  std::vector<signed char> memo(n);
  for (bool changed = true; changed;) {
    guard.tick();
    changed = false;
    std::fill(memo.begin(), memo.end(), -1);
    // can(v): an action edge into `alive` is reachable through delay edges.
    // Delay chains are acyclic, so resolve each chain back to front.
    auto resolve = [&](std::size_t v0) {
      std::vector<std::size_t> chain;
      std::size_t v = v0;
      signed char tail = 0;
      for (;;) {
        if (memo[v] != -1) {
          tail = memo[v];
          break;
        }
        chain.push_back(v);
        int d = rg.vertices[v].delay_succ;
        if (d < 0) break;
        v = static_cast<std::size_t>(d);
      }
      for (std::size_t i = chain.size(); i-- > 0;) {
        std::size_t u = chain[i];
        bool ok = tail != 0;
        if (!ok)
          for (const auto& [e, tgt] : rg.vertices[u].actions)
            if (kept(mask, e) && alive.test(static_cast<std::size_t>(tgt))) {
              ok = true;
              break;
            }
        memo[u] = ok ? 1 : 0;
        tail = memo[u];
      }
      return memo[v0] == 1;
    };
    StateSet next(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive.test(v)) continue;
      if (resolve(v))
        next.set(v);
      else
        changed = true;
    }
    alive = next;
  }
  return alive;
}

// ---------------------------------------------------------------------------
//  CTL over an untimed global model
// ---------------------------------------------------------------------------

namespace {

struct UntimedCtx {
  const GlobalModel& m;
  const EdgeMask* mask;
  const LiftEval& lift;
  StateSet core;
};

StateSet u_pre_exists(const UntimedCtx& c, const StateSet& z) {
  StateSet r(c.m.states.size());
  for (std::size_t v = 0; v < c.m.states.size(); ++v)
    for (int e : c.m.out[v])
      if (kept(c.mask, e) &&
          z.test(static_cast<std::size_t>(
              c.m.edges[static_cast<std::size_t>(e)].dst))) {
        r.set(v);
        break;
      }
  return r;
}

StateSet u_eu(const UntimedCtx& c, const StateSet& a, const StateSet& b) {
  StateSet z = b & c.core;
  IterationGuard guard(c.m.states.size());
  for (;;) {
    guard.tick();
    StateSet next = z | (a & u_pre_exists(c, z));
    if (next == z) return z;
    z = next;
  }
}

StateSet u_er(const UntimedCtx& c, const StateSet& a, const StateSet& b) {
  StateSet z = b;
  StateSet release = a & c.core;
  IterationGuard guard(c.m.states.size());
  for (;;) {
    guard.tick();
    StateSet next = b & (release | u_pre_exists(c, z));
    if (next == z) return z;
    z = next;
  }
}

StateSet eval_untimed(const UntimedCtx& c, const PathPtr& g) {
  const std::size_t n = c.m.states.size();
  auto core_not = [&](const StateSet& s) { return c.core & s.complement(); };
  switch (g->kind) {
    case PathFormula::Kind::Lift: {
      StateSet s = c.lift(*g->state);
      if (s.size() != n) throw std::logic_error("lift set has wrong universe");
      return s;
    }
    case PathFormula::Kind::Not:
      return core_not(eval_untimed(c, g->lhs));
    case PathFormula::Kind::And:
      return eval_untimed(c, g->lhs) & eval_untimed(c, g->rhs);
    case PathFormula::Kind::AllNext: {
      StateSet s = eval_untimed(c, g->lhs);
      return u_pre_exists(c, core_not(s)).complement();
    }
    case PathFormula::Kind::ExUntil:
      require_full(g->interval, "untimed");
      return u_eu(c, eval_untimed(c, g->lhs), eval_untimed(c, g->rhs));
    case PathFormula::Kind::ExRelease:
      require_full(g->interval, "untimed");
      return u_er(c, eval_untimed(c, g->lhs), eval_untimed(c, g->rhs));
    case PathFormula::Kind::AllUntil:
      require_full(g->interval, "untimed");
      return u_er(c, core_not(eval_untimed(c, g->lhs)),
                  core_not(eval_untimed(c, g->rhs)))
          .complement();
    case PathFormula::Kind::AllRelease:
      require_full(g->interval, "untimed");
      return u_eu(c, core_not(eval_untimed(c, g->lhs)),
                  core_not(eval_untimed(c, g->rhs)))
          .complement();
    default:
      not_desugared();
  }
}

}  // namespace

StateSet check_ctl(const GlobalModel& m, const PathPtr& g, const LiftEval& lift,
                   const EdgeMask* mask) {
  UntimedCtx c{m, mask, lift, untimed_core(m, mask)};
  return eval_untimed(c, g);
}

// ---------------------------------------------------------------------------
//  TCTL over the saturated-counter product
// ---------------------------------------------------------------------------

namespace {

struct DiscreteCtx {
  const TimedStateGraph& tg;
  const EdgeMask* mask;
  const LiftEval& lift;
  StateSet core;  // over global states
};

void require_cmax(const Interval& iv, std::uint32_t c_max) {
  std::uint32_t top = iv.hi == Interval::kInf ? iv.lo : iv.hi;
  if (top != Interval::kInf && top > c_max)
    throw EngineError("c-max-too-small",
                      "interval endpoint exceeds the counter saturation bound");
}

StateSet d_pre_exists(const DiscreteCtx& c, const StateSet& z) {
  StateSet r(c.tg.vertices.size());
  for (std::size_t v = 0; v < c.tg.vertices.size(); ++v)
    for (const TimedEdge& te : c.tg.out[v])
      if (kept(c.mask, te.edge) && z.test(static_cast<std::size_t>(te.dst))) {
        r.set(v);
        break;
      }
  return r;
}

StateSet d_project(const DiscreteCtx& c, const StateSet& zp) {
  StateSet r(c.tg.zero_vertex.size());
  for (std::size_t s = 0; s < c.tg.zero_vertex.size(); ++s)
    if (zp.test(static_cast<std::size_t>(c.tg.zero_vertex[s]))) r.set(s);
  return r;
}

// Lifts a state set and a counter predicate to the product vertices.
StateSet d_lift_product(const DiscreteCtx& c, const StateSet& s) {
  StateSet r(c.tg.vertices.size());
  for (std::size_t v = 0; v < c.tg.vertices.size(); ++v)
    if (s.test(static_cast<std::size_t>(c.tg.vertices[v].state))) r.set(v);
  return r;
}

StateSet d_in_interval(const DiscreteCtx& c, const Interval& iv) {
  StateSet r(c.tg.vertices.size());
  for (std::size_t v = 0; v < c.tg.vertices.size(); ++v)
    if (interval_member(c.tg.vertices[v].d, iv)) r.set(v);
  return r;
}

StateSet d_eu(const DiscreteCtx& c, const StateSet& a, const Interval& iv,
              const StateSet& b) {
  require_cmax(iv, c.tg.c_max);
  StateSet ap = d_lift_product(c, a);
  StateSet z = d_lift_product(c, b & c.core) & d_in_interval(c, iv);
  IterationGuard guard(c.tg.vertices.size());
  for (;;) {
    guard.tick();
    StateSet next = z | (ap & d_pre_exists(c, z));
    if (next == z) return d_project(c, z);
    z = next;
  }
}

StateSet d_er(const DiscreteCtx& c, const StateSet& a, const Interval& iv,
              const StateSet& b) {
  require_cmax(iv, c.tg.c_max);
  StateSet obligation = d_lift_product(c, b) | d_in_interval(c, iv).complement();
  StateSet release = d_lift_product(c, a & c.core);
  StateSet z = obligation;
  IterationGuard guard(c.tg.vertices.size());
  for (;;) {
    guard.tick();
    StateSet next = obligation & (release | d_pre_exists(c, z));
    if (next == z) return d_project(c, z);
    z = next;
  }
}

StateSet eval_discrete(const DiscreteCtx& c, const PathPtr& g) {
  const GlobalModel& m = *c.tg.model;
  const std::size_t n = m.states.size();
  auto core_not = [&](const StateSet& s) { return c.core & s.complement(); };
  switch (g->kind) {
    case PathFormula::Kind::Lift: {
      StateSet s = c.lift(*g->state);
      if (s.size() != n) throw std::logic_error("lift set has wrong universe");
      return s;
    }
    case PathFormula::Kind::Not:
      return core_not(eval_discrete(c, g->lhs));
    case PathFormula::Kind::And:
      return eval_discrete(c, g->lhs) & eval_discrete(c, g->rhs);
    case PathFormula::Kind::AllNext: {
      // X steps over one action transition; counters are irrelevant.
      StateSet s = eval_discrete(c, g->lhs);
      StateSet bad = core_not(s);
      StateSet r(n);
      for (std::size_t v = 0; v < n; ++v) {
        bool hit = false;
        for (int e : m.out[v])
          if (kept(c.mask, e) &&
              bad.test(static_cast<std::size_t>(
                  m.edges[static_cast<std::size_t>(e)].dst))) {
            hit = true;
            break;
          }
        if (!hit) r.set(v);
      }
      return r;
    }
    case PathFormula::Kind::ExUntil:
      return d_eu(c, eval_discrete(c, g->lhs), g->interval,
                  eval_discrete(c, g->rhs));
    case PathFormula::Kind::ExRelease:
      return d_er(c, eval_discrete(c, g->lhs), g->interval,
                  eval_discrete(c, g->rhs));
    case PathFormula::Kind::AllUntil:
      return d_er(c, core_not(eval_discrete(c, g->lhs)), g->interval,
                  core_not(eval_discrete(c, g->rhs)))
          .complement();
    case PathFormula::Kind::AllRelease:
      return d_eu(c, core_not(eval_discrete(c, g->lhs)), g->interval,
                  core_not(eval_discrete(c, g->rhs)))
          .complement();
    default:
      not_desugared();
  }
}

}  // namespace

StateSet check_tctl_discrete(const TimedStateGraph& tg, const PathPtr& g,
                             const LiftEval& lift, const EdgeMask* mask) {
  DiscreteCtx c{tg, mask, lift, untimed_core(*tg.model, mask)};
  return eval_discrete(c, g);
}

// ---------------------------------------------------------------------------
//  TCTL over the region graph
// ---------------------------------------------------------------------------

namespace {

struct RegionCtx {
  const RegionGraph& rg;
  const EdgeMask* mask;
  const LiftEval& lift;
  StateSet core;
};

StateSet r_pre_exists(const RegionCtx& c, const StateSet& z) {
  StateSet r(c.rg.vertices.size());
  for (std::size_t v = 0; v < c.rg.vertices.size(); ++v) {
    const RegionVertex& vx = c.rg.vertices[v];
    if (vx.delay_succ >= 0 && z.test(static_cast<std::size_t>(vx.delay_succ))) {
      r.set(v);
      continue;
    }
    for (const auto& [e, tgt] : vx.actions)
      if (kept(c.mask, e) && z.test(static_cast<std::size_t>(tgt))) {
        r.set(v);
        break;
      }
  }
  return r;
}

StateSet r_in_interval(const RegionCtx& c, const Interval& iv) {
  StateSet r(c.rg.vertices.size());
  for (std::size_t v = 0; v < c.rg.vertices.size(); ++v)
    if (region_in_interval(c.rg.vertices[v].region, c.rg.z, iv, c.rg.maxc))
      r.set(v);
  return r;
}

// Reads the fixpoint at each vertex's z-reset vertex.
StateSet r_at_reset(const RegionCtx& c, const StateSet& z) {
  StateSet r(c.rg.vertices.size());
  for (std::size_t v = 0; v < c.rg.vertices.size(); ++v) {
    int w = c.rg.vertices[v].z_reset;
    if (w < 0)
      throw std::logic_error("timed operator needs a z-reset-closed graph");
    if (z.test(static_cast<std::size_t>(w))) r.set(v);
  }
  return r;
}

StateSet r_eu(const RegionCtx& c, const StateSet& a, const Interval& iv,
              const StateSet& b) {
  StateSet z = b & c.core;
  if (!iv.is_full()) z &= r_in_interval(c, iv);
  IterationGuard guard(c.rg.vertices.size());
  for (;;) {
    guard.tick();
    StateSet next = z | (a & r_pre_exists(c, z));
    if (next == z) break;
    z = next;
  }
  return iv.is_full() ? z : r_at_reset(c, z);
}

StateSet r_er(const RegionCtx& c, const StateSet& a, const Interval& iv,
              const StateSet& b) {
  StateSet obligation = b;
  if (!iv.is_full()) obligation |= r_in_interval(c, iv).complement();
  StateSet release = a & c.core;
  StateSet z = obligation;
  IterationGuard guard(c.rg.vertices.size());
  for (;;) {
    guard.tick();
    StateSet next = obligation & (release | r_pre_exists(c, z));
    if (next == z) break;
    z = next;
  }
  return iv.is_full() ? z : r_at_reset(c, z);
}

StateSet eval_region(const RegionCtx& c, const PathPtr& g) {
  const std::size_t n = c.rg.vertices.size();
  auto core_not = [&](const StateSet& s) { return c.core & s.complement(); };
  switch (g->kind) {
    case PathFormula::Kind::Lift: {
      StateSet s = c.lift(*g->state);
      if (s.size() != n) throw std::logic_error("lift set has wrong universe");
      return s;
    }
    case PathFormula::Kind::Not:
      return core_not(eval_region(c, g->lhs));
    case PathFormula::Kind::And:
      return eval_region(c, g->lhs) & eval_region(c, g->rhs);
    case PathFormula::Kind::AllNext:
      throw EngineError("x-not-supported-continuous",
                        "X is not defined under continuous semantics");
    case PathFormula::Kind::ExUntil:
      return r_eu(c, eval_region(c, g->lhs), g->interval,
                  eval_region(c, g->rhs));
    case PathFormula::Kind::ExRelease:
      return r_er(c, eval_region(c, g->lhs), g->interval,
                  eval_region(c, g->rhs));
    case PathFormula::Kind::AllUntil:
      return r_er(c, core_not(eval_region(c, g->lhs)), g->interval,
                  core_not(eval_region(c, g->rhs)))
          .complement();
    case PathFormula::Kind::AllRelease:
      return r_eu(c, core_not(eval_region(c, g->lhs)), g->interval,
                  core_not(eval_region(c, g->rhs)))
          .complement();
    default:
      not_desugared();
  }
}

}  // namespace

StateSet check_tctl_region(const RegionGraph& rg, const PathPtr& g,
                           const LiftEval& lift, const EdgeMask* mask) {
  RegionCtx c{rg, mask, lift, region_core(rg, mask)};
  return eval_region(c, g);
}

// ---------------------------------------------------------------------------
//  Perfect-information ATL
// ---------------------------------------------------------------------------

namespace {

struct AtlCtx {
  const GlobalModel& m;
  // async: per agent, action id -> event id (or -1)
  std::vector<std::vector<int>> act2event;

  bool matches(int state, const std::vector<int>& coal,
               const std::vector<int>& choice, const GlobalEdge& e) const {
    if (m.is_async()) {
      for (std::size_t i = 0; i < coal.size(); ++i) {
        bool mover = false;
        for (int a : e.movers) mover = mover || a == coal[i];
        if (mover &&
            act2event[static_cast<std::size_t>(coal[i])]
                     [static_cast<std::size_t>(choice[i])] != e.event)
          return false;
      }
      return true;
    }
    (void)state;
    for (std::size_t i = 0; i < coal.size(); ++i)
      if (e.action[static_cast<std::size_t>(coal[i])] != choice[i])
        return false;
    return true;
  }

  // Visits every coalition choice at `state`; f returns true to stop early.
  template <typename F>
  bool for_each_choice(int state, const std::vector<int>& coal, F f) const {
    std::vector<const std::vector<int>*> menu(coal.size());
    for (std::size_t i = 0; i < coal.size(); ++i) {
      const AgentSpec& ag = m.spec.agents[static_cast<std::size_t>(coal[i])];
      int local = m.states[static_cast<std::size_t>(state)]
                          [static_cast<std::size_t>(coal[i])];
      menu[i] = &ag.protocol[static_cast<std::size_t>(local)];
    }
    std::vector<std::size_t> idx(coal.size(), 0);
    std::vector<int> choice(coal.size());
    for (;;) {
      for (std::size_t i = 0; i < coal.size(); ++i)
        choice[i] = (*menu[i])[idx[i]];
      if (f(choice)) return true;
      std::size_t i = 0;
      while (i < coal.size() && ++idx[i] == menu[i]->size()) {
        idx[i] = 0;
        ++i;
      }
      if (i == coal.size()) return false;
    }
  }
};

// {s : some coalition choice sends every matching edge into z}
StateSet atl_pre(const AtlCtx& c, const std::vector<int>& coal,
                 const StateSet& z) {
  StateSet r(c.m.states.size());
  for (std::size_t s = 0; s < c.m.states.size(); ++s) {
    bool win = c.for_each_choice(
        static_cast<int>(s), coal, [&](const std::vector<int>& choice) {
          for (int e : c.m.out[s]) {
            const GlobalEdge& ge = c.m.edges[static_cast<std::size_t>(e)];
            if (c.matches(static_cast<int>(s), coal, choice, ge) &&
                !z.test(static_cast<std::size_t>(ge.dst)))
              return false;
          }
          return true;
        });
    if (win) r.set(s);
  }
  return r;
}

// States the coalition can exclude from every infinite execution (vacuous wins).
StateSet atl_dead(const AtlCtx& c, const std::vector<int>& coal) {
  StateSet d(c.m.states.size());
  IterationGuard guard(c.m.states.size());
  for (;;) {
    guard.tick();
    StateSet next = atl_pre(c, coal, d);
    if (next == d) return d;
    d = next;
  }
}

const StateFormula& atl_operand(const PathPtr& g) {
  if (!g || g->kind != PathFormula::Kind::Lift)
    throw EngineError("non-atl", "ATL operators take state-formula operands");
  return *g->state;
}

StateSet eval_atl(const AtlCtx& c, const StateFormula& f);

StateSet eval_atl_coalition(const AtlCtx& c, const StateFormula& f) {
  std::vector<int> coal;
  for (const std::string& name : f.agents) {
    int i = c.m.spec.agent_index(name);
    if (i < 0) throw EngineError("unknown-agent", "unknown agent: " + name);
    coal.push_back(i);
  }
  const PathFormula& g = *f.path;
  if (g.kind == PathFormula::Kind::AllUntil ||
      g.kind == PathFormula::Kind::AllRelease)
    require_full(g.interval, "untimed");

  StateSet dead = atl_dead(c, coal);
  IterationGuard guard(c.m.states.size());
  switch (g.kind) {
    case PathFormula::Kind::AllNext: {
      StateSet phi = eval_atl(c, atl_operand(g.lhs));
      return dead | atl_pre(c, coal, phi | dead);
    }
    case PathFormula::Kind::AllUntil: {
      StateSet a = eval_atl(c, atl_operand(g.lhs));
      StateSet b = eval_atl(c, atl_operand(g.rhs));
      StateSet z(c.m.states.size());
      for (;;) {
        guard.tick();
        StateSet next = dead | b | (a & atl_pre(c, coal, z));
        if (next == z) return z;
        z = next;
      }
    }
    case PathFormula::Kind::AllRelease: {
      StateSet a = eval_atl(c, atl_operand(g.lhs));
      StateSet b = eval_atl(c, atl_operand(g.rhs));
      StateSet z = StateSet::all(c.m.states.size());
      for (;;) {
        guard.tick();
        StateSet next = dead | (b & (a | atl_pre(c, coal, z)));
        if (next == z) return z;
        z = next;
      }
    }
    default:
      throw EngineError("non-atl",
                        "coalition body is not an elided-A X/U/R operator");
  }
}

StateSet eval_atl(const AtlCtx& c, const StateFormula& f) {
  const std::size_t n = c.m.states.size();
  switch (f.kind) {
    case StateFormula::Kind::True:
      return StateSet::all(n);
    case StateFormula::Kind::False:
      return StateSet(n);
    case StateFormula::Kind::Prop: {
      StateSet r(n);
      int p = c.m.prop_index(f.prop);
      if (p >= 0)
        for (std::size_t s = 0; s < n; ++s)
          if (c.m.state_has_prop(static_cast<int>(s), p)) r.set(s);
      return r;
    }
    case StateFormula::Kind::Not:
      return eval_atl(c, *f.lhs).complement();
    case StateFormula::Kind::And:
      return eval_atl(c, *f.lhs) & eval_atl(c, *f.rhs);
    case StateFormula::Kind::Or:
      return eval_atl(c, *f.lhs) | eval_atl(c, *f.rhs);
    case StateFormula::Kind::Implies:
      return eval_atl(c, *f.lhs).complement() | eval_atl(c, *f.rhs);
    case StateFormula::Kind::Coalition:
      return eval_atl_coalition(c, f);
  }
  not_desugared();
}

}  // namespace

StateSet check_atl_perfect(const GlobalModel& m, const StatePtr& f) {
  AtlCtx c{m, {}};
  if (m.is_async()) {
    c.act2event.resize(m.spec.agents.size());
    for (std::size_t i = 0; i < m.spec.agents.size(); ++i) {
      const AgentSpec& ag = m.spec.agents[i];
      c.act2event[i].assign(ag.actions.size(), -1);
      for (std::size_t a = 0; a < ag.actions.size(); ++a)
        for (std::size_t e = 0; e < m.events.size(); ++e)
          if (m.events[e] == ag.actions[a])
            c.act2event[i][a] = static_cast<int>(e);
    }
  }
  return eval_atl(c, *f);
}

}  // namespace stctl
