// ============================================================================
//  strategy_engine.cpp -- enumerate / prune / check over memoryless strategies
// ============================================================================

#include "stctl/strategy_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace stctl {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
//  Strategy kinds
// ---------------------------------------------------------------------------

const char* strategy_kind_name(StrategyKind k) {
  return k == StrategyKind::ir ? "ir" : "Ir";
}

StrategyKind parse_strategy_kind(const std::string& text) {
  if (text == "ir") return StrategyKind::ir;
  if (text == "Ir") return StrategyKind::Ir;
  if (text == "iR" || text == "IR")
    throw EngineError("unsupported-strategy-class",
                      "strategies with perfect recall are not supported");
  throw EngineError("bad-strategy-kind",
                    "unknown strategy kind '" + text + "' (expected ir or Ir)");
}

// ---------------------------------------------------------------------------
//  Enumeration
// ---------------------------------------------------------------------------

StrategyEnumerator::StrategyEnumerator(const SystemSpec& spec,
                                       const GlobalModel* m,
                                       const std::vector<std::string>& coalition,
                                       StrategyKind kind)
    : spec_(&spec), kind_(kind), agents_(coalition) {
  std::sort(agents_.begin(), agents_.end());
  agents_.erase(std::unique(agents_.begin(), agents_.end()), agents_.end());
  for (const std::string& name : agents_) {
    int id = spec.agent_index(name);
    if (id < 0) throw EngineError("unknown-agent", "unknown agent: " + name);
    agent_ids_.push_back(id);
  }
  if (kind == StrategyKind::Ir && m == nullptr && !agents_.empty())
    throw std::logic_error("Ir enumeration needs the composed model");
  for (int id : agent_ids_) {
    const AgentSpec& ag = spec.agents[static_cast<std::size_t>(id)];
    std::size_t begin = slots_.size();
    if (kind == StrategyKind::ir) {
      for (const std::vector<int>& menu : ag.protocol) slots_.push_back(menu);
    } else {
      for (const std::vector<int>& tuple : m->states)
        slots_.push_back(
            ag.protocol[static_cast<std::size_t>(tuple[static_cast<std::size_t>(id)])]);
    }
    slots_per_agent_.push_back(slots_.size() - begin);
  }
  for (const std::vector<int>& menu : slots_) {
    if (menu.empty()) throw std::logic_error("empty protocol slot");
    if (count_ > (std::uint64_t{1} << 62) / menu.size())
      throw EngineError("too-many-strategies",
                        "strategy space exceeds the enumeration limit");
    count_ *= menu.size();
  }
}

Strategy StrategyEnumerator::at(std::uint64_t index) const {
  Strategy s;
  s.kind = kind_;
  s.agents = agents_;
  s.agent_ids = agent_ids_;
  // lexicographic: the last slot is the least significant digit
  std::vector<int> digits(slots_.size());
  for (std::size_t i = slots_.size(); i-- > 0;) {
    std::size_t radix = slots_[i].size();
    digits[i] = static_cast<int>(index % radix);
    index /= radix;
  }
  std::size_t slot = 0;
  for (std::size_t a = 0; a < agent_ids_.size(); ++a) {
    std::vector<int> row;
    for (std::size_t k = 0; k < slots_per_agent_[a]; ++k, ++slot)
      row.push_back(slots_[slot][static_cast<std::size_t>(digits[slot])]);
    s.choice.push_back(std::move(row));
  }
  return s;
}

// ---------------------------------------------------------------------------
//  Pruning
// ---------------------------------------------------------------------------

namespace {

std::vector<int> make_act2event(const AgentSpec& ag,
                                const std::vector<std::string>& events) {
  std::vector<int> map(ag.actions.size(), -1);
  for (std::size_t a = 0; a < ag.actions.size(); ++a)
    for (std::size_t e = 0; e < events.size(); ++e)
      if (events[e] == ag.actions[a]) map[a] = static_cast<int>(e);
  return map;
}

}  // namespace

EdgeMask prune_mask(const GlobalModel& m, const Strategy& s) {
  EdgeMask mask(m.edges.size(), 1);
  std::vector<std::vector<int>> act2event;
  if (m.is_async())
    for (int id : s.agent_ids)
      act2event.push_back(
          make_act2event(m.spec.agents[static_cast<std::size_t>(id)], m.events));

  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const GlobalEdge& ge = m.edges[e];
    for (std::size_t k = 0; k < s.agent_ids.size() && mask[e]; ++k) {
      std::size_t a = static_cast<std::size_t>(s.agent_ids[k]);
      int picked =
          s.kind == StrategyKind::ir
              ? s.choice[k][static_cast<std::size_t>(
                    m.states[static_cast<std::size_t>(ge.src)][a])]
              : s.choice[k][static_cast<std::size_t>(ge.src)];
      if (m.is_async()) {
        bool mover = false;
        for (int mv : ge.movers) mover = mover || mv == s.agent_ids[k];
        if (mover && act2event[k][static_cast<std::size_t>(picked)] != ge.event)
          mask[e] = 0;
      } else {
        if (ge.action[a] != picked) mask[e] = 0;
      }
    }
  }
  return mask;
}

// ---------------------------------------------------------------------------
//  Parallel strategy scans
// ---------------------------------------------------------------------------

namespace {

struct Deadline {
  Clock::time_point at = Clock::time_point::max();
  bool expired() const { return Clock::now() >= at; }
};

Deadline make_deadline(std::uint64_t timeout_ms) {
  Deadline d;
  if (timeout_ms > 0) d.at = Clock::now() + std::chrono::milliseconds(timeout_ms);
  return d;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs `body(index)` over [0, count) on `jobs` workers; indices are claimed
// in ascending order.  `body` returns false to stop the whole scan.
template <typename Body>
void scan(std::uint64_t count, int jobs, const Deadline& deadline, Body body) {
  jobs = resolve_jobs(jobs);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> timed_out{false};
  std::mutex err_mutex;
  std::exception_ptr error;

  auto work = [&]() {
    try {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        if (deadline.expired()) {
          timed_out = true;
          stop = true;
          return;
        }
        std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        if (!body(i)) {
          stop = true;
          return;
        }
      }
    } catch (...) {
      std::scoped_lock lock(err_mutex);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };

  if (jobs <= 1 || count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  if (timed_out) throw TimeoutError("strategy scan exceeded the time limit");
}

// Minimum strategy index satisfying pred; deterministic under parallelism.
std::optional<std::uint64_t> scan_min(std::uint64_t count, int jobs,
                                      const Deadline& deadline,
                                      std::uint64_t* examined,
                                      const std::function<bool(std::uint64_t)>& pred) {
  std::atomic<std::uint64_t> best{~std::uint64_t{0}};
  std::atomic<std::uint64_t> seen{0};
  scan(count, jobs, deadline, [&](std::uint64_t i) {
    if (i > best.load(std::memory_order_relaxed)) return false;
    seen.fetch_add(1, std::memory_order_relaxed);
    if (pred(i)) {
      std::uint64_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
    return true;
  });
  if (examined) *examined = seen.load();
  std::uint64_t b = best.load();
  if (b == ~std::uint64_t{0}) return std::nullopt;
  return b;
}

std::vector<std::uint64_t> scan_all(std::uint64_t count, int jobs,
                                    const Deadline& deadline,
                                    std::uint64_t* examined,
                                    const std::function<bool(std::uint64_t)>& pred) {
  std::mutex mutex;
  std::vector<std::uint64_t> hits;
  std::atomic<std::uint64_t> seen{0};
  scan(count, jobs, deadline, [&](std::uint64_t i) {
    seen.fetch_add(1, std::memory_order_relaxed);
    if (pred(i)) {
      std::scoped_lock lock(mutex);
      hits.push_back(i);
    }
    return true;
  });
  if (examined) *examined = seen.load();
  std::sort(hits.begin(), hits.end());
  return hits;
}

// ---------------------------------------------------------------------------
//  The materialized structure (untimed / discrete / continuous)
// ---------------------------------------------------------------------------

struct Structure {
  const SystemSpec* spec = nullptr;
  // heap-allocated: tg/rg keep pointers into the model across moves
  std::unique_ptr<GlobalModel> model_ptr;
  std::optional<TimedStateGraph> tg;
  std::optional<RegionGraph> rg;

  std::size_t universe = 0;
  std::size_t initial = 0;

  const GlobalModel& model() const { return *model_ptr; }

  static Structure build(const SystemSpec& spec, const StatePtr& f) {
    Structure st;
    st.model_ptr = std::make_unique<GlobalModel>(compose(spec));
    std::uint32_t cmax = max_constant(f);
    switch (spec.semantics) {
      case Semantics::Untimed:
        st.universe = st.model().states.size();
        st.initial = static_cast<std::size_t>(st.model().initial);
        break;
      case Semantics::Discrete:
        st.tg = build_dts(st.model(), cmax);
        st.universe = st.model().states.size();
        st.initial = static_cast<std::size_t>(st.model().initial);
        break;
      case Semantics::Continuous:
        st.rg = build_region_graph(st.model(), cmax, true);
        st.universe = st.rg->vertices.size();
        st.initial = static_cast<std::size_t>(st.rg->initial);
        break;
    }
    st.spec = &spec;
    return st;
  }

  int state_of(std::size_t v) const {
    return rg ? rg->vertices[v].state : static_cast<int>(v);
  }

  StateSet core(const EdgeMask* mask) const {
    return rg ? region_core(*rg, mask) : untimed_core(model(), mask);
  }

  StateSet run_engine(const PathPtr& g, const LiftEval& lift,
                      const EdgeMask* mask) const {
    if (rg) return check_tctl_region(*rg, g, lift, mask);
    if (tg) return check_tctl_discrete(*tg, g, lift, mask);
    return check_ctl(model(), g, lift, mask);
  }
};

// ---------------------------------------------------------------------------
//  Bottom-up formula evaluation
// ---------------------------------------------------------------------------

void collect_lift_operands(const PathPtr& g, std::vector<StatePtr>& out) {
  if (!g) return;
  if (g->kind == PathFormula::Kind::Lift) {
    out.push_back(g->state);
    return;
  }
  collect_lift_operands(g->lhs, out);
  collect_lift_operands(g->rhs, out);
}

struct Evaluator {
  const Structure& st;
  const CheckOptions& opts;
  Deadline deadline;
  std::map<const StateFormula*, StateSet> cache;

  StateSet prop_set(const std::string& name) const {
    StateSet r(st.universe);
    int p = st.model().prop_index(name);
    if (p >= 0)
      for (std::size_t v = 0; v < st.universe; ++v)
        if (st.model().state_has_prop(st.state_of(v), p)) r.set(v);
    return r;
  }

  // Satisfaction set of <<A>>gamma under one fixed strategy: the engine
  // verdict, vacuously true wherever pruning removed all infinite paths.
  StateSet strategy_sat(const PathPtr& g, const LiftEval& lift,
                        const EdgeMask& mask) const {
    StateSet core = st.core(&mask);
    return st.run_engine(g, lift, &mask) | core.complement();
  }

  StateSet coalition_set(const StateFormula& f) {
    // nested state formulas first (strategy-independent)
    std::vector<StatePtr> lifts;
    collect_lift_operands(f.path, lifts);
    for (const StatePtr& sf : lifts) eval(*sf);
    LiftEval lift = [this](const StateFormula& sf) {
      auto it = cache.find(&sf);
      if (it == cache.end())
        throw std::logic_error("lift operand missing from the cache");
      return it->second;
    };

    StrategyEnumerator en(*st.spec, &st.model(), f.agents, opts.kind);
    std::mutex mutex;
    StateSet acc(st.universe);
    scan(en.count(), opts.jobs, deadline, [&](std::uint64_t i) {
      EdgeMask mask = prune_mask(st.model(), en.at(i));
      StateSet sat = strategy_sat(f.path, lift, mask);
      std::scoped_lock lock(mutex);
      acc |= sat;
      return true;
    });
    return acc;
  }

  const StateSet& eval(const StateFormula& f) {
    auto it = cache.find(&f);
    if (it != cache.end()) return it->second;
    StateSet r;
    switch (f.kind) {
      case StateFormula::Kind::True:
        r = StateSet::all(st.universe);
        break;
      case StateFormula::Kind::False:
        r = StateSet(st.universe);
        break;
      case StateFormula::Kind::Prop:
        r = prop_set(f.prop);
        break;
      case StateFormula::Kind::Not:
        r = eval(*f.lhs).complement();
        break;
      case StateFormula::Kind::And:
        r = eval(*f.lhs) & eval(*f.rhs);
        break;
      case StateFormula::Kind::Or:
        r = eval(*f.lhs) | eval(*f.rhs);
        break;
      case StateFormula::Kind::Implies:
        r = eval(*f.lhs).complement() | eval(*f.rhs);
        break;
      case StateFormula::Kind::Coalition:
        r = coalition_set(f);
        break;
    }
    return cache.emplace(&f, std::move(r)).first->second;
  }
};

// ---------------------------------------------------------------------------
//  Lazy on-the-fly path: <<A>> E(phi U_I psi), continuous, ir
// ---------------------------------------------------------------------------

bool coalition_free(const StatePtr& f) {
  if (!f) return true;
  if (f->kind == StateFormula::Kind::Coalition) return false;
  return coalition_free(f->lhs) && coalition_free(f->rhs);
}

bool lazy_applicable(const SystemSpec& spec, const StateFormula& f,
                     StrategyKind kind) {
  if (spec.semantics != Semantics::Continuous || kind != StrategyKind::ir)
    return false;
  if (f.kind != StateFormula::Kind::Coalition) return false;
  const PathFormula& g = *f.path;
  if (g.kind != PathFormula::Kind::ExUntil) return false;
  return g.lhs->kind == PathFormula::Kind::Lift &&
         g.rhs->kind == PathFormula::Kind::Lift &&
         coalition_free(g.lhs->state) && coalition_free(g.rhs->state);
}

// Evaluates a coalition-free state formula on a local-state tuple.
bool tuple_sat(const SystemSpec& spec, const std::vector<int>& tuple,
               const StateFormula& f) {
  switch (f.kind) {
    case StateFormula::Kind::True:
      return true;
    case StateFormula::Kind::False:
      return false;
    case StateFormula::Kind::Prop:
      for (std::size_t a = 0; a < spec.agents.size(); ++a)
        for (const std::string& p :
             spec.agents[a].labels[static_cast<std::size_t>(tuple[a])])
          if (p == f.prop) return true;
      return false;
    case StateFormula::Kind::Not:
      return !tuple_sat(spec, tuple, *f.lhs);
    case StateFormula::Kind::And:
      return tuple_sat(spec, tuple, *f.lhs) && tuple_sat(spec, tuple, *f.rhs);
    case StateFormula::Kind::Or:
      return tuple_sat(spec, tuple, *f.lhs) || tuple_sat(spec, tuple, *f.rhs);
    case StateFormula::Kind::Implies:
      return !tuple_sat(spec, tuple, *f.lhs) || tuple_sat(spec, tuple, *f.rhs);
    case StateFormula::Kind::Coalition:
      break;
  }
  throw std::logic_error("lazy path requires coalition-free operands");
}

class LazySearch {
 public:
  LazySearch(const SystemSpec& spec, const StateFormula& f,
             const Deadline& deadline)
      : spec_(spec), gen_(spec), deadline_(deadline), goal_(*f.path) {
    // per-clock max constants from every guard/invariant, formula z last
    maxc_.assign(gen_.clocks().size() + 1, 0);
    z_ = static_cast<int>(gen_.clocks().size());
    for (std::size_t a = 0; a < spec.agents.size(); ++a) {
      auto absorb = [&](const ClockConstraint& cc) {
        for (const ClockAtom& atom : cc.atoms) {
          std::size_t x = static_cast<std::size_t>(
              gen_.global_clock(static_cast<int>(a), atom.clock));
          maxc_[x] = std::max(maxc_[x], atom.bound);
          if (atom.diff) {
            std::size_t y = static_cast<std::size_t>(
                gen_.global_clock(static_cast<int>(a), atom.clock2));
            maxc_[y] = std::max(maxc_[y], atom.bound);
          }
        }
      };
      for (const LocalTransition& tr : spec.agents[a].transitions)
        absorb(tr.guard);
      for (const ClockConstraint& inv : spec.agents[a].invariants) absorb(inv);
    }
    const Interval& iv = goal_.interval;
    std::uint32_t ztop = iv.hi == Interval::kInf ? iv.lo : iv.hi;
    maxc_[static_cast<std::size_t>(z_)] = ztop == Interval::kInf ? 0 : ztop;
    if (spec.coordination == Coordination::Async)
      for (const AgentSpec& ag : spec.agents)
        act2event_.push_back(make_act2event(ag, gen_.events()));
  }

  std::size_t explored() const { return verts_.size(); }

  // Does the pruned system admit an execution satisfying phi U_I psi from the
  // initial configuration (or no infinite execution at all: vacuous truth)?
  bool check(const Strategy& s) {
    strategy_ = &s;
    verts_.clear();
    index_.clear();
    inf_memo_.clear();
    Region r0 = region_of(ClockValuation(maxc_.size(), 0.0), maxc_);
    int init = intern(gen_.initial_state(), r0);
    if (!can_reach_cycle(init)) return true;  // no infinite execution at all
    // depth-first search through phi-vertices for a psi/in-interval hit
    std::vector<char> visited(1, 0);
    std::vector<int> stack{init};
    visited.resize(verts_.size(), 0);
    visited[static_cast<std::size_t>(init)] = 1;
    while (!stack.empty()) {
      if (deadline_.expired())
        throw TimeoutError("lazy search exceeded the time limit");
      int v = stack.back();
      stack.pop_back();
      const Vertex& vx = verts_[static_cast<std::size_t>(v)];
      bool psi = tuple_sat(spec_, vx.tuple, *goal_.rhs->state) &&
                 region_in_interval(vx.region, z_, goal_.interval, maxc_);
      if (psi && can_reach_cycle(v)) return true;
      if (!tuple_sat(spec_, vx.tuple, *goal_.lhs->state)) continue;
      std::vector<int> succ = successors(v);
      visited.resize(verts_.size(), 0);
      // push in reverse so coalition-preferred successors pop first
      for (std::size_t i = succ.size(); i-- > 0;) {
        int w = succ[i];
        if (!visited[static_cast<std::size_t>(w)]) {
          visited[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    return false;
  }

 private:
  struct Vertex {
    std::vector<int> tuple;
    Region region;
  };

  const SystemSpec& spec_;
  SuccessorGen gen_;
  Deadline deadline_;
  const PathFormula& goal_;
  MaxConsts maxc_;
  int z_ = -1;
  std::vector<std::vector<int>> act2event_;
  const Strategy* strategy_ = nullptr;

  std::vector<Vertex> verts_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<int, signed char> inf_memo_;
  std::vector<SuccessorGen::Succ> scratch_;

  int intern(const std::vector<int>& tuple, const Region& region) {
    std::string key;
    key.reserve(tuple.size() * 4 + region.ip.size() * 2);
    for (int l : tuple) key.append(reinterpret_cast<const char*>(&l), 4);
    key.append(reinterpret_cast<const char*>(region.ip.data()),
               region.ip.size());
    key.append(reinterpret_cast<const char*>(region.fr.data()),
               region.fr.size());
    auto [it, fresh] = index_.try_emplace(key, static_cast<int>(verts_.size()));
    if (fresh) verts_.push_back({tuple, region});
    return it->second;
  }

  bool allowed(const std::vector<int>& tuple, const SuccessorGen::Succ& sc) const {
    const Strategy& s = *strategy_;
    for (std::size_t k = 0; k < s.agent_ids.size(); ++k) {
      std::size_t a = static_cast<std::size_t>(s.agent_ids[k]);
      int picked = s.choice[k][static_cast<std::size_t>(tuple[a])];
      if (spec_.coordination == Coordination::Async) {
        bool mover = false;
        for (int mv : sc.movers) mover = mover || mv == s.agent_ids[k];
        if (mover && act2event_[a][static_cast<std::size_t>(picked)] != sc.event)
          return false;
      } else {
        if (sc.action[a] != picked) return false;
      }
    }
    return true;
  }

  // Action successors first (strategy-consistent, guard- and invariant-
  // checked), then the delay successor.
  std::vector<int> successors(int v) {
    Vertex vx = verts_[static_cast<std::size_t>(v)];  // copy: verts_ may grow
    std::vector<int> out;
    gen_.successors(vx.tuple, scratch_);
    for (const SuccessorGen::Succ& sc : scratch_) {
      if (sc.duration_mismatch || !allowed(vx.tuple, sc)) continue;
      if (!region_satisfies(vx.region, sc.guard, maxc_)) continue;
      Region nr = reset_region(vx.region, sc.resets);
      if (!region_satisfies(nr, gen_.invariant(sc.target), maxc_)) continue;
      out.push_back(intern(sc.target, nr));
    }
    Region dr = time_successor(vx.region, maxc_);
    if (!(dr == vx.region) &&
        region_satisfies(dr, gen_.invariant(vx.tuple), maxc_))
      out.push_back(intern(vx.tuple, dr));
    return out;
  }

  // Can some pruned execution from v take infinitely many actions?  True iff
  // a cycle is reachable (delay edges are acyclic, so cycles contain actions).
  bool can_reach_cycle(int v0) {
    enum : signed char { kNo = 0, kYes = 1, kOnStack = 2 };
    struct Frame {
      int v;
      std::vector<int> succ;
      std::size_t next = 0;
    };
    auto memo = [&](int v) -> signed char* {
      auto it = inf_memo_.find(v);
      return it == inf_memo_.end() ? nullptr : &it->second;
    };
    if (signed char* s = memo(v0)) {
      if (*s != kOnStack) return *s == kYes;
    }
    std::vector<Frame> stack;
    stack.push_back({v0, successors(v0)});
    inf_memo_[v0] = kOnStack;
    bool result = false;
    while (!stack.empty()) {
      if (deadline_.expired())
        throw TimeoutError("lazy search exceeded the time limit");
      Frame& fr = stack.back();
      if (fr.next < fr.succ.size()) {
        int w = fr.succ[fr.next++];
        signed char* s = memo(w);
        if (s && *s == kOnStack) {  // found a cycle
          result = true;
        } else if (s && *s == kYes) {
          result = true;
        } else if (!s) {
          inf_memo_[w] = kOnStack;
          stack.push_back({w, successors(w)});
          continue;
        }
        if (result) break;
      } else {
        inf_memo_[fr.v] = kNo;
        stack.pop_back();
      }
    }
    if (result) {
      // everything still on the stack reaches the cycle
      for (const Frame& fr : stack) inf_memo_[fr.v] = kYes;
      return true;
    }
    return false;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
//  check_strategic / synth_all
// ---------------------------------------------------------------------------

namespace {

std::uint64_t elapsed_ms(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
          .count());
}

// Shared driver for check / synth on the lazy path.
Verdict lazy_check(const SystemSpec& spec, const StateFormula& f,
                   const CheckOptions& opts, std::vector<Strategy>* all_out) {
  Clock::time_point start = Clock::now();
  Deadline deadline = make_deadline(opts.timeout_ms);
  StrategyEnumerator en(spec, nullptr, f.agents, StrategyKind::ir);
  Verdict v;
  v.stats.strategy_count = en.count();
  v.stats.lazy_path = true;

  std::mutex mutex;  // LazySearch per worker would also do; keep one, locked
  LazySearch search(spec, f, deadline);
  auto pred = [&](std::uint64_t i) {
    std::scoped_lock lock(mutex);
    return search.check(en.at(i));
  };

  if (all_out) {
    std::vector<std::uint64_t> hits =
        scan_all(en.count(), opts.jobs, deadline, &v.stats.strategies_examined, pred);
    for (std::uint64_t i : hits) all_out->push_back(en.at(i));
    v.holds = !hits.empty();
    if (v.holds && opts.want_witness) v.witness = en.at(hits.front());
  } else {
    std::optional<std::uint64_t> best = scan_min(
        en.count(), opts.jobs, deadline, &v.stats.strategies_examined, pred);
    v.holds = best.has_value();
    if (best && opts.want_witness) v.witness = en.at(*best);
  }
  v.stats.structure_vertices = search.explored();
  v.stats.millis = elapsed_ms(start);
  return v;
}

Verdict general_check(const SystemSpec& spec, const StatePtr& f,
                      const CheckOptions& opts, std::vector<Strategy>* all_out) {
  Clock::time_point start = Clock::now();
  Structure st = Structure::build(spec, f);
  Evaluator ev{st, opts, make_deadline(opts.timeout_ms), {}};

  Verdict v;
  v.stats.states = st.model().states.size();
  v.stats.structure_vertices = st.universe;
  v.stats.edges = st.model().edges.size();

  if (f->kind != StateFormula::Kind::Coalition) {
    if (all_out)
      throw EngineError("not-strategic",
                        "synthesis needs a strategic outermost operator");
    v.holds = ev.eval(*f).test(st.initial);
    v.stats.millis = elapsed_ms(start);
    return v;
  }

  // nested operands first, then scan the outermost coalition's strategies
  std::vector<StatePtr> lifts;
  collect_lift_operands(f->path, lifts);
  for (const StatePtr& sf : lifts) ev.eval(*sf);
  LiftEval lift = [&ev](const StateFormula& sf) {
    auto it = ev.cache.find(&sf);
    if (it == ev.cache.end())
      throw std::logic_error("lift operand missing from the cache");
    return it->second;
  };

  StrategyEnumerator en(spec, &st.model(), f->agents, opts.kind);
  v.stats.strategy_count = en.count();
  auto pred = [&](std::uint64_t i) {
    EdgeMask mask = prune_mask(st.model(), en.at(i));
    return ev.strategy_sat(f->path, lift, mask).test(st.initial);
  };

  if (all_out) {
    std::vector<std::uint64_t> hits = scan_all(
        en.count(), opts.jobs, ev.deadline, &v.stats.strategies_examined, pred);
    for (std::uint64_t i : hits) all_out->push_back(en.at(i));
    v.holds = !hits.empty();
    if (v.holds && opts.want_witness) v.witness = en.at(hits.front());
  } else {
    std::optional<std::uint64_t> best = scan_min(
        en.count(), opts.jobs, ev.deadline, &v.stats.strategies_examined, pred);
    v.holds = best.has_value();
    if (best && opts.want_witness) v.witness = en.at(*best);
  }
  v.stats.millis = elapsed_ms(start);
  return v;
}

}  // namespace

Verdict check_strategic(const SystemSpec& spec, const StatePtr& f0,
                        const CheckOptions& opts) {
  StatePtr f = desugar(f0);
  if (lazy_applicable(spec, *f, opts.kind))
    return lazy_check(spec, *f, opts, nullptr);
  return general_check(spec, f, opts, nullptr);
}

std::vector<Strategy> synth_all(const SystemSpec& spec, const StatePtr& f0,
                                const CheckOptions& opts) {
  StatePtr f = desugar(f0);
  if (f->kind != StateFormula::Kind::Coalition)
    throw EngineError("not-strategic",
                      "synthesis needs a strategic outermost operator");
  std::vector<Strategy> all;
  if (lazy_applicable(spec, *f, opts.kind))
    lazy_check(spec, *f, opts, &all);
  else
    general_check(spec, f, opts, &all);
  return all;
}

bool verify_witness(const SystemSpec& spec, const StatePtr& f0,
                    const Strategy& s) {
  StatePtr f = desugar(f0);
  if (f->kind != StateFormula::Kind::Coalition)
    throw EngineError("not-strategic", "witnesses belong to strategic formulas");
  if (lazy_applicable(spec, *f, s.kind)) {
    Deadline none;
    LazySearch search(spec, *f, none);
    return search.check(s);
  }
  Structure st = Structure::build(spec, f);
  CheckOptions opts;
  opts.kind = s.kind;
  Evaluator ev{st, opts, Deadline{}, {}};
  std::vector<StatePtr> lifts;
  collect_lift_operands(f->path, lifts);
  for (const StatePtr& sf : lifts) ev.eval(*sf);
  LiftEval lift = [&ev](const StateFormula& sf) {
    auto it = ev.cache.find(&sf);
    if (it == ev.cache.end())
      throw std::logic_error("lift operand missing from the cache");
    return it->second;
  };
  EdgeMask mask = prune_mask(st.model(), s);
  return ev.strategy_sat(f->path, lift, mask).test(st.initial);
}

// ---------------------------------------------------------------------------
//  Serialization
// ---------------------------------------------------------------------------

nlohmann::json strategy_to_json(const SystemSpec& spec, const GlobalModel* m,
                                const Strategy& s) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t k = 0; k < s.agent_ids.size(); ++k) {
    const AgentSpec& ag =
        spec.agents[static_cast<std::size_t>(s.agent_ids[k])];
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t slot = 0; slot < s.choice[k].size(); ++slot) {
      std::string state;
      if (s.kind == StrategyKind::ir) {
        state = ag.locals[slot];
      } else {
        if (m == nullptr)
          throw std::logic_error("Ir serialization needs the composed model");
        state = m->state_name(static_cast<int>(slot));
      }
      row[state] = ag.actions[static_cast<std::size_t>(s.choice[k][slot])];
    }
    j[ag.name] = std::move(row);
  }
  return j;
}

nlohmann::json verdict_to_json(const SystemSpec& spec, const GlobalModel* m,
                               const Verdict& v) {
  nlohmann::json j;
  j["holds"] = v.holds;
  if (v.witness) j["witness"] = strategy_to_json(spec, m, *v.witness);
  j["stats"] = {{"strategy_count", v.stats.strategy_count},
                {"strategies_examined", v.stats.strategies_examined},
                {"states", v.stats.states},
                {"structure_vertices", v.stats.structure_vertices},
                {"edges", v.stats.edges},
                {"millis", v.stats.millis},
                {"lazy_path", v.stats.lazy_path}};
  return j;
}

}  // namespace stctl
