// ============================================================================
//  compose.cpp -- product construction for sync/async agent networks
// ============================================================================

#include "stctl/compose.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "json.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  SuccessorGen
// ---------------------------------------------------------------------------

SuccessorGen::SuccessorGen(const SystemSpec& spec) : spec_(&spec) {
  const std::size_t n = spec.agents.size();
  clock_base_.resize(n);
  by_local_.resize(n);
  sync_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AgentSpec& ag = spec.agents[i];
    clock_base_[i] = static_cast<int>(clocks_.size());
    for (const std::string& c : ag.clocks) clocks_.push_back(ag.name + "." + c);
    by_local_[i].assign(ag.locals.size(), {});
    sync_[i].resize(ag.transitions.size());
    for (std::size_t t = 0; t < ag.transitions.size(); ++t) {
      const LocalTransition& tr = ag.transitions[t];
      by_local_[i][static_cast<std::size_t>(tr.from)].push_back(static_cast<int>(t));
      for (const SyncConstraint& sc : tr.sync) {
        int j = spec.agent_index(sc.agent);
        int a = j >= 0 ? spec.agents[static_cast<std::size_t>(j)].action_index(sc.action)
                       : -1;
        if (j < 0 || a < 0)
          throw ModelError("unresolved sync constraint on agent '" + ag.name + "'");
        sync_[i][t].emplace_back(j, a);
      }
    }
  }
  if (spec.coordination == Coordination::Async) {
    for (std::size_t i = 0; i < n; ++i)
      for (const std::string& a : spec.agents[i].actions)
        if (std::find(events_.begin(), events_.end(), a) == events_.end())
          events_.push_back(a);
    event_movers_.resize(events_.size());
    event_action_.assign(events_.size(), std::vector<int>(n, -1));
    for (std::size_t e = 0; e < events_.size(); ++e)
      for (std::size_t i = 0; i < n; ++i) {
        int a = spec.agents[i].action_index(events_[e]);
        if (a >= 0) {
          event_movers_[e].push_back(static_cast<int>(i));
          event_action_[e][i] = a;
        }
      }
  }
}

std::vector<int> SuccessorGen::initial_state() const {
  std::vector<int> s;
  s.reserve(spec_->agents.size());
  for (const AgentSpec& ag : spec_->agents) s.push_back(ag.initial);
  return s;
}

ClockConstraint SuccessorGen::remap(const ClockConstraint& cc, int agent) const {
  if (cc.is_true()) return cc;
  ClockConstraint out = cc;
  int base = clock_base_[static_cast<std::size_t>(agent)];
  for (ClockAtom& a : out.atoms) {
    a.clock += base;
    if (a.diff) a.clock2 += base;
  }
  return out;
}

ClockConstraint SuccessorGen::invariant(const std::vector<int>& s) const {
  ClockConstraint out;
  for (std::size_t i = 0; i < spec_->agents.size(); ++i) {
    const ClockConstraint& inv =
        spec_->agents[i].invariants[static_cast<std::size_t>(s[i])];
    if (inv.is_true()) continue;
    ClockConstraint r = remap(inv, static_cast<int>(i));
    out.atoms.insert(out.atoms.end(), r.atoms.begin(), r.atoms.end());
  }
  return out;
}

void SuccessorGen::successors(const std::vector<int>& s,
                              std::vector<Succ>& out) const {
  out.clear();
  if (spec_->coordination == Coordination::Sync) sync_successors(s, out);
  else async_successors(s, out);
}

void SuccessorGen::sync_successors(const std::vector<int>& s,
                                   std::vector<Succ>& out) const {
  const std::size_t n = spec_->agents.size();
  // candidate local transitions per agent; a sync step needs one from each
  std::vector<const std::vector<int>*> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    cands[i] = &by_local_[i][static_cast<std::size_t>(s[i])];
    if (cands[i]->empty()) return;
  }
  std::vector<int> pick(n, 0);       // index into cands[i]
  std::vector<int> actions(n, -1);
  for (;;) {
    // materialize this combination
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const LocalTransition& tr =
          spec_->agents[i].transitions[static_cast<std::size_t>(
              (*cands[i])[static_cast<std::size_t>(pick[i])])];
      actions[static_cast<std::size_t>(i)] = tr.action;
    }
    for (std::size_t i = 0; i < n && ok; ++i) {
      int ti = (*cands[i])[static_cast<std::size_t>(pick[i])];
      for (const auto& [j, a] : sync_[i][static_cast<std::size_t>(ti)])
        if (actions[static_cast<std::size_t>(j)] != a) { ok = false; break; }
    }
    if (ok) {
      Succ succ;
      succ.target.resize(n);
      succ.action = actions;
      bool mismatch = false;
      std::uint32_t dur = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const LocalTransition& tr =
            spec_->agents[i].transitions[static_cast<std::size_t>(
                (*cands[i])[static_cast<std::size_t>(pick[i])])];
        succ.target[i] = tr.to;
        if (!tr.guard.is_true()) {
          ClockConstraint g = remap(tr.guard, static_cast<int>(i));
          succ.guard.atoms.insert(succ.guard.atoms.end(), g.atoms.begin(),
                                  g.atoms.end());
        }
        for (int c : tr.resets)
          succ.resets.push_back(global_clock(static_cast<int>(i), c));
        if (i == 0) dur = tr.duration;
        else if (tr.duration != dur) mismatch = true;
      }
      std::sort(succ.resets.begin(), succ.resets.end());
      succ.duration = dur;
      // Def. 5: discrete sync requires duration agreement across all agents
      succ.duration_mismatch =
          mismatch && spec_->semantics == Semantics::Discrete;
      out.push_back(std::move(succ));
    }
    // odometer
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (static_cast<std::size_t>(++pick[i]) < cands[i]->size()) break;
      pick[i] = 0;
    }
    if (i == n) break;
  }
}

void SuccessorGen::async_successors(const std::vector<int>& s,
                                    std::vector<Succ>& out) const {
  for (std::size_t e = 0; e < events_.size(); ++e) {
    const std::vector<int>& movers = event_movers_[e];
    // candidate transitions per mover
    std::vector<std::vector<int>> cands(movers.size());
    bool blocked = false;
    for (std::size_t m = 0; m < movers.size(); ++m) {
      int i = movers[m];
      int want = event_action_[e][static_cast<std::size_t>(i)];
      for (int t : by_local_[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(s[static_cast<std::size_t>(i)])])
        if (spec_->agents[static_cast<std::size_t>(i)]
                .transitions[static_cast<std::size_t>(t)]
                .action == want)
          cands[m].push_back(t);
      if (cands[m].empty()) { blocked = true; break; }
    }
    if (blocked) continue;
    std::vector<std::size_t> pick(movers.size(), 0);
    for (;;) {
      Succ succ;
      succ.target = s;
      succ.event = static_cast<int>(e);
      succ.movers = movers;
      std::uint32_t dur = 1;
      for (std::size_t m = 0; m < movers.size(); ++m) {
        int i = movers[m];
        const LocalTransition& tr =
            spec_->agents[static_cast<std::size_t>(i)]
                .transitions[static_cast<std::size_t>(cands[m][pick[m]])];
        succ.target[static_cast<std::size_t>(i)] = tr.to;
        if (!tr.guard.is_true()) {
          ClockConstraint g = remap(tr.guard, i);
          succ.guard.atoms.insert(succ.guard.atoms.end(), g.atoms.begin(),
                                  g.atoms.end());
        }
        for (int c : tr.resets) succ.resets.push_back(global_clock(i, c));
        // Def. Model of DAMAS: the slowest mover slows down its partners
        dur = m == 0 ? tr.duration : std::max(dur, tr.duration);
      }
      std::sort(succ.resets.begin(), succ.resets.end());
      succ.duration = dur;
      out.push_back(std::move(succ));
      std::size_t m = 0;
      for (; m < movers.size(); ++m) {
        if (++pick[m] < cands[m].size()) break;
        pick[m] = 0;
      }
      if (m == movers.size()) break;
    }
  }
}

// ---------------------------------------------------------------------------
//  GlobalModel helpers
// ---------------------------------------------------------------------------

int GlobalModel::prop_index(const std::string& p) const {
  auto it = std::find(props.begin(), props.end(), p);
  return it == props.end() ? -1 : static_cast<int>(it - props.begin());
}

bool GlobalModel::state_has_prop(int state, int prop) const {
  const auto& ps = state_props[static_cast<std::size_t>(state)];
  return std::binary_search(ps.begin(), ps.end(), prop);
}

std::string GlobalModel::state_name(int state) const {
  std::string out;
  const auto& tuple = states[static_cast<std::size_t>(state)];
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += spec.agents[i].locals[static_cast<std::size_t>(tuple[i])];
  }
  return out;
}

// ---------------------------------------------------------------------------
//  Composition
// ---------------------------------------------------------------------------

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

constexpr std::size_t kFullProductCap = 2000000;
constexpr std::size_t kLintCap = 50;

void finish_state(GlobalModel& m, const SuccessorGen& gen,
                  const std::vector<int>& tuple) {
  m.invariants.push_back(gen.invariant(tuple));
  std::vector<int> props;
  for (std::size_t i = 0; i < m.spec.agents.size(); ++i)
    for (const std::string& p :
         m.spec.agents[i].labels[static_cast<std::size_t>(tuple[i])]) {
      int id = m.prop_index(p);
      if (id < 0) {
        m.props.push_back(p);
        id = static_cast<int>(m.props.size() - 1);
      }
      props.push_back(id);
    }
  std::sort(props.begin(), props.end());
  props.erase(std::unique(props.begin(), props.end()), props.end());
  m.state_props.push_back(std::move(props));
}

void lint_mismatch(GlobalModel& m, int src, const SuccessorGen::Succ& sc) {
  if (m.lints.size() == kLintCap) {
    m.lints.push_back("... further duration-mismatch combinations omitted");
    return;
  }
  if (m.lints.size() > kLintCap) return;
  std::string msg = "duration mismatch drops joint action (";
  for (std::size_t i = 0; i < sc.action.size(); ++i) {
    if (i) msg += ",";
    msg += m.spec.agents[i].actions[static_cast<std::size_t>(sc.action[i])];
  }
  msg += ") at state " + m.state_name(src);
  m.lints.push_back(std::move(msg));
}

GlobalModel compose_impl(const SystemSpec& spec, ComposeMode mode) {
  GlobalModel m;
  m.spec = spec;
  SuccessorGen gen(m.spec);
  m.clocks = gen.clocks();
  m.clock_base.resize(m.spec.agents.size());
  for (std::size_t i = 0; i < m.spec.agents.size(); ++i)
    m.clock_base[i] = gen.global_clock(static_cast<int>(i), 0);
  m.events = gen.events();

  std::unordered_map<std::vector<int>, int, TupleHash> index;
  auto intern = [&](const std::vector<int>& tuple) -> int {
    auto it = index.find(tuple);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(m.states.size());
    index.emplace(tuple, id);
    m.states.push_back(tuple);
    finish_state(m, gen, tuple);
    return id;
  };

  std::vector<SuccessorGen::Succ> succs;
  if (mode == ComposeMode::Full) {
    std::size_t product = 1;
    for (const AgentSpec& ag : spec.agents) {
      product *= ag.locals.size();
      if (product > kFullProductCap)
        throw ModelError("full product too large to materialize");
    }
    // enumerate all tuples in lexicographic order (first agent slowest)
    std::vector<int> tuple(spec.agents.size(), 0);
    for (;;) {
      intern(tuple);
      std::size_t i = tuple.size();
      for (; i > 0; --i) {
        std::size_t k = i - 1;
        if (static_cast<std::size_t>(++tuple[k]) < spec.agents[k].locals.size())
          break;
        tuple[k] = 0;
      }
      if (i == 0) break;
    }
    m.initial = index.at(gen.initial_state());
    m.out.resize(m.states.size());
    for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
      gen.successors(m.states[static_cast<std::size_t>(s)], succs);
      for (const auto& sc : succs) {
        if (sc.duration_mismatch) { lint_mismatch(m, s, sc); continue; }
        GlobalEdge e;
        e.src = s;
        e.dst = index.at(sc.target);
        e.guard = sc.guard;
        e.resets = sc.resets;
        e.duration = sc.duration;
        e.action = sc.action;
        e.event = sc.event;
        e.movers = sc.movers;
        m.out[static_cast<std::size_t>(s)].push_back(static_cast<int>(m.edges.size()));
        m.edges.push_back(std::move(e));
      }
    }
    return m;
  }

  // Reachable mode: BFS from the initial tuple, guards ignored.
  m.initial = intern(gen.initial_state());
  for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
    m.out.resize(m.states.size());
    gen.successors(m.states[static_cast<std::size_t>(s)], succs);
    for (const auto& sc : succs) {
      if (sc.duration_mismatch) { lint_mismatch(m, s, sc); continue; }
      GlobalEdge e;
      e.src = s;
      e.dst = intern(sc.target);
      e.guard = sc.guard;
      e.resets = sc.resets;
      e.duration = sc.duration;
      e.action = sc.action;
      e.event = sc.event;
      e.movers = sc.movers;
      m.out.resize(m.states.size());
      m.out[static_cast<std::size_t>(s)].push_back(static_cast<int>(m.edges.size()));
      m.edges.push_back(std::move(e));
    }
  }
  m.out.resize(m.states.size());
  return m;
}

}  // namespace

GlobalModel compose(const SystemSpec& spec, ComposeMode mode) {
  return compose_impl(spec, mode);
}

GlobalModel compose_sync(const SystemSpec& spec, ComposeMode mode) {
  if (spec.coordination != Coordination::Sync)
    throw ModelError("compose_sync requires a sync spec");
  return compose_impl(spec, mode);
}

GlobalModel compose_async(const SystemSpec& spec, ComposeMode mode) {
  if (spec.coordination != Coordination::Async)
    throw ModelError("compose_async requires an async spec");
  return compose_impl(spec, mode);
}

GlobalModel reachable_restrict(const GlobalModel& m) {
  std::vector<int> remap(m.states.size(), -1);
  std::vector<int> order;
  std::queue<int> work;
  remap[static_cast<std::size_t>(m.initial)] = 0;
  order.push_back(m.initial);
  work.push(m.initial);
  while (!work.empty()) {
    int s = work.front();
    work.pop();
    for (int e : m.out[static_cast<std::size_t>(s)]) {
      int t = m.edges[static_cast<std::size_t>(e)].dst;
      if (remap[static_cast<std::size_t>(t)] < 0) {
        remap[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
        work.push(t);
      }
    }
  }
  GlobalModel r;
  r.spec = m.spec;
  r.clocks = m.clocks;
  r.clock_base = m.clock_base;
  r.events = m.events;
  r.props = m.props;
  r.lints = m.lints;
  r.initial = 0;
  r.out.resize(order.size());
  for (int old : order) {
    r.states.push_back(m.states[static_cast<std::size_t>(old)]);
    r.invariants.push_back(m.invariants[static_cast<std::size_t>(old)]);
    r.state_props.push_back(m.state_props[static_cast<std::size_t>(old)]);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    int old = order[i];
    for (int e : m.out[static_cast<std::size_t>(old)]) {
      GlobalEdge ge = m.edges[static_cast<std::size_t>(e)];
      ge.src = static_cast<int>(i);
      ge.dst = remap[static_cast<std::size_t>(ge.dst)];
      r.out[i].push_back(static_cast<int>(r.edges.size()));
      r.edges.push_back(std::move(ge));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
//  JSON dump
// ---------------------------------------------------------------------------

std::string model_to_json(const GlobalModel& m) {
  using nlohmann::json;
  json j;
  j["coordination"] = coordination_name(m.spec.coordination);
  j["semantics"] = semantics_name(m.spec.semantics);
  j["clocks"] = m.clocks;
  j["initial"] = m.initial;
  j["props"] = m.props;
  json states = json::array();
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    json st;
    st["name"] = m.state_name(static_cast<int>(s));
    if (!m.invariants[s].is_true())
      st["invariant"] = constraint_to_string(m.invariants[s], m.clocks);
    json props = json::array();
    for (int p : m.state_props[s]) props.push_back(m.props[static_cast<std::size_t>(p)]);
    st["props"] = std::move(props);
    states.push_back(std::move(st));
  }
  j["states"] = std::move(states);
  json edges = json::array();
  for (const GlobalEdge& e : m.edges) {
    json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    if (!e.guard.is_true()) je["guard"] = constraint_to_string(e.guard, m.clocks);
    if (!e.resets.empty()) {
      json r = json::array();
      for (int c : e.resets) r.push_back(m.clocks[static_cast<std::size_t>(c)]);
      je["reset"] = std::move(r);
    }
    if (m.spec.semantics == Semantics::Discrete) je["duration"] = e.duration;
    if (m.is_async()) {
      je["event"] = m.events[static_cast<std::size_t>(e.event)];
      json movers = json::array();
      for (int i : e.movers) movers.push_back(m.spec.agents[static_cast<std::size_t>(i)].name);
      je["movers"] = std::move(movers);
    } else {
      json act = json::array();
      for (std::size_t i = 0; i < e.action.size(); ++i)
        act.push_back(
            m.spec.agents[i].actions[static_cast<std::size_t>(e.action[i])]);
      je["action"] = std::move(act);
    }
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["lints"] = m.lints;
  return j.dump(2);
}

}  // namespace stctl
