// ============================================================================
//  fixtures.cpp -- voting and expressivity model generators
// ============================================================================

#include "stctl/fixtures.hpp"

#include <algorithm>
#include <stdexcept>

namespace stctl {

namespace {

// Small builder so the generators read like the figures they encode.
struct AgentBuilder {
  AgentSpec ag;
  bool timed;

  AgentBuilder(std::string name, bool timed_) : timed(timed_) { ag.name = std::move(name); }

  int local(const std::string& l) {
    int i = ag.local_index(l);
    if (i >= 0) return i;
    ag.locals.push_back(l);
    ag.invariants.emplace_back();
    ag.labels.emplace_back();
    return static_cast<int>(ag.locals.size() - 1);
  }
  int action(const std::string& a) {
    int i = ag.action_index(a);
    if (i >= 0) return i;
    ag.actions.push_back(a);
    return static_cast<int>(ag.actions.size() - 1);
  }
  void clock(const std::string& c) {
    if (timed) ag.clocks.push_back(c);
  }
  void invariant(const std::string& l, const std::string& cc) {
    if (timed) ag.invariants[static_cast<std::size_t>(local(l))] =
        parse_constraint(cc, ag.clocks);
  }
  void label(const std::string& l, const std::string& prop) {
    ag.labels[static_cast<std::size_t>(local(l))].push_back(prop);
  }
  void trans(const std::string& from, const std::string& act,
             const std::string& to, const std::string& guard = "",
             const std::vector<std::string>& resets = {},
             const std::vector<SyncConstraint>& sync = {}) {
    LocalTransition tr;
    tr.from = local(from);
    tr.action = action(act);
    tr.to = local(to);
    tr.duration = 1;
    if (timed && !guard.empty()) tr.guard = parse_constraint(guard, ag.clocks);
    if (timed)
      for (const std::string& c : resets) {
        int ci = ag.clock_index(c);
        if (ci < 0) throw std::logic_error("fixture resets unknown clock " + c);
        tr.resets.push_back(ci);
      }
    tr.sync = sync;
    ag.transitions.push_back(std::move(tr));
  }
  AgentSpec finish() {
    ag.protocol.assign(ag.locals.size(), {});
    for (const LocalTransition& tr : ag.transitions)
      ag.protocol[static_cast<std::size_t>(tr.from)].push_back(tr.action);
    for (auto& menu : ag.protocol) {
      std::sort(menu.begin(), menu.end());
      menu.erase(std::unique(menu.begin(), menu.end()), menu.end());
    }
    ag.initial = 0;
    return std::move(ag);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
//  Voting scenario
// ---------------------------------------------------------------------------

SystemSpec gen_voting(int voters, int candidates, Semantics sem) {
  if (voters < 1 || candidates < 1)
    throw std::invalid_argument("gen_voting requires v >= 1 and c >= 1");
  const bool timed = sem == Semantics::Continuous;
  SystemSpec spec;
  spec.coordination = Coordination::Async;
  spec.semantics = sem;

  const char* modality = "mip";  // mail, internet, polling

  for (int k = 1; k <= voters; ++k) {
    std::string K = std::to_string(k);
    AgentBuilder b("voter" + K, timed);
    b.local("q0");
    for (int mo = 0; mo < 3; ++mo) {
      std::string m(1, modality[mo]);
      b.local("reg_" + m);
      b.local("pack_" + m);
    }
    for (int mo = 0; mo < 3; ++mo) {
      std::string m(1, modality[mo]);
      for (int j = 1; j <= candidates; ++j) {
        std::string J = std::to_string(j);
        std::string voted = "voted_" + m + J;
        b.local(voted);
        // voter 1's vote defines the formula propositions v1..vc
        b.label(voted, k == 1 ? "v" + J : "v" + J + "_" + K);
      }
    }
    for (int mo = 0; mo < 3; ++mo) {
      std::string m(1, modality[mo]);
      b.trans("q0", "reg_" + m + "_" + K, "reg_" + m);
      b.trans("reg_" + m, "pack_" + m + "_" + K, "pack_" + m);
      for (int j = 1; j <= candidates; ++j) {
        std::string J = std::to_string(j);
        b.trans("pack_" + m, "vote" + J + "_" + m + "_" + K, "voted_" + m + J);
        b.trans("voted_" + m + J, "done_" + K, "voted_" + m + J);
      }
    }
    spec.agents.push_back(b.finish());
  }

  AgentBuilder ea("EA", timed);
  ea.clock("t");
  ea.clock("x");
  ea.local("q0");
  ea.local("wait_m");
  ea.local("wait_i");
  ea.local("wait_p");
  ea.local("closed");
  ea.invariant("q0", "t <= 11");
  ea.invariant("wait_m", "x <= 0");
  ea.invariant("wait_i", "x <= 0");
  ea.invariant("wait_p", "x <= 0");
  struct Window { const char* reg_guard; const char* vote_guard; };
  const Window windows[3] = {
      {"t <= 1", "t >= 1 & t <= 7"},     // mail
      {"t <= 6", "t >= 6 & t <= 9"},     // internet
      {"t <= 10", "t >= 10 & t <= 11"},  // polling
  };
  for (int k = 1; k <= voters; ++k) {
    std::string K = std::to_string(k);
    for (int mo = 0; mo < 3; ++mo) {
      std::string m(1, modality[mo]);
      ea.trans("q0", "reg_" + m + "_" + K, "wait_" + m, windows[mo].reg_guard, {"x"});
      ea.trans("wait_" + m, "pack_" + m + "_" + K, "q0");
      for (int j = 1; j <= candidates; ++j) {
        std::string J = std::to_string(j);
        ea.trans("q0", "vote" + J + "_" + m + "_" + K, "q0", windows[mo].vote_guard);
      }
    }
  }
  ea.trans("q0", "close", "closed", "t = 11");
  ea.trans("closed", "tick", "closed");
  spec.agents.push_back(ea.finish());
  return spec;
}

// ---------------------------------------------------------------------------
//  Expressivity fixtures (templates a and a')
// ---------------------------------------------------------------------------

namespace {

// Template a: from q0 the alpha-role agent commits (via the joint action) to
// the branch the beta-role agent takes; p labels q2.
AgentSpec expressivity_alpha() {
  AgentBuilder b("1", false);
  b.trans("q0", "a", "q1", "", {}, {{"2", "b1"}});
  b.trans("q0", "a", "q3", "", {}, {{"2", "b2"}});
  b.trans("q1", "a1", "q1");
  b.trans("q1", "a2", "q2");
  b.trans("q3", "a1", "q3");
  b.trans("q3", "a2", "q2");
  b.trans("q2", "a", "q2");
  b.label("q2", "p");
  return b.finish();
}

AgentSpec expressivity_beta() {
  AgentBuilder b("2", false);
  b.trans("q0", "b1", "q1");
  b.trans("q0", "b2", "q3");
  b.trans("q1", "b", "q1", "", {}, {{"1", "a1"}});
  b.trans("q1", "b", "q2", "", {}, {{"1", "a2"}});
  b.trans("q3", "b", "q3", "", {}, {{"1", "a1"}});
  b.trans("q3", "b", "q2", "", {}, {{"1", "a2"}});
  b.trans("q2", "b", "q2");
  b.label("q2", "p");
  return b.finish();
}

// Template a': the two initial branches fall together, so committing early
// buys the coalition nothing.
AgentSpec expressivity_alpha_prime() {
  AgentBuilder b("1", false);
  b.trans("q0", "a", "q1");
  b.trans("q1", "a1", "q1");
  b.trans("q1", "a2", "q2");
  b.trans("q2", "a", "q2");
  b.label("q2", "p");
  return b.finish();
}

AgentSpec expressivity_beta_prime() {
  AgentBuilder b("2", false);
  b.trans("q0", "b1", "q1");
  b.trans("q0", "b2", "q1");
  b.trans("q1", "b", "q1", "", {}, {{"1", "a1"}});
  b.trans("q1", "b", "q2", "", {}, {{"1", "a2"}});
  b.trans("q2", "b", "q2");
  b.label("q2", "p");
  return b.finish();
}

}  // namespace

ExpressivityPair gen_expressivity(Semantics sem) {
  ExpressivityPair pair;
  pair.M.coordination = Coordination::Sync;
  pair.M.semantics = sem;
  pair.M.agents = {expressivity_alpha(), expressivity_beta()};
  pair.Mprime.coordination = Coordination::Sync;
  pair.Mprime.semantics = sem;
  pair.Mprime.agents = {expressivity_alpha_prime(), expressivity_beta_prime()};
  return pair;
}

}  // namespace stctl
