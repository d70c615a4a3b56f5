// ============================================================================
//  system.cpp -- clock arithmetic, constraint parsing, validation, model files
// ============================================================================

#include "stctl/system.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  Clock arithmetic
// ---------------------------------------------------------------------------

namespace {

bool rel_holds(double lhs, Rel rel, double rhs) {
  switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Eq: return lhs == rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Gt: return lhs > rhs;
  }
  return false;
}

const char* rel_text(Rel rel) {
  switch (rel) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

}  // namespace

bool eval_constraint(const ClockConstraint& cc, const ClockValuation& v) {
  for (const ClockAtom& a : cc.atoms) {
    if (a.clock < 0 || static_cast<std::size_t>(a.clock) >= v.size())
      throw std::out_of_range("eval_constraint: unknown clock index");
    double lhs = v[static_cast<std::size_t>(a.clock)];
    if (a.diff) {
      if (a.clock2 < 0 || static_cast<std::size_t>(a.clock2) >= v.size())
        throw std::out_of_range("eval_constraint: unknown clock index");
      lhs -= v[static_cast<std::size_t>(a.clock2)];
    }
    if (!rel_holds(lhs, a.rel, static_cast<double>(a.bound))) return false;
  }
  return true;
}

ClockValuation delay(const ClockValuation& v, double d) {
  ClockValuation out = v;
  for (double& x : out) x += d;
  return out;
}

ClockValuation reset(const ClockValuation& v, const std::vector<int>& clocks) {
  ClockValuation out = v;
  for (int c : clocks) {
    if (c < 0 || static_cast<std::size_t>(c) >= out.size())
      throw std::out_of_range("reset: unknown clock index");
    out[static_cast<std::size_t>(c)] = 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
//  Constraint strings
// ---------------------------------------------------------------------------

ClockConstraint parse_constraint(const std::string& text,
                                 const std::vector<std::string>& clock_names) {
  ClockConstraint cc;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& m) -> void {
    throw ModelError("constraint \"" + text + "\": " + m);
  };
  auto parse_name = [&]() -> int {
    skip_ws();
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                               text[j] == '_' || text[j] == '.'))
      ++j;
    if (j == i) fail("expected clock name");
    std::string name = text.substr(i, j - i);
    i = j;
    auto it = std::find(clock_names.begin(), clock_names.end(), name);
    if (it == clock_names.end()) fail("unknown clock '" + name + "'");
    return static_cast<int>(it - clock_names.begin());
  };
  skip_ws();
  if (i == text.size()) return cc;           // empty string = true
  if (text.compare(i, 4, "true") == 0 && i + 4 >= text.size()) return cc;
  for (;;) {
    ClockAtom a;
    a.clock = parse_name();
    skip_ws();
    if (i < text.size() && text[i] == '-') {
      ++i;
      a.diff = true;
      a.clock2 = parse_name();
      skip_ws();
    }
    if (i >= text.size()) fail("expected relation");
    if (text[i] == '<') {
      ++i;
      if (i < text.size() && text[i] == '=') { a.rel = Rel::Le; ++i; }
      else a.rel = Rel::Lt;
    } else if (text[i] == '>') {
      ++i;
      if (i < text.size() && text[i] == '=') { a.rel = Rel::Ge; ++i; }
      else a.rel = Rel::Gt;
    } else if (text[i] == '=') {
      ++i;
      if (i < text.size() && text[i] == '=') ++i;
      a.rel = Rel::Eq;
    } else {
      fail("expected relation");
    }
    skip_ws();
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      fail("expected natural-number bound");
    std::uint64_t b = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      b = b * 10 + static_cast<std::uint64_t>(text[i] - '0');
      if (b > 0xFFFFFFFFull) fail("bound too large");
      ++i;
    }
    a.bound = static_cast<std::uint32_t>(b);
    cc.atoms.push_back(a);
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] != '&') fail("expected '&'");
    ++i;
  }
  return cc;
}

std::string constraint_to_string(const ClockConstraint& cc,
                                 const std::vector<std::string>& clock_names) {
  if (cc.is_true()) return "";
  std::ostringstream os;
  for (std::size_t i = 0; i < cc.atoms.size(); ++i) {
    const ClockAtom& a = cc.atoms[i];
    if (i) os << " & ";
    os << clock_names.at(static_cast<std::size_t>(a.clock));
    if (a.diff) os << " - " << clock_names.at(static_cast<std::size_t>(a.clock2));
    os << ' ' << rel_text(a.rel) << ' ' << a.bound;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
//  Lookups
// ---------------------------------------------------------------------------

namespace {
int find_in(const std::vector<std::string>& xs, const std::string& x) {
  auto it = std::find(xs.begin(), xs.end(), x);
  return it == xs.end() ? -1 : static_cast<int>(it - xs.begin());
}
}  // namespace

int AgentSpec::local_index(const std::string& l) const { return find_in(locals, l); }
int AgentSpec::action_index(const std::string& a) const { return find_in(actions, a); }
int AgentSpec::clock_index(const std::string& c) const { return find_in(clocks, c); }

int SystemSpec::agent_index(const std::string& name) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == name) return static_cast<int>(i);
  return -1;
}

const char* coordination_name(Coordination c) {
  return c == Coordination::Sync ? "sync" : "async";
}

const char* semantics_name(Semantics s) {
  switch (s) {
    case Semantics::Continuous: return "continuous";
    case Semantics::Discrete: return "discrete";
    case Semantics::Untimed: return "untimed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
//  Validation
// ---------------------------------------------------------------------------

namespace {

bool constraint_clocks_ok(const ClockConstraint& cc, std::size_t n_clocks) {
  for (const ClockAtom& a : cc.atoms) {
    if (a.clock < 0 || static_cast<std::size_t>(a.clock) >= n_clocks) return false;
    if (a.diff && (a.clock2 < 0 || static_cast<std::size_t>(a.clock2) >= n_clocks))
      return false;
  }
  return true;
}

}  // namespace

std::vector<Diagnostic> validate(const SystemSpec& spec) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string rule, std::string agent, std::string loc,
                  std::string msg) {
    out.push_back({std::move(rule), std::move(agent), std::move(loc), std::move(msg)});
  };

  if (spec.agents.empty()) {
    diag("at-least-one-agent", "", "", "system has no agents");
    return out;
  }
  std::set<std::string> names;
  for (const AgentSpec& ag : spec.agents) {
    if (!names.insert(ag.name).second)
      diag("duplicate-agent-name", ag.name, "", "agent name used twice");
  }

  for (const AgentSpec& ag : spec.agents) {
    const std::string& an = ag.name;
    if (ag.locals.empty()) {
      diag("empty-locals", an, "", "agent has no local states");
      continue;
    }
    if (std::set<std::string>(ag.locals.begin(), ag.locals.end()).size() !=
        ag.locals.size())
      diag("duplicate-local", an, "", "duplicate local state name");
    if (ag.initial < 0 || static_cast<std::size_t>(ag.initial) >= ag.locals.size())
      diag("bad-initial", an, "", "initial state not among locals");
    if (ag.actions.empty())
      diag("empty-actions", an, "", "agent has no actions");
    if (std::set<std::string>(ag.actions.begin(), ag.actions.end()).size() !=
        ag.actions.size())
      diag("duplicate-action", an, "", "duplicate action name");

    if (ag.protocol.size() != ag.locals.size() ||
        ag.invariants.size() != ag.locals.size() ||
        ag.labels.size() != ag.locals.size()) {
      diag("malformed-agent", an, "",
           "protocol/invariants/labels must cover every local state");
      continue;
    }
    for (std::size_t l = 0; l < ag.locals.size(); ++l) {
      if (ag.protocol[l].empty())
        diag("empty-protocol", an, ag.locals[l],
             "protocol must offer at least one action");
      for (int a : ag.protocol[l])
        if (a < 0 || static_cast<std::size_t>(a) >= ag.actions.size())
          diag("protocol-unknown-action", an, ag.locals[l],
               "protocol references undeclared action");
      if (!constraint_clocks_ok(ag.invariants[l], ag.clocks.size()))
        diag("unknown-clock", an, ag.locals[l], "invariant uses undeclared clock");
    }
    for (std::size_t t = 0; t < ag.transitions.size(); ++t) {
      const LocalTransition& tr = ag.transitions[t];
      std::string loc = "transition #" + std::to_string(t);
      if (tr.from < 0 || static_cast<std::size_t>(tr.from) >= ag.locals.size() ||
          tr.to < 0 || static_cast<std::size_t>(tr.to) >= ag.locals.size()) {
        diag("transition-unknown-endpoint", an, loc, "bad from/to local state");
        continue;
      }
      if (tr.action < 0 || static_cast<std::size_t>(tr.action) >= ag.actions.size()) {
        diag("transition-unknown-action", an, loc, "undeclared action");
        continue;
      }
      const auto& menu = ag.protocol[static_cast<std::size_t>(tr.from)];
      if (std::find(menu.begin(), menu.end(), tr.action) == menu.end())
        diag("action-not-in-protocol", an, loc,
             "transition action not offered by protocol at source");
      if (!constraint_clocks_ok(tr.guard, ag.clocks.size()))
        diag("unknown-clock", an, loc, "guard uses undeclared clock");
      for (int c : tr.resets)
        if (c < 0 || static_cast<std::size_t>(c) >= ag.clocks.size())
          diag("unknown-clock", an, loc, "reset of undeclared clock");
      if (spec.semantics == Semantics::Discrete && tr.duration == 0)
        diag("non-positive-duration", an, loc, "duration must be >= 1");
      for (const SyncConstraint& sc : tr.sync) {
        if (spec.coordination != Coordination::Sync) {
          diag("sync-in-async", an, loc,
               "sync constraints require sync coordination");
          continue;
        }
        int j = spec.agent_index(sc.agent);
        if (j < 0) {
          diag("sync-unknown-agent", an, loc,
               "sync constraint names unknown agent '" + sc.agent + "'");
          continue;
        }
        if (spec.agents[static_cast<std::size_t>(j)].name == an)
          diag("sync-self", an, loc, "sync constraint may not name the agent itself");
        else if (spec.agents[static_cast<std::size_t>(j)].action_index(sc.action) < 0)
          diag("sync-unknown-action", an, loc,
               "sync constraint names unknown action '" + sc.action + "'");
      }
    }

    if (spec.semantics != Semantics::Continuous && !ag.clocks.empty())
      diag(spec.semantics == Semantics::Untimed ? "untimed-has-clocks"
                                                : "discrete-has-clocks",
           an, "", "clocks are only available under continuous semantics");
    if (spec.semantics == Semantics::Untimed) {
      for (std::size_t l = 0; l < ag.invariants.size(); ++l)
        if (!ag.invariants[l].is_true())
          diag("untimed-nontrivial-invariant", an, ag.locals[l],
               "untimed agents must have trivial invariants");
      for (std::size_t t = 0; t < ag.transitions.size(); ++t)
        if (!ag.transitions[t].guard.is_true())
          diag("untimed-nontrivial-guard", an, "transition #" + std::to_string(t),
               "untimed agents must have trivial guards");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
//  JSON model files
// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw ModelError(path + ": " + msg);
}

std::string require_string(const json& j, const std::string& path,
                           const std::string& key) {
  if (!j.contains(key)) schema_error(path + "/" + key, "missing required field");
  if (!j[key].is_string()) schema_error(path + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

std::vector<std::string> string_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string())
      schema_error(path + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

AgentSpec parse_agent(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an agent object");
  AgentSpec ag;
  ag.name = require_string(j, path, "name");
  if (!j.contains("locals"))
    schema_error(path + "/locals", "missing required field");
  ag.locals = string_array(j["locals"], path + "/locals");
  if (ag.locals.empty()) schema_error(path + "/locals", "empty-locals");

  if (j.contains("initial")) {
    std::string init = require_string(j, path, "initial");
    ag.initial = ag.local_index(init);
    if (ag.initial < 0)
      schema_error(path + "/initial", "unknown local state '" + init + "'");
  } else {
    ag.initial = 0;
  }

  if (j.contains("clocks")) ag.clocks = string_array(j["clocks"], path + "/clocks");

  if (j.contains("actions")) ag.actions = string_array(j["actions"], path + "/actions");
  auto declare_action = [&](const std::string& a) -> int {
    int i = ag.action_index(a);
    if (i >= 0) return i;
    ag.actions.push_back(a);
    return static_cast<int>(ag.actions.size() - 1);
  };

  // protocol (optional; derived from transitions when omitted)
  std::vector<std::vector<int>> protocol(ag.locals.size());
  bool explicit_protocol = j.contains("protocol");
  if (explicit_protocol) {
    const json& p = j["protocol"];
    if (!p.is_object()) schema_error(path + "/protocol", "expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      int l = ag.local_index(it.key());
      if (l < 0)
        schema_error(path + "/protocol/" + it.key(), "unknown local state");
      for (const std::string& a :
           string_array(it.value(), path + "/protocol/" + it.key()))
        protocol[static_cast<std::size_t>(l)].push_back(declare_action(a));
    }
  }

  // invariants
  ag.invariants.assign(ag.locals.size(), ClockConstraint{});
  if (j.contains("invariants")) {
    const json& inv = j["invariants"];
    if (!inv.is_object()) schema_error(path + "/invariants", "expected an object");
    for (auto it = inv.begin(); it != inv.end(); ++it) {
      int l = ag.local_index(it.key());
      if (l < 0)
        schema_error(path + "/invariants/" + it.key(), "unknown local state");
      if (!it.value().is_string())
        schema_error(path + "/invariants/" + it.key(), "expected a string");
      ag.invariants[static_cast<std::size_t>(l)] =
          parse_constraint(it.value().get<std::string>(), ag.clocks);
    }
  }

  // labels
  ag.labels.assign(ag.locals.size(), {});
  if (j.contains("labels")) {
    const json& lab = j["labels"];
    if (!lab.is_object()) schema_error(path + "/labels", "expected an object");
    for (auto it = lab.begin(); it != lab.end(); ++it) {
      int l = ag.local_index(it.key());
      if (l < 0) schema_error(path + "/labels/" + it.key(), "unknown local state");
      ag.labels[static_cast<std::size_t>(l)] =
          string_array(it.value(), path + "/labels/" + it.key());
    }
  }

  // transitions
  if (j.contains("transitions")) {
    const json& ts = j["transitions"];
    if (!ts.is_array()) schema_error(path + "/transitions", "expected an array");
    for (std::size_t t = 0; t < ts.size(); ++t) {
      std::string tp = path + "/transitions/" + std::to_string(t);
      const json& tj = ts[t];
      if (!tj.is_object()) schema_error(tp, "expected an object");
      LocalTransition tr;
      std::string from = require_string(tj, tp, "from");
      std::string to = require_string(tj, tp, "to");
      std::string action = require_string(tj, tp, "action");
      tr.from = ag.local_index(from);
      if (tr.from < 0) schema_error(tp + "/from", "unknown local state '" + from + "'");
      tr.to = ag.local_index(to);
      if (tr.to < 0) schema_error(tp + "/to", "unknown local state '" + to + "'");
      tr.action = declare_action(action);
      if (tj.contains("guard")) {
        if (!tj["guard"].is_string()) schema_error(tp + "/guard", "expected a string");
        tr.guard = parse_constraint(tj["guard"].get<std::string>(), ag.clocks);
      }
      if (tj.contains("reset")) {
        for (const std::string& c : string_array(tj["reset"], tp + "/reset")) {
          int ci = ag.clock_index(c);
          if (ci < 0) schema_error(tp + "/reset", "unknown clock '" + c + "'");
          tr.resets.push_back(ci);
        }
        std::sort(tr.resets.begin(), tr.resets.end());
        tr.resets.erase(std::unique(tr.resets.begin(), tr.resets.end()),
                        tr.resets.end());
      }
      if (tj.contains("duration")) {
        if (!tj["duration"].is_number_unsigned())
          schema_error(tp + "/duration", "expected a natural number");
        tr.duration = tj["duration"].get<std::uint32_t>();
      }
      if (tj.contains("sync")) {
        const json& sy = tj["sync"];
        if (!sy.is_object()) schema_error(tp + "/sync", "expected an object");
        for (auto it = sy.begin(); it != sy.end(); ++it) {
          if (!it.value().is_string())
            schema_error(tp + "/sync/" + it.key(), "expected an action name");
          tr.sync.push_back({it.key(), it.value().get<std::string>()});
        }
      }
      if (!explicit_protocol)
        protocol[static_cast<std::size_t>(tr.from)].push_back(tr.action);
      ag.transitions.push_back(std::move(tr));
    }
  }

  for (auto& menu : protocol) {
    std::sort(menu.begin(), menu.end());
    menu.erase(std::unique(menu.begin(), menu.end()), menu.end());
  }
  ag.protocol = std::move(protocol);
  return ag;
}

}  // namespace

SystemSpec parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("", "expected a JSON object");

  SystemSpec spec;
  std::string coord = j.contains("coordination")
                          ? require_string(j, "", "coordination")
                          : "sync";
  if (coord == "sync") spec.coordination = Coordination::Sync;
  else if (coord == "async") spec.coordination = Coordination::Async;
  else schema_error("/coordination", "expected \"sync\" or \"async\"");

  std::string sem =
      j.contains("semantics") ? require_string(j, "", "semantics") : "untimed";
  if (sem == "continuous") spec.semantics = Semantics::Continuous;
  else if (sem == "discrete") spec.semantics = Semantics::Discrete;
  else if (sem == "untimed") spec.semantics = Semantics::Untimed;
  else schema_error("/semantics", "expected continuous/discrete/untimed");

  if (!j.contains("agents")) schema_error("/agents", "missing required field");
  if (!j["agents"].is_array()) schema_error("/agents", "expected an array");
  if (j["agents"].empty()) schema_error("/agents", "at-least-one-agent");
  for (std::size_t i = 0; i < j["agents"].size(); ++i)
    spec.agents.push_back(
        parse_agent(j["agents"][i], "/agents/" + std::to_string(i)));
  return spec;
}

std::string spec_to_json(const SystemSpec& spec) {
  json j;
  j["coordination"] = coordination_name(spec.coordination);
  j["semantics"] = semantics_name(spec.semantics);
  j["agents"] = json::array();
  for (const AgentSpec& ag : spec.agents) {
    json a;
    a["name"] = ag.name;
    a["locals"] = ag.locals;
    a["initial"] = ag.locals.at(static_cast<std::size_t>(ag.initial));
    a["actions"] = ag.actions;
    if (!ag.clocks.empty()) a["clocks"] = ag.clocks;
    json protocol = json::object();
    for (std::size_t l = 0; l < ag.locals.size(); ++l) {
      json menu = json::array();
      for (int act : ag.protocol[l]) menu.push_back(ag.actions.at(act));
      protocol[ag.locals[l]] = std::move(menu);
    }
    a["protocol"] = std::move(protocol);
    json inv = json::object();
    for (std::size_t l = 0; l < ag.locals.size(); ++l)
      if (!ag.invariants[l].is_true())
        inv[ag.locals[l]] = constraint_to_string(ag.invariants[l], ag.clocks);
    if (!inv.empty()) a["invariants"] = std::move(inv);
    json labels = json::object();
    for (std::size_t l = 0; l < ag.locals.size(); ++l)
      if (!ag.labels[l].empty()) labels[ag.locals[l]] = ag.labels[l];
    if (!labels.empty()) a["labels"] = std::move(labels);
    json ts = json::array();
    for (const LocalTransition& tr : ag.transitions) {
      json t;
      t["from"] = ag.locals.at(static_cast<std::size_t>(tr.from));
      t["action"] = ag.actions.at(static_cast<std::size_t>(tr.action));
      t["to"] = ag.locals.at(static_cast<std::size_t>(tr.to));
      if (!tr.guard.is_true())
        t["guard"] = constraint_to_string(tr.guard, ag.clocks);
      if (!tr.resets.empty()) {
        json r = json::array();
        for (int c : tr.resets) r.push_back(ag.clocks.at(static_cast<std::size_t>(c)));
        t["reset"] = std::move(r);
      }
      if (spec.semantics == Semantics::Discrete) t["duration"] = tr.duration;
      if (!tr.sync.empty()) {
        json s = json::object();
        for (const SyncConstraint& sc : tr.sync) s[sc.agent] = sc.action;
        t["sync"] = std::move(s);
      }
      ts.push_back(std::move(t));
    }
    a["transitions"] = std::move(ts);
    j["agents"].push_back(std::move(a));
  }
  return j.dump(2);
}

}  // namespace stctl
