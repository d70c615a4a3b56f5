#ifndef STCTL_SYSTEM_HPP
#define STCTL_SYSTEM_HPP

// ============================================================================
//  system.hpp -- agent/system descriptions, clock arithmetic, validation
//
//  A SystemSpec is a network of agents, each with local states, a protocol
//  (non-empty action menu per local state), optional clocks with guards and
//  invariants, per-transition durations (discrete semantics only), and a
//  local propositional labeling.
//
//  KEY DESIGN DECISIONS
//   * Clocks are agent-owned; the composition qualifies them as agent.clock,
//     so accidental sharing between agents is impossible.
//   * A local transition is labeled by the agent's own action.  In sync mode
//     a transition may additionally carry "sync" constraints naming required
//     action components of other agents, which makes joint-action-correlated
//     behavior expressible (the composition enforces them).
//   * Constraint strings are conjunctions of atoms joined by '&', each atom
//     "x ~ c" or "x - y ~ c" with ~ in { <, <=, =, >=, > }.
// ============================================================================

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stctl {

// ---------------------------------------------------------------------------
//  Clock constraints and valuations
// ---------------------------------------------------------------------------

enum class Rel { Lt, Le, Eq, Ge, Gt };

struct ClockAtom {
  bool diff = false;   // true: clock - clock2 ~ bound
  int clock = -1;
  int clock2 = -1;
  Rel rel = Rel::Le;
  std::uint32_t bound = 0;

  bool operator==(const ClockAtom&) const = default;
};

struct ClockConstraint {
  std::vector<ClockAtom> atoms;   // conjunction; empty list is "true"

  bool is_true() const { return atoms.empty(); }
  bool operator==(const ClockConstraint&) const = default;
};

using ClockValuation = std::vector<double>;

bool eval_constraint(const ClockConstraint& cc, const ClockValuation& v);
ClockValuation delay(const ClockValuation& v, double d);
ClockValuation reset(const ClockValuation& v, const std::vector<int>& clocks);

// Parses "x <= 3 & x - y < 2" against the given clock-name list.
ClockConstraint parse_constraint(const std::string& text,
                                 const std::vector<std::string>& clock_names);
std::string constraint_to_string(const ClockConstraint& cc,
                                 const std::vector<std::string>& clock_names);

// ---------------------------------------------------------------------------
//  Agents and systems
// ---------------------------------------------------------------------------

struct SyncConstraint {
  std::string agent;    // other agent's name
  std::string action;   // required action component of that agent

  bool operator==(const SyncConstraint&) const = default;
};

struct LocalTransition {
  int from = -1;                     // index into locals
  int action = -1;                   // index into actions
  ClockConstraint guard;             // over the agent's own clocks
  std::vector<int> resets;           // clock indices, sorted
  int to = -1;
  std::uint32_t duration = 1;        // discrete semantics only
  std::vector<SyncConstraint> sync;  // sync coordination only
};

struct AgentSpec {
  std::string name;
  std::vector<std::string> locals;
  int initial = 0;
  std::vector<std::string> actions;            // declaration order
  std::vector<std::string> clocks;
  std::vector<std::vector<int>> protocol;      // per local: sorted action ids
  std::vector<ClockConstraint> invariants;     // per local
  std::vector<std::vector<std::string>> labels;  // per local: prop names
  std::vector<LocalTransition> transitions;

  int local_index(const std::string& l) const;
  int action_index(const std::string& a) const;
  int clock_index(const std::string& c) const;
};

enum class Coordination { Sync, Async };
enum class Semantics { Continuous, Discrete, Untimed };

const char* coordination_name(Coordination c);
const char* semantics_name(Semantics s);

struct SystemSpec {
  Coordination coordination = Coordination::Sync;
  Semantics semantics = Semantics::Untimed;
  std::vector<AgentSpec> agents;

  int agent_index(const std::string& name) const;
};

// ---------------------------------------------------------------------------
//  Validation
// ---------------------------------------------------------------------------

struct Diagnostic {
  std::string rule;      // stable rule id, e.g. "empty-protocol"
  std::string agent;     // offending agent name, if any
  std::string location;  // local state / transition index, if any
  std::string message;
};

std::vector<Diagnostic> validate(const SystemSpec& spec);

// ---------------------------------------------------------------------------
//  Model files (JSON)
// ---------------------------------------------------------------------------

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses the JSON model document; fills defaults (guard true, reset empty,
// duration 1, protocol derived from transitions when omitted).  Throws
// ModelError with a JSON-pointer-style path on schema violations.
SystemSpec parse_model(const std::string& json_text);

// Serializes a spec back to the model-file schema.
std::string spec_to_json(const SystemSpec& spec);

}  // namespace stctl

#endif  // STCTL_SYSTEM_HPP
