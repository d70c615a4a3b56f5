#ifndef STCTL_COMPOSE_HPP
#define STCTL_COMPOSE_HPP

// ============================================================================
//  compose.hpp -- global model construction (sync / async coordination)
//
//  Synchronous mode: every agent moves each step; a joint action is one
//  action per agent, realized by one local transition variant per agent.
//  Discrete semantics additionally requires all agents' durations to agree
//  (mismatching combinations are dropped with a lint note).
//
//  Asynchronous mode: agents synchronize on shared events; exactly the
//  agents whose alphabet contains the event move, the rest stay.  Discrete
//  duration of an event edge is the maximum over the movers.
//
//  KEY DESIGN DECISIONS
//   * Global states are interned integers with a side table of local-state
//     tuples; edges are index pairs plus dense payloads.
//   * compose() builds the reachable portion by default.  Full-product
//     construction exists for small models (cardinality properties); the
//     benchmark path avoids materializing the model altogether by using
//     SuccessorGen directly.
// ============================================================================

#include <cstdint>
#include <string>
#include <vector>

#include "stctl/system.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  On-the-fly successor generation
// ---------------------------------------------------------------------------

class SuccessorGen {
 public:
  explicit SuccessorGen(const SystemSpec& spec);

  struct Succ {
    std::vector<int> target;          // local-state tuple
    ClockConstraint guard;            // over global (qualified) clocks
    std::vector<int> resets;          // global clock indices, sorted
    std::uint32_t duration = 1;
    std::vector<int> action;          // sync: action index per agent
    int event = -1;                   // async: index into events()
    std::vector<int> movers;          // async: participating agents, sorted
    bool duration_mismatch = false;   // sync discrete: dropped combination
  };

  const SystemSpec& spec() const { return *spec_; }
  const std::vector<std::string>& clocks() const { return clocks_; }
  int global_clock(int agent, int local_clock) const {
    return clock_base_[static_cast<std::size_t>(agent)] + local_clock;
  }
  const std::vector<std::string>& events() const { return events_; }

  std::vector<int> initial_state() const;
  ClockConstraint invariant(const std::vector<int>& s) const;
  void successors(const std::vector<int>& s, std::vector<Succ>& out) const;

 private:
  const SystemSpec* spec_;
  std::vector<std::string> clocks_;   // "agent.clock"
  std::vector<int> clock_base_;       // per agent: first global clock index
  std::vector<std::string> events_;   // async: union of action names
  // per agent, per local: outgoing transitions (indices into transitions)
  std::vector<std::vector<std::vector<int>>> by_local_;
  // resolved sync constraints per agent/transition: (other agent, action idx)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> sync_;
  // async: per event, the sorted mover agent list; per agent the action idx
  std::vector<std::vector<int>> event_movers_;
  std::vector<std::vector<int>> event_action_;  // [event][agent] -> idx or -1

  ClockConstraint remap(const ClockConstraint& cc, int agent) const;
  void sync_successors(const std::vector<int>& s, std::vector<Succ>& out) const;
  void async_successors(const std::vector<int>& s, std::vector<Succ>& out) const;
};

// ---------------------------------------------------------------------------
//  Materialized global model
// ---------------------------------------------------------------------------

struct GlobalEdge {
  int src = -1;
  int dst = -1;
  ClockConstraint guard;            // global clock indices
  std::vector<int> resets;
  std::uint32_t duration = 1;
  std::vector<int> action;          // sync: per-agent action index
  int event = -1;                   // async: event id
  std::vector<int> movers;          // async: agent indices
};

struct GlobalModel {
  SystemSpec spec;                  // owned copy
  std::vector<std::string> clocks;  // qualified names
  std::vector<int> clock_base;      // per agent
  std::vector<std::string> events;  // async event names

  std::vector<std::vector<int>> states;     // local tuples
  int initial = -1;
  std::vector<ClockConstraint> invariants;  // per state
  std::vector<std::string> props;
  std::vector<std::vector<int>> state_props;  // per state: sorted prop ids
  std::vector<GlobalEdge> edges;
  std::vector<std::vector<int>> out;          // per state: edge ids
  std::vector<std::string> lints;

  bool is_async() const { return spec.coordination == Coordination::Async; }
  int prop_index(const std::string& p) const;
  bool state_has_prop(int state, int prop) const;
  std::string state_name(int state) const;
};

enum class ComposeMode { Reachable, Full };

GlobalModel compose(const SystemSpec& spec, ComposeMode mode = ComposeMode::Reachable);
GlobalModel compose_sync(const SystemSpec& spec, ComposeMode mode = ComposeMode::Reachable);
GlobalModel compose_async(const SystemSpec& spec, ComposeMode mode = ComposeMode::Reachable);

// Restricts a model to the states reachable from its initial state ignoring
// guards; states and edges are re-indexed.
GlobalModel reachable_restrict(const GlobalModel& m);

// JSON mirror of the composed model for golden tests (--dump-model).
std::string model_to_json(const GlobalModel& m);

}  // namespace stctl

#endif  // STCTL_COMPOSE_HPP
