#ifndef STCTL_MC_ENGINE_HPP
#define STCTL_MC_ENGINE_HPP

// ============================================================================
//  mc_engine.hpp -- fixpoint labeling engines
//
//  Three checkers share one convention: a path formula denotes a set of
//  vertices of the active structure (global states, counter-product vertices
//  projected to counter 0, or region-graph vertices).
//
//  KEY DESIGN DECISIONS
//   * Executions are infinite, so path quantification is relativized to the
//     "infinite-path core": the greatest vertex set in which every member can
//     take a (kept) action edge back into the set.  Existential operators
//     find paths inside the core; universal operators hold vacuously outside
//     it; negation inside a path formula complements relative to the core.
//   * Pruning is expressed as an edge mask over GlobalModel edge ids, which
//     all three structures reference; nullptr keeps every edge.
//   * Timed U/R on the region graph start from z-reset vertices and test
//     z-in-interval per region; on the counter product they use the
//     saturated counter.  X is untimed/discrete only.
// ============================================================================

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stctl/compose.hpp"
#include "stctl/dts.hpp"
#include "stctl/formula.hpp"
#include "stctl/region.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  Bit sets over structure vertices
// ---------------------------------------------------------------------------

class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  static StateSet all(std::size_t n);

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  std::size_t count() const;
  bool any() const;

  StateSet& operator&=(const StateSet& o);
  StateSet& operator|=(const StateSet& o);
  StateSet& subtract(const StateSet& o);
  StateSet complement() const;  // relative to the full universe
  bool operator==(const StateSet& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

inline StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
inline StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }

// ---------------------------------------------------------------------------
//  Errors
// ---------------------------------------------------------------------------

class EngineError : public std::runtime_error {
 public:
  EngineError(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// ---------------------------------------------------------------------------
//  Checkers
// ---------------------------------------------------------------------------

// Evaluates a lifted state formula as a vertex set of the active structure.
using LiftEval = std::function<StateSet(const StateFormula&)>;

using EdgeMask = std::vector<char>;  // indexed by GlobalModel edge id

// Greatest set of states with a kept action edge back into the set.
StateSet untimed_core(const GlobalModel& m, const EdgeMask* mask = nullptr);
// Same over region vertices; an action edge may be reached through delays.
StateSet region_core(const RegionGraph& rg, const EdgeMask* mask = nullptr);

// CTL over an untimed global model (all intervals must be [0,inf)).
StateSet check_ctl(const GlobalModel& m, const PathPtr& g, const LiftEval& lift,
                   const EdgeMask* mask = nullptr);

// TCTL over the saturated-counter product; result projected to counter 0,
// so the set ranges over global states.  `lift` also yields state sets.
StateSet check_tctl_discrete(const TimedStateGraph& tg, const PathPtr& g,
                             const LiftEval& lift,
                             const EdgeMask* mask = nullptr);

// TCTL over the region graph; sets range over region vertices and `lift`
// must yield region-vertex sets.  X is rejected ("x-not-supported-continuous").
StateSet check_tctl_region(const RegionGraph& rg, const PathPtr& g,
                           const LiftEval& lift,
                           const EdgeMask* mask = nullptr);

// Perfect-information ATL via controllable predecessors on an untimed model.
// Coalition nodes must carry a single elided-A operator over state operands.
StateSet check_atl_perfect(const GlobalModel& m, const StatePtr& f);

}  // namespace stctl

#endif  // STCTL_MC_ENGINE_HPP
