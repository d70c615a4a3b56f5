#ifndef STCTL_ORACLE_HPP
#define STCTL_ORACLE_HPP

// ============================================================================
//  oracle.hpp -- independent brute-force reference semantics
//
//  A second, deliberately separate implementation of the strategic semantics
//  for small untimed and discrete instances.  The oracle builds its own
//  product (no compose), encodes strategies as per-agent choice maps
//  enumerated by recursive backtracking (no mixed-radix stream), and decides
//  temporal operators by explicit path and lasso searches over an exact
//  bounded-counter product (no set-based fixpoints).  Sharing only the AST
//  and the system types keeps it a meaningful cross-check for the engines.
//
//  Continuous semantics has no independent oracle; it is validated through
//  degeneracy properties (zero-clock collapse against untimed) instead.
// ============================================================================

#include <cstdint>

#include "stctl/formula.hpp"
#include "stctl/strategy_engine.hpp"
#include "stctl/system.hpp"

namespace stctl {

// Decides f at the initial configuration by literal recursion over the
// definitions: enumerate all strategies of each coalition, prune, and test
// the path formula by exhaustive exploration with lasso detection.
// Throws EngineError("oracle-continuous") for continuous specs and
// EngineError("oracle-too-large") beyond 512 product vertices or 2^20
// strategies per coalition.  `extra_bound` widens the counter saturation
// bound beyond the proven-sufficient one; verdicts must not depend on it
// (saturation sanity hook).
bool oracle_check(const SystemSpec& spec, const StatePtr& f, StrategyKind kind,
                  std::uint32_t extra_bound = 0);

// ---------------------------------------------------------------------------
//  Random instances
// ---------------------------------------------------------------------------

struct RandomSystemParams {
  int max_agents = 3;
  int max_locals = 3;
  int max_actions = 2;
  int max_duration = 3;  // discrete edges draw from 1..max_duration
  Semantics semantics = Semantics::Untimed;
};

// Deterministic per seed; the result always passes validate().  Coordination
// is drawn at random so both sync and async products are covered; action
// names come from a shared pool so async agents genuinely synchronize.
SystemSpec random_system(const RandomSystemParams& params, std::uint64_t seed);

}  // namespace stctl

#endif  // STCTL_ORACLE_HPP
