#ifndef STCTL_STRATEGY_ENGINE_HPP
#define STCTL_STRATEGY_ENGINE_HPP

// ============================================================================
//  strategy_engine.hpp -- guess-prune-check over memoryless strategies
//
//  The procedure enumerates all memoryless strategies of the outermost
//  coalition in a deterministic mixed-radix order, prunes the model by each
//  strategy (an edge mask), and hands the pruned structure to the matching
//  fixpoint engine.  Nested strategic modalities are eliminated bottom-up:
//  each inner coalition node is decided at every vertex first and installed
//  as a fresh proposition.
//
//  KEY DESIGN DECISIONS
//   * "Guess" is realized as exhaustive enumeration with short-circuit on the
//     first success; all-strategies mode scans the full stream.
//   * Random access into the strategy stream (mixed-radix decode) makes the
//     parallel split deterministic: the existential verdict is always the
//     minimum-index success regardless of worker timing.
//   * Top-level <<A>> E(phi U_I psi) under continuous semantics with ir
//     strategies is checked by a lazy on-the-fly search over
//     (local tuple, region) vertices; large systems are never materialized.
//   * A coalition modality holds vacuously at vertices admitting no infinite
//     execution after pruning (outcome sets are universally quantified).
// ============================================================================

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stctl/mc_engine.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  Strategies
// ---------------------------------------------------------------------------

enum class StrategyKind { ir, Ir };

const char* strategy_kind_name(StrategyKind k);
// Accepts "ir" and "Ir"; throws EngineError("unsupported-strategy-class")
// for "iR"/"IR" and EngineError("bad-strategy-kind") otherwise.
StrategyKind parse_strategy_kind(const std::string& text);

struct Strategy {
  StrategyKind kind = StrategyKind::ir;
  std::vector<std::string> agents;        // coalition names, sorted
  std::vector<int> agent_ids;             // indices into spec.agents
  // per coalition agent: action id per local state (ir) or per global
  // reachable state (Ir)
  std::vector<std::vector<int>> choice;
};

// Deterministic lexicographic stream with random access.  Ir enumeration
// ranges over the reachable global states of `m`; ir only needs the spec,
// so `m` may be null in that case.
class StrategyEnumerator {
 public:
  StrategyEnumerator(const SystemSpec& spec, const GlobalModel* m,
                     const std::vector<std::string>& coalition,
                     StrategyKind kind);

  std::uint64_t count() const { return count_; }
  Strategy at(std::uint64_t index) const;

 private:
  const SystemSpec* spec_;
  StrategyKind kind_;
  std::vector<std::string> agents_;
  std::vector<int> agent_ids_;
  // agent-major slots; each slot holds the available action ids
  std::vector<std::vector<int>> slots_;
  std::vector<std::size_t> slots_per_agent_;
  std::uint64_t count_ = 1;
};

// Edge mask over m.edges: kept iff consistent with the strategy.
EdgeMask prune_mask(const GlobalModel& m, const Strategy& s);

// ---------------------------------------------------------------------------
//  Verdicts
// ---------------------------------------------------------------------------

struct CheckOptions {
  StrategyKind kind = StrategyKind::ir;
  bool want_witness = false;
  int jobs = 1;
  std::uint64_t timeout_ms = 0;  // 0 = no limit
};

struct CheckStats {
  std::uint64_t strategy_count = 0;       // outermost coalition
  std::uint64_t strategies_examined = 0;
  std::size_t states = 0;                 // global states (0 on the lazy path)
  std::size_t structure_vertices = 0;     // active structure size
  std::size_t edges = 0;
  std::uint64_t millis = 0;
  bool lazy_path = false;
};

struct Verdict {
  bool holds = false;
  std::optional<Strategy> witness;
  CheckStats stats;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decides f at the initial configuration of the spec's model.
Verdict check_strategic(const SystemSpec& spec, const StatePtr& f,
                        const CheckOptions& opts = {});

// Every strategy of the outermost coalition whose pruned check succeeds,
// in enumeration order.  f's outermost node must be strategic.
std::vector<Strategy> synth_all(const SystemSpec& spec, const StatePtr& f,
                                const CheckOptions& opts = {});

// Re-runs the pruned check for a single given strategy (witness soundness).
bool verify_witness(const SystemSpec& spec, const StatePtr& f,
                    const Strategy& s);

// ---------------------------------------------------------------------------
//  Serialization
// ---------------------------------------------------------------------------

// {agent: {state: action}}; Ir state names need the composed model.
nlohmann::json strategy_to_json(const SystemSpec& spec, const GlobalModel* m,
                                const Strategy& s);
nlohmann::json verdict_to_json(const SystemSpec& spec, const GlobalModel* m,
                               const Verdict& v);

}  // namespace stctl

#endif  // STCTL_STRATEGY_ENGINE_HPP
