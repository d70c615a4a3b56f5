#ifndef STCTL_REGION_HPP
#define STCTL_REGION_HPP

// ============================================================================
//  region.hpp -- clock regions and the region graph of the continuous
//  semantics, extended with one formula clock z
//
//  A region records, per clock: the integer part clipped at that clock's max
//  constant (or "beyond"), whether the fractional part is zero, and the total
//  preorder over the fractional parts of the non-beyond clocks (as ranks).
//
//  KEY DESIGN DECISIONS
//   * Per-clock max constants keep the region count down.
//   * The formula clock z is appended after the model clocks; model edges
//     never reset it, so z measures elapsed time since its last conceptual
//     reset.  Timed operators are evaluated from z-reset vertices; the graph
//     is closed under z-reset seeding only when nesting requires it.
//   * Executions alternate (possibly zero) delays and actions, so a vertex
//     admits an infinite execution iff an action edge into the core is
//     reachable through delay edges; the delay self-loop of the all-beyond
//     region is deliberately not an edge.
//   * Difference atoms with a clock beyond its max constant cannot be decided
//     by the abstraction; they are evaluated on the canonical representative.
// ============================================================================

#include <cstdint>
#include <vector>

#include "stctl/compose.hpp"
#include "stctl/formula.hpp"

namespace stctl {

// ---------------------------------------------------------------------------
//  Regions
// ---------------------------------------------------------------------------

struct Region {
  static constexpr std::uint8_t kBeyond = 0xFF;

  std::vector<std::uint8_t> ip;  // integer part or kBeyond
  std::vector<std::int8_t> fr;   // -2: beyond, -1: zero fraction, else rank

  bool operator==(const Region&) const = default;
  bool beyond(std::size_t c) const { return ip[c] == kBeyond; }
  bool all_beyond() const;
  int rank_count() const;        // number of distinct non-zero fractions
};

using MaxConsts = std::vector<std::uint32_t>;

Region region_of(const ClockValuation& v, const MaxConsts& maxc);
Region time_successor(const Region& r, const MaxConsts& maxc);
Region reset_region(const Region& r, const std::vector<int>& clocks);
bool region_satisfies(const Region& r, const ClockConstraint& cc,
                      const MaxConsts& maxc);
// A valuation inside r; beyond clocks get max+1, fractions are evenly spread.
ClockValuation representative(const Region& r, const MaxConsts& maxc);

// Does z (clock index `z`) lie inside I for every valuation of r?  Exact,
// because all interval endpoints are <= maxc[z].
bool region_in_interval(const Region& r, int z, const Interval& iv,
                        const MaxConsts& maxc);

// ---------------------------------------------------------------------------
//  Region graph
// ---------------------------------------------------------------------------

struct RegionVertex {
  int state = -1;
  Region region;
  int delay_succ = -1;                        // vertex id, -1 if none
  std::vector<std::pair<int, int>> actions;   // (model edge id, target vertex)
  int z_reset = -1;                           // vertex (state, region[z:=0])
};

struct RegionGraph {
  const GlobalModel* model = nullptr;
  MaxConsts maxc;          // model clocks then z
  int z = -1;              // index of the formula clock
  std::vector<RegionVertex> vertices;
  int initial = -1;
};

// Builds the reachable region graph; when z_closure is set, the vertex set is
// additionally closed under z-reset (needed for nested timed operators).
RegionGraph build_region_graph(const GlobalModel& m, std::uint32_t formula_max,
                               bool z_closure = true);

// Per-clock max constants from the model's guards and invariants (formula
// clock not included).
MaxConsts model_max_consts(const GlobalModel& m);

}  // namespace stctl

#endif  // STCTL_REGION_HPP
