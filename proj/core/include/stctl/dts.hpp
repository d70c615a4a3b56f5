#ifndef STCTL_DTS_HPP
#define STCTL_DTS_HPP

// ============================================================================
//  dts.hpp -- finite quotient of the discrete timed semantics
//
//  Vertices pair a global state with a saturated elapsed-time counter
//  d in {0..c_max} union {top}.  Saturation is sound for single-span
//  intervals: top means "strictly above every formula constant", so
//  top in I iff I is right-unbounded.  The counter restarts at 0 at each
//  temporal operator's evaluation point; the engine therefore runs each
//  timed operator over this product and projects back to counter-0 vertices.
// ============================================================================

#include <cstdint>
#include <vector>

#include "stctl/compose.hpp"
#include "stctl/formula.hpp"

namespace stctl {

inline constexpr std::uint32_t kCounterTop = 0xFFFFFFFF;

// Saturated addition of an edge duration to a counter.
std::uint32_t sat_add(std::uint32_t d, std::uint32_t delta, std::uint32_t c_max);

// Exact membership of a saturated counter in a formula interval.
bool interval_member(std::uint32_t d, const Interval& iv);

struct TimedVertex {
  int state = -1;
  std::uint32_t d = 0;  // saturated counter, kCounterTop = beyond c_max
};

struct TimedEdge {
  int edge = -1;  // GlobalModel edge id
  int dst = -1;   // target vertex
};

struct TimedStateGraph {
  const GlobalModel* model = nullptr;
  std::uint32_t c_max = 0;
  std::vector<TimedVertex> vertices;
  std::vector<std::vector<TimedEdge>> out;   // per vertex
  std::vector<int> zero_vertex;              // state -> vertex (state, 0)
};

// Graph over (state, saturated counter) pairs reachable from any (s, 0).
TimedStateGraph build_dts(const GlobalModel& m, std::uint32_t c_max);

}  // namespace stctl

#endif  // STCTL_DTS_HPP
