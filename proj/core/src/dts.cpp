// ============================================================================
//  dts.cpp -- saturated-counter product over a discrete global model
// ============================================================================

#include "stctl/dts.hpp"

#include <stdexcept>
#include <unordered_map>

namespace stctl {

std::uint32_t sat_add(std::uint32_t d, std::uint32_t delta,
                      std::uint32_t c_max) {
  if (d == kCounterTop) return kCounterTop;
  std::uint64_t sum = static_cast<std::uint64_t>(d) + delta;
  return sum > c_max ? kCounterTop : static_cast<std::uint32_t>(sum);
}

bool interval_member(std::uint32_t d, const Interval& iv) {
  if (d == kCounterTop) return iv.hi == Interval::kInf;
  bool lo_ok = iv.lo_closed ? d >= iv.lo : d > iv.lo;
  bool hi_ok = iv.hi == Interval::kInf ? true
                                       : (iv.hi_closed ? d <= iv.hi : d < iv.hi);
  return lo_ok && hi_ok;
}

TimedStateGraph build_dts(const GlobalModel& m, std::uint32_t c_max) {
  if (m.spec.semantics == Semantics::Continuous)
    throw std::invalid_argument("build_dts: continuous model");

  TimedStateGraph g;
  g.model = &m;
  g.c_max = c_max;
  g.zero_vertex.assign(m.states.size(), -1);

  // key = state * (c_max + 2) + slot, slot c_max+1 for top
  auto slot_of = [&](std::uint32_t d) {
    return d == kCounterTop ? c_max + 1 : d;
  };
  std::unordered_map<std::uint64_t, int> index;
  auto intern = [&](int state, std::uint32_t d) {
    std::uint64_t key = static_cast<std::uint64_t>(state) * (c_max + 2) +
                        slot_of(d);
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(g.vertices.size()));
    if (fresh) {
      g.vertices.push_back({state, d});
      g.out.emplace_back();
    }
    return it->second;
  };

  for (std::size_t s = 0; s < m.states.size(); ++s)
    g.zero_vertex[s] = intern(static_cast<int>(s), 0);

  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    TimedVertex tv = g.vertices[v];
    for (int e : m.out[static_cast<std::size_t>(tv.state)]) {
      const GlobalEdge& ge = m.edges[static_cast<std::size_t>(e)];
      int dst = intern(ge.dst, sat_add(tv.d, ge.duration, c_max));
      g.out[v].push_back({e, dst});
    }
  }
  return g;
}

}  // namespace stctl
