// ============================================================================
//  region.cpp -- region algebra and region-graph construction
// ============================================================================

#include "stctl/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace stctl {

// ---------------------------------------------------------------------------
//  Region basics
// ---------------------------------------------------------------------------

bool Region::all_beyond() const {
  for (std::size_t c = 0; c < ip.size(); ++c)
    if (!beyond(c)) return false;
  return true;
}

int Region::rank_count() const {
  int m = -1;
  for (std::int8_t f : fr) m = std::max(m, static_cast<int>(f));
  return m + 1;
}

namespace {

// Compacts fractional ranks to consecutive 0..R-1.
void normalize_ranks(Region& r) {
  std::vector<std::int8_t> used;
  for (std::int8_t f : r.fr)
    if (f >= 0) used.push_back(f);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (std::int8_t& f : r.fr)
    if (f >= 0)
      f = static_cast<std::int8_t>(
          std::lower_bound(used.begin(), used.end(), f) - used.begin());
}

}  // namespace

Region region_of(const ClockValuation& v, const MaxConsts& maxc) {
  const std::size_t n = v.size();
  if (maxc.size() != n) throw std::invalid_argument("region_of: size mismatch");
  Region r;
  r.ip.resize(n);
  r.fr.resize(n);
  std::vector<double> fracs;
  for (std::size_t c = 0; c < n; ++c) {
    double x = v[c];
    if (x > static_cast<double>(maxc[c])) {
      r.ip[c] = Region::kBeyond;
      r.fr[c] = -2;
      continue;
    }
    double fl = std::floor(x);
    double frac = x - fl;
    r.ip[c] = static_cast<std::uint8_t>(fl);
    if (frac == 0.0) {
      r.fr[c] = -1;
    } else {
      fracs.push_back(frac);
      r.fr[c] = 0;  // placeholder, ranked below
    }
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (std::size_t c = 0; c < n; ++c) {
    if (r.fr[c] != 0 || r.ip[c] == Region::kBeyond) continue;
    double x = v[c];
    double frac = x - std::floor(x);
    if (frac == 0.0) continue;
    r.fr[c] = static_cast<std::int8_t>(
        std::lower_bound(fracs.begin(), fracs.end(), frac) - fracs.begin());
  }
  return r;
}

Region time_successor(const Region& r, const MaxConsts& maxc) {
  if (r.all_beyond()) return r;
  Region s = r;
  bool any_zero = false;
  for (std::size_t c = 0; c < r.fr.size(); ++c)
    if (!r.beyond(c) && r.fr[c] == -1) any_zero = true;

  if (any_zero) {
    // zero-fraction clocks start a fresh (smallest) fraction, or go beyond
    for (std::int8_t& f : s.fr)
      if (f >= 0) f = static_cast<std::int8_t>(f + 1);
    for (std::size_t c = 0; c < s.fr.size(); ++c) {
      if (s.beyond(c) || r.fr[c] != -1) continue;
      if (static_cast<std::uint32_t>(s.ip[c]) >= maxc[c]) {
        s.ip[c] = Region::kBeyond;
        s.fr[c] = -2;
      } else {
        s.fr[c] = 0;
      }
    }
    normalize_ranks(s);
    return s;
  }

  // no zero fractions: the maximal-rank clocks reach the next integer
  int top = s.rank_count() - 1;
  for (std::size_t c = 0; c < s.fr.size(); ++c) {
    if (s.beyond(c)) continue;
    if (s.fr[c] == top) {
      s.ip[c] = static_cast<std::uint8_t>(s.ip[c] + 1);
      s.fr[c] = -1;
      if (static_cast<std::uint32_t>(s.ip[c]) > maxc[c]) {
        // only possible when maxc is 0 and the clock sat in (0,1)
        s.ip[c] = Region::kBeyond;
        s.fr[c] = -2;
      }
    }
  }
  normalize_ranks(s);
  return s;
}

Region reset_region(const Region& r, const std::vector<int>& clocks) {
  Region s = r;
  for (int c : clocks) {
    s.ip[static_cast<std::size_t>(c)] = 0;
    s.fr[static_cast<std::size_t>(c)] = -1;
  }
  normalize_ranks(s);
  return s;
}

// ---------------------------------------------------------------------------
//  Constraint satisfaction on regions
// ---------------------------------------------------------------------------

namespace {

bool cmp_with(std::uint32_t ipart, bool frac_zero, Rel rel, std::uint32_t k) {
  switch (rel) {
    case Rel::Lt: return ipart < k;
    case Rel::Le: return ipart < k || (ipart == k && frac_zero);
    case Rel::Eq: return ipart == k && frac_zero;
    case Rel::Ge: return ipart >= k;
    case Rel::Gt: return ipart > k || (ipart == k && !frac_zero);
  }
  return false;
}

bool rel_int(long d, Rel rel, long k) {
  switch (rel) {
    case Rel::Lt: return d < k;
    case Rel::Le: return d <= k;
    case Rel::Eq: return d == k;
    case Rel::Ge: return d >= k;
    case Rel::Gt: return d > k;
  }
  return false;
}

bool rel_real(double lhs, Rel rel, double k) {
  switch (rel) {
    case Rel::Lt: return lhs < k;
    case Rel::Le: return lhs <= k;
    case Rel::Eq: return lhs == k;
    case Rel::Ge: return lhs >= k;
    case Rel::Gt: return lhs > k;
  }
  return false;
}

}  // namespace

ClockValuation representative(const Region& r, const MaxConsts& maxc) {
  ClockValuation v(r.ip.size());
  int ranks = r.rank_count();
  for (std::size_t c = 0; c < r.ip.size(); ++c) {
    if (r.beyond(c)) {
      v[c] = static_cast<double>(maxc[c]) + 1.0;
    } else if (r.fr[c] == -1) {
      v[c] = static_cast<double>(r.ip[c]);
    } else {
      double frac = static_cast<double>(r.fr[c] + 1) / static_cast<double>(ranks + 1);
      v[c] = static_cast<double>(r.ip[c]) + frac;
    }
  }
  return v;
}

bool region_satisfies(const Region& r, const ClockConstraint& cc,
                      const MaxConsts& maxc) {
  for (const ClockAtom& a : cc.atoms) {
    std::size_t x = static_cast<std::size_t>(a.clock);
    if (!a.diff) {
      if (a.bound > maxc[x])
        throw std::out_of_range("region_satisfies: constant exceeds max");
      bool ok;
      if (r.beyond(x)) {
        // value > maxc >= bound
        ok = a.rel == Rel::Ge || a.rel == Rel::Gt;
      } else {
        ok = cmp_with(r.ip[x], r.fr[x] == -1, a.rel, a.bound);
      }
      if (!ok) return false;
      continue;
    }
    std::size_t y = static_cast<std::size_t>(a.clock2);
    if (r.beyond(x) || r.beyond(y)) {
      // undecidable in the abstraction: canonical-representative reading
      ClockValuation v = representative(r, maxc);
      if (!rel_real(v[x] - v[y], a.rel, static_cast<double>(a.bound))) return false;
      continue;
    }
    long d = static_cast<long>(r.ip[x]) - static_cast<long>(r.ip[y]);
    long k = static_cast<long>(a.bound);
    // compare fractional parts via ranks; -1 (zero) is the smallest
    int fx = r.fr[x], fy = r.fr[y];
    bool ok;
    if (fx == fy) {
      ok = rel_int(d, a.rel, k);
    } else if (fx > fy) {
      // x - y in (d, d+1)
      switch (a.rel) {
        case Rel::Lt: case Rel::Le: ok = d < k; break;
        case Rel::Eq: ok = false; break;
        case Rel::Ge: case Rel::Gt: ok = d >= k; break;
      }
    } else {
      // x - y in (d-1, d)
      switch (a.rel) {
        case Rel::Lt: case Rel::Le: ok = d <= k; break;
        case Rel::Eq: ok = false; break;
        case Rel::Ge: case Rel::Gt: ok = d > k; break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool region_in_interval(const Region& r, int z, const Interval& iv,
                        const MaxConsts& maxc) {
  std::size_t c = static_cast<std::size_t>(z);
  bool lower;
  if (r.beyond(c)) {
    lower = true;
  } else {
    lower = cmp_with(r.ip[c], r.fr[c] == -1, iv.lo_closed ? Rel::Ge : Rel::Gt,
                     iv.lo);
  }
  if (!lower) return false;
  if (iv.hi == Interval::kInf) return true;
  if (iv.hi > maxc[c])
    throw std::out_of_range("region_in_interval: constant exceeds max");
  if (r.beyond(c)) return false;  // value > maxc >= hi
  return cmp_with(r.ip[c], r.fr[c] == -1, iv.hi_closed ? Rel::Le : Rel::Lt,
                  iv.hi);
}

// ---------------------------------------------------------------------------
//  Region-graph construction
// ---------------------------------------------------------------------------

MaxConsts model_max_consts(const GlobalModel& m) {
  MaxConsts maxc(m.clocks.size(), 0);
  auto feed = [&](const ClockConstraint& cc) {
    for (const ClockAtom& a : cc.atoms) {
      maxc[static_cast<std::size_t>(a.clock)] =
          std::max(maxc[static_cast<std::size_t>(a.clock)], a.bound);
      if (a.diff)
        maxc[static_cast<std::size_t>(a.clock2)] =
            std::max(maxc[static_cast<std::size_t>(a.clock2)], a.bound);
    }
  };
  for (const ClockConstraint& inv : m.invariants) feed(inv);
  for (const GlobalEdge& e : m.edges) feed(e.guard);
  return maxc;
}

namespace {

std::string region_key(int state, const Region& r) {
  std::string k;
  k.reserve(8 + 2 * r.ip.size());
  k.append(reinterpret_cast<const char*>(&state), sizeof(state));
  k.append(reinterpret_cast<const char*>(r.ip.data()), r.ip.size());
  k.append(reinterpret_cast<const char*>(r.fr.data()), r.fr.size());
  return k;
}

}  // namespace

RegionGraph build_region_graph(const GlobalModel& m, std::uint32_t formula_max,
                               bool z_closure) {
  RegionGraph g;
  g.model = &m;
  g.maxc = model_max_consts(m);
  g.z = static_cast<int>(g.maxc.size());
  g.maxc.push_back(formula_max);

  std::unordered_map<std::string, int> index;
  auto intern = [&](int state, const Region& r) -> int {
    std::string key = region_key(state, r);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(g.vertices.size());
    index.emplace(std::move(key), id);
    RegionVertex vx;
    vx.state = state;
    vx.region = r;
    g.vertices.push_back(std::move(vx));
    return id;
  };

  ClockValuation zero(g.maxc.size(), 0.0);
  g.initial = intern(m.initial, region_of(zero, g.maxc));

  std::vector<int> zreset{g.z};
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    int state = g.vertices[static_cast<std::size_t>(v)].state;
    Region region = g.vertices[static_cast<std::size_t>(v)].region;
    const ClockConstraint& inv = m.invariants[static_cast<std::size_t>(state)];
    bool inv_ok = region_satisfies(region, inv, g.maxc);

    if (z_closure) {
      int zr = intern(state, reset_region(region, zreset));
      g.vertices[static_cast<std::size_t>(v)].z_reset = zr;
    } else if (g.vertices[static_cast<std::size_t>(v)].region.ip[static_cast<std::size_t>(g.z)] == 0 &&
               g.vertices[static_cast<std::size_t>(v)].region.fr[static_cast<std::size_t>(g.z)] == -1) {
      g.vertices[static_cast<std::size_t>(v)].z_reset = v;
    }

    if (inv_ok) {
      // delay edge to the immediate time successor
      Region succ = time_successor(region, g.maxc);
      if (!(succ == region) && region_satisfies(succ, inv, g.maxc))
        g.vertices[static_cast<std::size_t>(v)].delay_succ = intern(state, succ);

      // action edges
      for (int e : m.out[static_cast<std::size_t>(state)]) {
        const GlobalEdge& ge = m.edges[static_cast<std::size_t>(e)];
        if (!region_satisfies(region, ge.guard, g.maxc)) continue;
        Region target = reset_region(region, ge.resets);
        if (!region_satisfies(target,
                              m.invariants[static_cast<std::size_t>(ge.dst)],
                              g.maxc))
          continue;
        int w = intern(ge.dst, target);
        g.vertices[static_cast<std::size_t>(v)].actions.emplace_back(e, w);
      }
    }
  }
  return g;
}

}  // namespace stctl
