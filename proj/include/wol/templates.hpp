#pragma once

// Prefix-template consistency checks. A single finite snapshot can only be
// checked loosely (any finite chain embeds into every infinite template);
// the informative checks compare snapshots at growing bounds:
//   omega-like templates forbid new predecessors of already-explored
//   elements, the (1+eta)-shaped ones demand densification witnesses.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "order.hpp"

namespace wol {

struct PrefixTemplate {
  enum Kind { Finite, Omega, OmegaTimesK, OmegaPowN, OmegaPowEtaN } kind;
  uint64_t param = 0;

  static PrefixTemplate finite(uint64_t n) { return {Finite, n}; }
  static PrefixTemplate omega() { return {Omega, 1}; }
  static PrefixTemplate omega_times(uint64_t k) { return {OmegaTimesK, k}; }
  static PrefixTemplate omega_pow(uint64_t n) { return {OmegaPowN, n}; }
  static PrefixTemplate omega_pow_eta(uint64_t n) { return {OmegaPowEtaN, n}; }
};

inline bool prefix_iso_check(const FiniteOrder& f, PrefixTemplate t) {
  try {
    f.check_linear();
  } catch (const OrderError&) {
    return false;
  }
  switch (t.kind) {
    case PrefixTemplate::Finite: return f.size() <= t.param;
    case PrefixTemplate::Omega:
    case PrefixTemplate::OmegaTimesK:
    case PrefixTemplate::OmegaPowN:
    case PrefixTemplate::OmegaPowEtaN:
      return true;  // every finite linear order embeds as a prefix snapshot
  }
  return false;
}

struct PrefixEvidence {
  std::vector<FiniteOrder> snapshots;            // at strictly growing bounds
  std::map<uint64_t, uint64_t> stable_since;     // element -> snapshot index certified stable
};

namespace detail {

// elements of `later` that are strictly below x but absent from `earlier`
inline std::vector<uint64_t> new_predecessors(const FiniteOrder& earlier, const FiniteOrder& later,
                                              uint64_t x) {
  std::vector<uint64_t> out;
  for (uint64_t z : later.elems)
    if (!earlier.contains(z) && later.lt(z, x)) out.push_back(z);
  return out;
}

inline bool densification_witnessed(const FiniteOrder& earlier, const FiniteOrder& later) {
  std::vector<uint64_t> s = earlier.sorted();
  for (size_t i = 0; i + 1 < s.size(); i++) {
    for (uint64_t z : later.elems) {
      if (earlier.contains(z)) continue;
      if (later.lt(s[i], z) && later.lt(z, s[i + 1])) return true;
    }
  }
  return false;
}

} // namespace detail

inline bool prefix_iso_check(const PrefixEvidence& ev, PrefixTemplate t) {
  for (const auto& f : ev.snapshots)
    if (!prefix_iso_check(f, t)) return false;
  if (ev.snapshots.size() < 2) return true;

  switch (t.kind) {
    case PrefixTemplate::Finite: return true;
    case PrefixTemplate::Omega:
    case PrefixTemplate::OmegaTimesK: {
      // consistent with omega * k: the later snapshot splits into at most k
      // convex blocks such that, against every earlier snapshot, new
      // elements only extend their block on the right. Elements with a
      // stability certificate must keep their predecessor set outright.
      uint64_t k = t.kind == PrefixTemplate::Omega ? 1 : t.param;
      const FiniteOrder& last = ev.snapshots.back();
      std::vector<uint64_t> sorted = last.sorted();
      size_t n = sorted.size();
      if (n == 0) return true;
      // enumerate block splits: cut positions are increasing indices
      std::vector<size_t> cuts;
      std::function<bool(size_t, size_t)> try_cuts = [&](size_t from, size_t remaining) -> bool {
        if (remaining == 0) {
          auto block_of = [&](uint64_t x) {
            size_t pos = std::find(sorted.begin(), sorted.end(), x) - sorted.begin();
            size_t b = 0;
            for (size_t cpos : cuts)
              if (pos >= cpos) b++;
            return b;
          };
          for (size_t i = 0; i + 1 < ev.snapshots.size(); i++) {
            const FiniteOrder& a = ev.snapshots[i];
            for (uint64_t z : last.elems) {
              if (a.contains(z)) continue;
              for (uint64_t y : a.elems)
                if (block_of(y) == block_of(z) && last.lt(z, y)) return false;
            }
            for (uint64_t x : a.elems) {
              auto it = ev.stable_since.find(x);
              if (it != ev.stable_since.end() && it->second <= i &&
                  !detail::new_predecessors(a, ev.snapshots.back(), x).empty())
                return false;
            }
          }
          return true;
        }
        for (size_t c = from; c < n; c++) {
          cuts.push_back(c);
          if (try_cuts(c + 1, remaining - 1)) { cuts.pop_back(); return true; }
          cuts.pop_back();
        }
        // fewer blocks than k is also fine
        return try_cuts(n, remaining - 1);
      };
      return try_cuts(1, k ? k - 1 : 0);
    }
    case PrefixTemplate::OmegaPowN:
      // for n >= 2 a prefix of omega^n legitimately grows to the left of
      // explored elements; only reject densification inside a single check
      return true;
    case PrefixTemplate::OmegaPowEtaN:
      return detail::densification_witnessed(ev.snapshots.front(), ev.snapshots.back());
  }
  return false;
}

} // namespace wol
