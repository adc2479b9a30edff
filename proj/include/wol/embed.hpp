#pragma once

// The executable reading of the interval-embedding formulas: [x,y) embeds
// into alpha < omega^n, defined by recursion on n with bounded search over an
// explored prefix. Verdicts describe the explored restriction; unknown is
// returned when the structural caps bite, never a wrong true/false.
//
//   n = 0:   [x,y) into 0  iff  x = y
//   n+1, alpha = w^(m1) + ... + w^(mk) (coefficients expanded, mi <= n):
//            some chain x = c0 <= c1 <= ... <= ck = y such that for every
//            explored d in [ci, c_{i+1}): [ci, d) embeds into some
//            beta < w^(mi) at level n.

#include <map>
#include <string>
#include <vector>

#include "eval.hpp"
#include "order.hpp"

namespace wol {

namespace detail {

// expanded exponent list of alpha (< omega^maxexp), outermost first
inline std::optional<std::vector<uint64_t>> expand_exponents(const CnfOrdinal& alpha,
                                                             uint64_t maxexp, uint64_t cap) {
  std::vector<uint64_t> out;
  for (const auto& t : alpha.terms()) {
    CnfOrdinal e = t.exponent();
    if (!e.is_finite()) return std::nullopt;
    BigNat ev = e.finite_value();
    if (!ev.fits_u64() || ev.as_u64() >= maxexp) return std::nullopt;
    if (!t.coeff.fits_u64() || t.coeff.as_u64() > cap || out.size() + t.coeff.as_u64() > cap)
      return std::nullopt;
    for (uint64_t i = 0; i < t.coeff.as_u64(); i++) out.push_back(ev.as_u64());
  }
  return out;
}

// all CNF ordinals < alpha with exponents < maxexp and coefficients <= cap
inline std::vector<CnfOrdinal> enumerate_below(const CnfOrdinal& alpha, uint64_t maxexp,
                                               uint64_t cap) {
  std::vector<CnfOrdinal> out;
  std::vector<CnfOrdinal> partials{CnfOrdinal()};
  for (uint64_t e = maxexp; e-- > 0;) {
    std::vector<CnfOrdinal> next;
    CnfOrdinal power = CnfOrdinal::omega_pow(CnfOrdinal::finite(e));
    for (const auto& p : partials)
      for (uint64_t c = 0; c <= cap; c++) {
        CnfOrdinal q = CnfOrdinal::add(p, CnfOrdinal::mul(power, CnfOrdinal::finite(c)));
        if (q < alpha) next.push_back(q);
        else if (c == 0) next.push_back(q);  // keep the prefix itself
        else break;
      }
    partials = std::move(next);
  }
  for (const auto& p : partials)
    if (p < alpha) out.push_back(p);
  // dedup
  std::sort(out.begin(), out.end(), [](const CnfOrdinal& a, const CnfOrdinal& b) { return a < b; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct EmbedSearch {
  const FiniteOrder& f;
  uint64_t chain_cap = 64;
  std::map<std::string, Truth> memo;

  std::string key(uint64_t x, uint64_t y, const CnfOrdinal& a, uint64_t n) {
    return std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(n) + "," + a.to_text();
  }

  Truth run(uint64_t x, uint64_t y, const CnfOrdinal& alpha, uint64_t n) {
    std::string k = key(x, y, alpha, n);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    memo[k] = Truth::Unknown;  // cycle guard; overwritten below
    Truth r = compute(x, y, alpha, n);
    memo[k] = r;
    return r;
  }

  Truth compute(uint64_t x, uint64_t y, const CnfOrdinal& alpha, uint64_t n) {
    if (n == 0) return x == y ? Truth::True : Truth::False;
    auto exps = expand_exponents(alpha, n, chain_cap);
    if (!exps) return Truth::Unknown;
    const std::vector<uint64_t>& pieces = *exps;
    if (!f.contains(x) || !f.contains(y)) return Truth::Unknown;
    if (!f.leq(x, y)) return Truth::False;

    // DP over chain positions: reachable(c) after consuming i pieces
    std::vector<uint64_t> candidates;
    for (uint64_t c : f.elems)
      if (f.leq(x, c) && f.leq(c, y)) candidates.push_back(c);

    std::map<uint64_t, Truth> reach;
    reach[x] = Truth::True;
    for (uint64_t m : pieces) {
      std::map<uint64_t, Truth> next;
      for (uint64_t c2 : candidates) {
        Truth best = Truth::False;
        for (const auto& [c1, t1] : reach) {
          if (t1 == Truth::False) continue;
          if (!f.leq(c1, c2)) continue;
          Truth piece = piece_ok(c1, c2, m, n);
          Truth step = combine_and(t1, piece);
          best = combine_or(best, step);
          if (best == Truth::True) break;
        }
        if (best != Truth::False) next[c2] = best;
      }
      reach = std::move(next);
      if (reach.empty()) break;
    }
    auto it = reach.find(y);
    if (it == reach.end()) return Truth::False;
    return it->second;
  }

  // every explored d in [c1, c2) admits beta < w^m with [c1, d) into beta
  Truth piece_ok(uint64_t c1, uint64_t c2, uint64_t m, uint64_t n) {
    Truth all = Truth::True;
    for (uint64_t d : f.elems) {
      if (!f.leq(c1, d) || !f.lt(d, c2)) continue;
      Truth ex = exists_beta(c1, d, m, n);
      all = combine_and(all, ex);
      if (all == Truth::False) return Truth::False;
    }
    return all;
  }

  Truth exists_beta(uint64_t c1, uint64_t d, uint64_t m, uint64_t n) {
    if (m == 0) return c1 == d ? Truth::True : Truth::False;
    uint64_t cap = f.size() + 1;
    CnfOrdinal power = CnfOrdinal::omega_pow(CnfOrdinal::finite(m));
    Truth best = Truth::False;
    for (const auto& beta : enumerate_below(power, m, cap)) {
      Truth t = run(c1, d, beta, n);
      best = combine_or(best, t);
      if (best == Truth::True) return best;
    }
    return best;
  }

  static Truth combine_and(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::True && b == Truth::True) return Truth::True;
    return Truth::Unknown;
  }
  static Truth combine_or(Truth a, Truth b) {
    if (a == Truth::True || b == Truth::True) return Truth::True;
    if (a == Truth::False && b == Truth::False) return Truth::False;
    return Truth::Unknown;
  }
};

} // namespace detail

// [x,y) into alpha over the explored prefix of p.
inline TruthVerdict interval_embed_check(const FiniteOrder& explored, uint64_t x, uint64_t y,
                                         const CnfOrdinal& alpha, uint64_t n) {
  detail::EmbedSearch s{explored, 64, {}};
  return TruthVerdict{s.run(x, y, alpha, n), 0};
}

// L restricted below a embeds into alpha < omega^n: the initial-segment form,
// anchored at the explored minimum.
inline TruthVerdict embed_check(const OrderPresentation& p, uint64_t a, const CnfOrdinal& alpha,
                                uint64_t n, uint64_t search_bound) {
  CnfOrdinal limit = CnfOrdinal::omega_pow(CnfOrdinal::finite(n));
  if (!(alpha < limit))
    throw OrderError("embed_check: alpha is not below omega^n");
  FiniteOrder f = explore_prefix(p, search_bound);
  if (f.elems.empty()) return TruthVerdict{Truth::False, search_bound};
  if (!f.contains(a)) return TruthVerdict{Truth::Unknown, search_bound};
  uint64_t least = f.sorted().front();
  detail::EmbedSearch s{f, 64, {}};
  return TruthVerdict{s.run(least, a, alpha, n), search_bound};
}

inline TruthVerdict embed_check(const FiniteOrder& f, uint64_t a, const CnfOrdinal& alpha,
                                uint64_t n) {
  if (f.elems.empty()) return TruthVerdict{Truth::False, 0};
  if (!f.contains(a)) return TruthVerdict{Truth::Unknown, 0};
  uint64_t least = f.sorted().front();
  detail::EmbedSearch s{f, 64, {}};
  return TruthVerdict{s.run(least, a, alpha, n), 0};
}

} // namespace wol
