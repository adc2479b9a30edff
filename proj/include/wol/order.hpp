#pragma once

// Presentations of computable linear orders: a closed 2-ary comparison
// program over a coded domain (x is in the universe iff x <= x), with
// optional successor, limit-point, first/last and fundamental-sequence
// programs. Serialized as a keyed s-expression block (docs/formats.md).

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eval.hpp"
#include "expr.hpp"
#include "ordinal.hpp"

namespace wol {

struct OrderError : std::runtime_error {
  explicit OrderError(const std::string& m) : std::runtime_error(m) {}
};

struct FiniteOrder {
  std::vector<uint64_t> elems;                       // universe, ascending codes
  std::map<std::pair<uint64_t, uint64_t>, bool> le;  // comparison on elems
  std::set<std::pair<uint64_t, uint64_t>> succ;      // optional successor pairs

  bool leq(uint64_t a, uint64_t b) const {
    auto it = le.find({a, b});
    if (it == le.end()) throw OrderError("FiniteOrder: pair not in universe");
    return it->second;
  }
  bool lt(uint64_t a, uint64_t b) const { return leq(a, b) && a != b; }
  bool contains(uint64_t a) const {
    return std::find(elems.begin(), elems.end(), a) != elems.end();
  }
  size_t size() const { return elems.size(); }

  // elements in order position
  std::vector<uint64_t> sorted() const {
    std::vector<uint64_t> s = elems;
    std::sort(s.begin(), s.end(), [&](uint64_t a, uint64_t b) { return lt(a, b); });
    return s;
  }

  void check_linear() const {
    for (uint64_t a : elems) {
      if (!leq(a, a)) throw OrderError("FiniteOrder: not reflexive");
      for (uint64_t b : elems) {
        if (leq(a, b) && leq(b, a) && a != b) throw OrderError("FiniteOrder: not antisymmetric");
        if (!leq(a, b) && !leq(b, a)) throw OrderError("FiniteOrder: not total");
        for (uint64_t c : elems)
          if (leq(a, b) && leq(b, c) && !leq(a, c)) throw OrderError("FiniteOrder: not transitive");
      }
    }
    for (const auto& [x, y] : succ) {
      if (!lt(x, y)) throw OrderError("FiniteOrder: successor pair not increasing");
      for (uint64_t z : elems)
        if (lt(x, z) && lt(z, y)) throw OrderError("FiniteOrder: successor pair not adjacent");
    }
  }

  std::string export_pairs() const {
    std::string out;
    for (uint64_t a : elems)
      for (uint64_t b : elems)
        if (leq(a, b)) {
          out += std::to_string(a);
          out += " <= ";
          out += std::to_string(b);
          out += '\n';
        }
    return out;
  }
};

struct OrderPresentation {
  expr::Program leq;                          // (x, y) -> 0/1
  std::optional<expr::Program> succ;          // (x, y) -> 0/1
  std::optional<expr::Program> limit;         // (x) -> 0/1
  std::optional<expr::Program> first;         // () -> code
  std::optional<expr::Program> last;          // () -> code
  std::optional<expr::Program> fundseq;       // (x, n) -> code
  EvalLimits fuel;

  bool member(uint64_t x, const EvalContext& ctx) const {
    return !eval_program(ctx, leq, {Val(x), Val(x)}).is_zero();
  }
  bool le(uint64_t x, uint64_t y, const EvalContext& ctx) const {
    return !eval_program(ctx, leq, {Val(x), Val(y)}).is_zero();
  }

  std::string serialize() const {
    std::string out = "(presentation";
    auto field = [&](const char* k, const expr::Program& p) {
      out += "\n  (";
      out += k;
      out += ' ';
      out += expr::to_sexpr(p);
      out += ')';
    };
    field("leq", leq);
    if (succ) field("succ", *succ);
    if (limit) field("limit", *limit);
    if (first) field("first", *first);
    if (last) field("last", *last);
    if (fundseq) field("fundseq", *fundseq);
    out += ")\n";
    return out;
  }

  static OrderPresentation deserialize(std::string_view text);
};

namespace detail {

inline void expect_tok(std::string_view s, size_t& pos, char c) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
  if (pos >= s.size() || s[pos] != c)
    throw OrderError(std::string("presentation parse: expected '") + c + "'");
  pos++;
}

inline std::string read_word(std::string_view s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
  std::string w;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
    w += s[pos++];
  return w;
}

inline std::string read_sexpr(std::string_view s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
  if (pos >= s.size() || s[pos] != '(') throw OrderError("presentation parse: expected program");
  size_t start = pos, depth = 0;
  do {
    if (s[pos] == '(') depth++;
    if (s[pos] == ')') depth--;
    pos++;
  } while (pos < s.size() && depth);
  if (depth) throw OrderError("presentation parse: unbalanced program");
  return std::string(s.substr(start, pos - start));
}

} // namespace detail

inline OrderPresentation OrderPresentation::deserialize(std::string_view text) {
  size_t pos = 0;
  detail::expect_tok(text, pos, '(');
  if (detail::read_word(text, pos) != "presentation")
    throw OrderError("presentation parse: bad header");
  OrderPresentation p;
  bool have_leq = false;
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    if (pos < text.size() && text[pos] == ')') { pos++; break; }
    detail::expect_tok(text, pos, '(');
    std::string key = detail::read_word(text, pos);
    expr::Program prog = expr::parse_program(detail::read_sexpr(text, pos));
    detail::expect_tok(text, pos, ')');
    if (key == "leq") { p.leq = prog; have_leq = true; }
    else if (key == "succ") p.succ = prog;
    else if (key == "limit") p.limit = prog;
    else if (key == "first") p.first = prog;
    else if (key == "last") p.last = prog;
    else if (key == "fundseq") p.fundseq = prog;
    else throw OrderError("presentation parse: unknown field '" + key + "'");
  }
  if (!have_leq) throw OrderError("presentation parse: missing leq");
  return p;
}

// ---- exploration ----

inline FiniteOrder explore_prefix(const OrderPresentation& p, uint64_t bound,
                                  EvalContext* shared_ctx = nullptr) {
  EvalContext local;
  local.limits = p.fuel;
  EvalContext& ctx = shared_ctx ? *shared_ctx : local;
  FiniteOrder f;
  for (uint64_t x = 0; x < bound; x++)
    if (p.member(x, ctx)) f.elems.push_back(x);
  for (uint64_t a : f.elems)
    for (uint64_t b : f.elems)
      f.le[{a, b}] = p.le(a, b, ctx);
  if (p.succ) {
    for (uint64_t a : f.elems)
      for (uint64_t b : f.elems)
        if (!eval_program(ctx, *p.succ, {Val(a), Val(b)}).is_zero())
          f.succ.insert({a, b});
  }
  f.check_linear();
  return f;
}

// ---- basic presentations ----

inline OrderPresentation omega_presentation() {
  using namespace expr;
  OrderPresentation p;
  p.leq = Program{mk(Op::Le, {arg(0), arg(1)})};
  p.succ = Program{mk(Op::Eq, {mk(Op::Add, {arg(0), cst(uint64_t(1))}), arg(1)})};
  p.limit = Program{cst(uint64_t(0))};
  p.first = Program{cst(uint64_t(0))};
  return p;
}

inline OrderPresentation empty_presentation() {
  using namespace expr;
  OrderPresentation p;
  p.leq = Program{cst(uint64_t(0))};
  return p;
}

// Dyadic rationals with 0 first: code 0 is the least element; code n >= 1
// with binary digits 1 b1..bk denotes the rational 0.b1..bk1, giving a dense
// order without endpoints above the first element (order type 1 + eta).
namespace detail {

inline expr::NodeRef dyadic_leq_node(expr::NodeRef x, expr::NodeRef y) {
  using namespace expr;
  // scale(n) = bitlen(n), numerator(n) = (n - 2^(k-1)) * 2 + 1 where k = bitlen(n)
  auto num = [](NodeRef n) {
    NodeRef k = mk(Op::BitLen, {n});
    NodeRef top = mk(Op::Shl, {cst(uint64_t(1)), mk(Op::Sub, {k, cst(uint64_t(1))})});
    return mk(Op::Add, {mk(Op::Mul, {mk(Op::Sub, {n, top}), cst(uint64_t(2))}), cst(uint64_t(1))});
  };
  auto scale = [](NodeRef n) { return mk(Op::BitLen, {n}); };
  // compare num(x) << scale(y)  vs  num(y) << scale(x)
  NodeRef lhs = mk(Op::Shl, {num(x), scale(y)});
  NodeRef rhs = mk(Op::Shl, {num(y), scale(x)});
  return mk(Op::Le, {lhs, rhs});
}

} // namespace detail

inline OrderPresentation eta_presentation() {
  using namespace expr;
  OrderPresentation p;
  NodeRef x = arg(0), y = arg(1);
  NodeRef zero_x = mk(Op::Eq, {x, cst(uint64_t(0))});
  NodeRef zero_y = mk(Op::Eq, {y, cst(uint64_t(0))});
  p.leq = Program{mk(Op::If, {zero_x, cst(uint64_t(1)),
                    mk(Op::If, {zero_y, cst(uint64_t(0)),
                                wol::detail::dyadic_leq_node(x, y)})})};
  p.first = Program{cst(uint64_t(0))};
  return p;
}

inline OrderPresentation lift_finite(const FiniteOrder& f) {
  using namespace expr;
  f.check_linear();
  NodeRef body = cst(uint64_t(0));
  for (auto it = f.le.rbegin(); it != f.le.rend(); ++it) {
    if (!it->second) continue;
    NodeRef match = mk(Op::And, {mk(Op::Eq, {arg(0), cst(it->first.first)}),
                                 mk(Op::Eq, {arg(1), cst(it->first.second)})});
    body = mk(Op::If, {match, cst(uint64_t(1)), body});
  }
  OrderPresentation p;
  p.leq = Program{body};
  if (!f.succ.empty()) {
    NodeRef s = cst(uint64_t(0));
    for (auto it = f.succ.rbegin(); it != f.succ.rend(); ++it) {
      NodeRef match = mk(Op::And, {mk(Op::Eq, {arg(0), cst(it->first)}),
                                   mk(Op::Eq, {arg(1), cst(it->second)})});
      s = mk(Op::If, {match, cst(uint64_t(1)), s});
    }
    p.succ = Program{s};
  }
  return p;
}

// New greatest element at code 0; previous codes shift up by one.
inline OrderPresentation add_top(const OrderPresentation& p) {
  using namespace expr;
  NodeRef x = arg(0), y = arg(1);
  auto shifted = [&](NodeRef a, NodeRef b) {
    return apply_program(p.leq, {mk(Op::Sub, {a, cst(uint64_t(1))}),
                                 mk(Op::Sub, {b, cst(uint64_t(1))})});
  };
  NodeRef mem_x = apply_program(p.leq, {mk(Op::Sub, {x, cst(uint64_t(1))}),
                                        mk(Op::Sub, {x, cst(uint64_t(1))})});
  OrderPresentation out;
  out.leq = Program{mk(Op::If, {mk(Op::Eq, {x, cst(uint64_t(0))}),
                                mk(Op::Eq, {y, cst(uint64_t(0))}),
                    mk(Op::If, {mk(Op::Eq, {y, cst(uint64_t(0))}),
                                mem_x,
                                shifted(x, y)})})};
  out.fuel = p.fuel;
  return out;
}

// ---- the structured order L' = omega * (1 + L) + 1 ----
//
// Codes: 0 is the top element infinity; 1 + <i, m> is the pair (block i,
// position m), where block 0 is the leading copy of omega and block 1 + n
// stands for element n of L. Comparison is lexicographic on (block, m) with
// block 0 first and blocks ordered as in L; everything precedes infinity.
// The structure programs (successor, limit points, first/last, fundamental
// sequences) are all derived from the input comparison program.

namespace detail {

using expr::NodeRef;
using expr::Op;

// block order: i, j are block codes (0 = leading block, 1 + n = element n)
inline NodeRef block_le(const expr::Program& leq, NodeRef i, NodeRef j) {
  using namespace expr;
  NodeRef in_l = apply_program(leq, {mk(Op::Sub, {i, cst(uint64_t(1))}),
                                     mk(Op::Sub, {j, cst(uint64_t(1))})});
  return mk(Op::If, {mk(Op::Eq, {i, cst(uint64_t(0))}), cst(uint64_t(1)),
         mk(Op::If, {mk(Op::Eq, {j, cst(uint64_t(0))}), cst(uint64_t(0)), in_l})});
}

inline NodeRef block_mem(const expr::Program& leq, NodeRef i) {
  using namespace expr;
  NodeRef in_l = apply_program(leq, {mk(Op::Sub, {i, cst(uint64_t(1))}),
                                     mk(Op::Sub, {i, cst(uint64_t(1))})});
  return mk(Op::Or, {mk(Op::Eq, {i, cst(uint64_t(0))}), in_l});
}

} // namespace detail

inline OrderPresentation omega_times_one_plus_plus_one(const OrderPresentation& lp) {
  using namespace expr;
  OrderPresentation out;
  NodeRef x = arg(0), y = arg(1);

  auto blk = [](NodeRef v) { return mk(Op::Fst, {mk(Op::Sub, {v, cst(uint64_t(1))})}); };
  auto pos = [](NodeRef v) { return mk(Op::Snd, {mk(Op::Sub, {v, cst(uint64_t(1))})}); };
  auto is_pair = [](NodeRef v) {
    // 1 + <i,m> round trips through fst/snd
    NodeRef w = mk(Op::Sub, {v, cst(uint64_t(1))});
    NodeRef re = mk(Op::Pair, {mk(Op::Fst, {w}), mk(Op::Snd, {w})});
    return mk(Op::And, {mk(Op::Lt, {cst(uint64_t(0)), v}), mk(Op::Eq, {re, w})});
  };

  NodeRef mem_x = mk(Op::And, {is_pair(x), wol::detail::block_mem(lp.leq, blk(x))});
  NodeRef mem_y = mk(Op::And, {is_pair(y), wol::detail::block_mem(lp.leq, blk(y))});

  NodeRef same_block = mk(Op::And, {wol::detail::block_le(lp.leq, blk(x), blk(y)),
                                    wol::detail::block_le(lp.leq, blk(y), blk(x))});
  NodeRef lex = mk(Op::If, {same_block,
                            mk(Op::Le, {pos(x), pos(y)}),
                            wol::detail::block_le(lp.leq, blk(x), blk(y))});

  out.leq = Program{mk(Op::If, {mk(Op::Eq, {x, cst(uint64_t(0))}),
                                mk(Op::Eq, {y, cst(uint64_t(0))}),
                    mk(Op::If, {mk(Op::Eq, {y, cst(uint64_t(0))}),
                                mem_x,
                                mk(Op::And, {mk(Op::And, {mem_x, mem_y}), lex})})})};

  // successor: (i, m) -> (i, m+1); infinity has none
  NodeRef succ_pair = mk(Op::Eq, {mk(Op::Sub, {y, cst(uint64_t(1))}),
                                  mk(Op::Pair, {blk(x), mk(Op::Add, {pos(x), cst(uint64_t(1))})})});
  out.succ = Program{mk(Op::And, {mk(Op::And, {mem_x, mem_y}), succ_pair})};

  // limit points: infinity, and (i, 0) for i a block of L (not the leading block)
  NodeRef is_lim = mk(Op::Or, {mk(Op::Eq, {x, cst(uint64_t(0))}),
                               mk(Op::And, {mem_x,
                                 mk(Op::And, {mk(Op::Eq, {pos(x), cst(uint64_t(0))}),
                                              mk(Op::Lt, {cst(uint64_t(0)), blk(x)})})})});
  out.limit = Program{is_lim};

  out.first = Program{cst(uint64_t(1))};  // 1 + <0,0> = 1
  out.last = Program{cst(uint64_t(0))};

  // fundamental sequence for a limit x at index n: (best, n) where best is the
  // largest block below x's block among block codes < n, defaulting to the
  // leading block. For infinity: largest block among codes < n.
  {
    // args inside iter body: arg0 = t, arg1 = acc(best so far), arg2 = x, arg3 = n
    NodeRef t = arg(0), acc = arg(1), xx = arg(2);
    NodeRef cand_mem = wol::detail::block_mem(lp.leq, t);
    NodeRef below = mk(Op::If, {mk(Op::Eq, {xx, cst(uint64_t(0))}), cst(uint64_t(1)),
                                mk(Op::And, {wol::detail::block_le(lp.leq, t, blk(xx)),
                                             mk(Op::Not, {wol::detail::block_le(lp.leq, blk(xx), t)})})});
    NodeRef better = mk(Op::And, {wol::detail::block_le(lp.leq, acc, t), mk(Op::Not, {wol::detail::block_le(lp.leq, t, acc)})});
    NodeRef step = mk(Op::If, {mk(Op::And, {cand_mem, mk(Op::And, {below, better})}), t, acc});
    NodeRef best = mk(Op::Iter, {arg(1) /*n*/, cst(uint64_t(0)), step});
    out.fundseq = Program{mk(Op::Add, {cst(uint64_t(1)), mk(Op::Pair, {best, arg(1)})})};
  }

  out.fuel = lp.fuel;
  return out;
}

// Restriction of a presentation to everything except its first element.
inline OrderPresentation drop_first(const OrderPresentation& p, uint64_t first_code) {
  using namespace expr;
  NodeRef x = arg(0), y = arg(1);
  NodeRef not_first = mk(Op::And, {mk(Op::Not, {mk(Op::Eq, {x, cst(first_code)})}),
                                   mk(Op::Not, {mk(Op::Eq, {y, cst(first_code)})})});
  OrderPresentation out;
  out.leq = Program{mk(Op::And, {not_first, apply_program(p.leq, {x, y})})};
  out.fuel = p.fuel;
  return out;
}

} // namespace wol
