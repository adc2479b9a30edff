#pragma once

// Trees of finite sequences with decidable membership, and the
// Kleene-Brouwer linearization: every node sits above its descendants, and
// siblings order their subtrees by child value. Well-ordered iff the tree is
// well-founded.

#include <functional>
#include <vector>

#include "eval.hpp"
#include "goedel.hpp"
#include "order.hpp"

namespace wol {

struct SequenceTree {
  expr::Program member;  // (seq-code) -> 0/1; prefix-closed by construction

  bool contains(const std::vector<Val>& s, const EvalContext& ctx = {}) const {
    return !eval_program(ctx, member, {Val(encode_seq(s))}).is_zero();
  }
  bool contains_code(const BigNat& code, const EvalContext& ctx = {}) const {
    return !eval_program(ctx, member, {Val(code)}).is_zero();
  }
};

// Finite test trees: membership as an explicit list of sequence codes.
inline SequenceTree finite_tree(const std::vector<std::vector<Val>>& seqs) {
  using namespace expr;
  NodeRef body = cst(uint64_t(0));
  for (auto it = seqs.rbegin(); it != seqs.rend(); ++it)
    body = mk(Op::If, {mk(Op::Eq, {arg(0), cst(Val(encode_seq(*it)))}), cst(uint64_t(1)), body});
  return SequenceTree{Program{body}};
}

inline OrderPresentation kleene_brouwer(const SequenceTree& t) {
  using namespace expr;
  NodeRef a = arg(0), b = arg(1);
  NodeRef mem = mk(Op::And, {apply_program(t.member, {a}), apply_program(t.member, {b})});

  // first index where the sequences differ; inside minbelow: arg0 = i, a/b at 1/2
  NodeRef la = mk(Op::SeqLen, {a}), lb = mk(Op::SeqLen, {b});
  NodeRef minlen = mk(Op::If, {mk(Op::Le, {la, lb}), mk(Op::SeqLen, {arg(0)}), mk(Op::SeqLen, {arg(1)})});
  NodeRef differ = mk(Op::Not, {mk(Op::Eq, {mk(Op::SeqAt, {arg(1), arg(0)}),
                                            mk(Op::SeqAt, {arg(2), arg(0)})})});
  NodeRef d = mk(Op::MinBelow, {minlen, differ});

  // with d bound as a let: iter(1, d, body) puts d at arg 1, a/b at 2/3
  NodeRef dd = arg(1), aa = arg(2), bb = arg(3);
  NodeRef la2 = mk(Op::SeqLen, {aa}), lb2 = mk(Op::SeqLen, {bb});
  NodeRef min2 = mk(Op::If, {mk(Op::Le, {la2, lb2}), la2, lb2});
  NodeRef at_diff = mk(Op::Lt, {mk(Op::SeqAt, {aa, dd}), mk(Op::SeqAt, {bb, dd})});
  // no difference below min length: the shorter is an ancestor, hence bigger
  NodeRef prefix_case = mk(Op::Lt, {lb2, la2});
  NodeRef cmp = mk(Op::If, {mk(Op::Lt, {dd, min2}), at_diff, prefix_case});
  NodeRef kbleq = mk(Op::If, {mk(Op::Eq, {a, b}), cst(uint64_t(1)),
                              mk(Op::Iter, {cst(uint64_t(1)), d, cmp})});

  OrderPresentation p;
  p.leq = Program{mk(Op::And, {mem, kbleq})};
  return p;
}

// ---- host-side tree walking ----

// Children s.u for u < width that stay in the tree.
inline std::vector<std::vector<Val>> tree_children(const SequenceTree& t, const std::vector<Val>& s,
                                                   uint64_t width, const EvalContext& ctx = {}) {
  std::vector<std::vector<Val>> out;
  std::vector<Val> child = s;
  child.push_back(Val(uint64_t(0)));
  for (uint64_t u = 0; u < width; u++) {
    child.back() = Val(u);
    if (t.contains(child, ctx)) out.push_back(child);
  }
  return out;
}

// Exhaustive search: no member at depth `depth` with entries < width.
struct TreeDepthCertificate {
  bool dead;          // true if every branch dies before `depth`
  uint64_t depth;
  uint64_t width;
  uint64_t explored;  // members visited
};

inline TreeDepthCertificate certify_tree_death(const SequenceTree& t, uint64_t depth,
                                               uint64_t width, const EvalContext& ctx = {}) {
  TreeDepthCertificate cert{true, depth, width, 0};
  std::vector<std::vector<Val>> frontier{{}};
  if (!t.contains({}, ctx)) return cert;
  cert.explored = 1;
  for (uint64_t d = 0; d < depth; d++) {
    std::vector<std::vector<Val>> next;
    for (const auto& s : frontier)
      for (auto& c : tree_children(t, s, width, ctx)) {
        next.push_back(std::move(c));
        cert.explored++;
      }
    if (next.empty()) return cert;
    frontier = std::move(next);
  }
  cert.dead = false;
  return cert;
}

// Follow a branch downward, taking the least surviving child each step.
inline std::vector<std::vector<Val>> follow_branch(const SequenceTree& t, uint64_t steps,
                                                   uint64_t width, const EvalContext& ctx = {}) {
  std::vector<std::vector<Val>> path;
  std::vector<Val> cur;
  if (!t.contains(cur, ctx)) return path;
  path.push_back(cur);
  for (uint64_t i = 0; i < steps; i++) {
    auto kids = tree_children(t, cur, width, ctx);
    if (kids.empty()) break;
    cur = kids.front();
    path.push_back(cur);
  }
  return path;
}

} // namespace wol
