#pragma once

// The presentation expression language: total programs over naturals, with a
// fixed library of primitive-recursive builtins. Programs are plain trees,
// serialized as s-expressions; evaluation lives in eval.hpp.
//
// Binding forms (minbelow, allbelow, iter) shift the argument frame: inside
// minbelow/allbelow bodies, (arg 0) is the loop counter and outer arguments
// start at (arg 1); inside iter bodies, (arg 0) is the index, (arg 1) the
// accumulator, and outer arguments start at (arg 2).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>
#include <stdexcept>

#include "bignat.hpp"

namespace wol::expr {

enum class Op : uint8_t {
  Arg, Const,
  Add, Sub, Mul, Div, Mod,
  Eq, Lt, Le,
  And, Or, Not, If,
  Pair, Fst, Snd,
  BitLen, Shl, Shr, Pow,
  MinBelow,   // least t < bound with body != 0, else bound
  AllBelow,   // 1 iff body != 0 for all t < bound
  Iter,       // fold t = 0..n-1: acc <- step(t, acc, args...)
  SeqValid, SeqLen, SeqAt,
  SubNum,     // substitute a numeral into a formula code
  IsRefl,     // reflection-instance recognizer over a staged axiom formula
  IsReflAt,   // reflection-instance recognizer over a fixed axiom formula code
  PrfChk,     // Hilbert-style proof check against an axiom recognizer
  StamMem,    // deduction-chain tree membership for a sentence code
  JumpInv1,   // stage-machine comparison, omega-times construction
  JumpInv1S,  // its successor relation
  JumpInv2,   // stage-machine comparison, isomorphic-copy construction
  RegEval,    // registry program application {e}(n)
  GMap,       // notation handle of g(fundseq(x, n)) over a packed presentation
};

struct Node;
using NodeRef = std::shared_ptr<const Node>;

struct Node {
  Op op;
  Val payload;                 // Const value / Arg index
  std::vector<NodeRef> kids;
};

struct Program {
  NodeRef root;
  bool operator==(const Program& o) const;
};

inline NodeRef mk(Op op, std::vector<NodeRef> kids = {}) {
  return std::make_shared<Node>(Node{op, Val(), std::move(kids)});
}
inline NodeRef arg(uint64_t i) {
  return std::make_shared<Node>(Node{Op::Arg, Val(i), {}});
}
inline NodeRef cst(Val v) {
  return std::make_shared<Node>(Node{Op::Const, std::move(v), {}});
}
inline NodeRef cst(uint64_t v) { return cst(Val(v)); }

struct OpInfo { const char* name; int arity; };  // arity -1 = variable

inline const OpInfo& op_info(Op op) {
  static const OpInfo table[] = {
    {"arg", 0}, {"const", 0},
    {"add", 2}, {"sub", 2}, {"mul", 2}, {"div", 2}, {"mod", 2},
    {"eq", 2}, {"lt", 2}, {"le", 2},
    {"and", 2}, {"or", 2}, {"not", 1}, {"if", 3},
    {"pair", 2}, {"fst", 1}, {"snd", 1},
    {"bitlen", 1}, {"shl", 2}, {"shr", 2}, {"pow", 2},
    {"minbelow", 2}, {"allbelow", 2}, {"iter", 3},
    {"seqvalid", 1}, {"seqlen", 1}, {"seqat", 2},
    {"subnum", 3}, {"isrefl", 3}, {"isreflat", 2}, {"prfchk", 3},
    {"stammem", 2},
    {"jumpinv1", 3}, {"jumpinv1s", 3}, {"jumpinv2", 3},
    {"regeval", 2},
    {"gmap", 3},
  };
  return table[static_cast<size_t>(op)];
}

inline constexpr int op_count = static_cast<int>(Op::GMap) + 1;

// ---- structural equality ----

inline bool node_eq(const NodeRef& a, const NodeRef& b) {
  if (a == b) return true;
  if (a->op != b->op || a->kids.size() != b->kids.size()) return false;
  if ((a->op == Op::Arg || a->op == Op::Const) && a->payload != b->payload) return false;
  for (size_t i = 0; i < a->kids.size(); i++)
    if (!node_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool Program::operator==(const Program& o) const { return node_eq(root, o.root); }

// ---- s-expression printing ----

inline void print_node(const NodeRef& n, std::string& out) {
  const OpInfo& info = op_info(n->op);
  if (n->op == Op::Arg || n->op == Op::Const) {
    out += '(';
    out += info.name;
    out += ' ';
    out += n->payload.to_dec();
    out += ')';
    return;
  }
  out += '(';
  out += info.name;
  for (const auto& k : n->kids) {
    out += ' ';
    print_node(k, out);
  }
  out += ')';
}

inline std::string to_sexpr(const Program& p) {
  std::string out;
  print_node(p.root, out);
  return out;
}

// ---- s-expression parsing ----

namespace detail {

struct SexprParser {
  std::string_view src;
  size_t pos = 0;

  void skip_ws() { while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\n' || src[pos] == '\t' || src[pos] == '\r')) pos++; }

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("program parse error at offset " + std::to_string(pos) + ": " + msg);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c) fail(std::string("expected '") + c + "'");
    pos++;
  }

  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && src[pos] != ' ' && src[pos] != '(' && src[pos] != ')' &&
           src[pos] != '\n' && src[pos] != '\t' && src[pos] != '\r')
      pos++;
    if (start == pos) fail("expected token");
    return std::string(src.substr(start, pos - start));
  }

  NodeRef node() {
    expect('(');
    std::string name = word();
    int found = -1;
    for (int i = 0; i < op_count; i++)
      if (name == op_info(static_cast<Op>(i)).name) { found = i; break; }
    if (found < 0) fail("unknown opcode '" + name + "'");
    Op op = static_cast<Op>(found);
    if (op == Op::Arg || op == Op::Const) {
      std::string num = word();
      expect(')');
      return std::make_shared<Node>(Node{op, Val(BigNat::from_dec(num)), {}});
    }
    std::vector<NodeRef> kids;
    int arity = op_info(op).arity;
    for (int i = 0; i < arity; i++) kids.push_back(node());
    expect(')');
    return std::make_shared<Node>(Node{op, Val(), std::move(kids)});
  }
};

} // namespace detail

inline Program parse_program(std::string_view text) {
  detail::SexprParser p{text};
  NodeRef root = p.node();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return Program{root};
}

// ---- argument substitution (program composition) ----

// Shift every free (arg i) up by `by`; binder-local arguments stay untouched.
inline NodeRef shift_free_args(const NodeRef& n, uint64_t by, uint64_t depth = 0) {
  if (by == 0) return n;
  if (n->op == Op::Arg) {
    uint64_t i = n->payload.as_u64();
    return i < depth ? n : arg(i + by);
  }
  if (n->kids.empty()) return n;
  uint64_t bump = (n->op == Op::MinBelow || n->op == Op::AllBelow) ? 1 :
                  (n->op == Op::Iter ? 2 : 0);
  std::vector<NodeRef> kids;
  kids.reserve(n->kids.size());
  for (size_t i = 0; i < n->kids.size(); i++) {
    bool body = bump && i + 1 == n->kids.size();
    kids.push_back(shift_free_args(n->kids[i], by, depth + (body ? bump : 0)));
  }
  return std::make_shared<Node>(Node{n->op, n->payload, std::move(kids)});
}

// Replace (arg i) by repl[i]; args beyond repl map to (arg i - repl.size() + base).
// depth tracks binder frames so loop-local arguments stay untouched.
inline NodeRef subst_args(const NodeRef& n, const std::vector<NodeRef>& repl, uint64_t depth = 0) {
  if (n->op == Op::Arg) {
    uint64_t i = n->payload.as_u64();
    if (i < depth) return n;
    uint64_t outer = i - depth;
    if (outer < repl.size()) return shift_free_args(repl[outer], depth);
    return arg(i - repl.size());
  }
  if (n->kids.empty()) return n;
  uint64_t bump = (n->op == Op::MinBelow || n->op == Op::AllBelow) ? 1 :
                  (n->op == Op::Iter ? 2 : 0);
  std::vector<NodeRef> kids;
  kids.reserve(n->kids.size());
  for (size_t i = 0; i < n->kids.size(); i++) {
    bool body = bump && i + 1 == n->kids.size();
    kids.push_back(subst_args(n->kids[i], repl, depth + (body ? bump : 0)));
  }
  return std::make_shared<Node>(Node{n->op, n->payload, std::move(kids)});
}

// Inline a whole program applied to the given argument expressions.
inline NodeRef apply_program(const Program& p, const std::vector<NodeRef>& args) {
  return subst_args(p.root, args);
}

inline uint64_t fnv_str(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) { h ^= c; h *= 1099511628211ull; }
  return h;
}

inline uint64_t program_hash(const Program& p) { return fnv_str(to_sexpr(p)); }

} // namespace wol::expr
