#pragma once

// Goedel numbering: length-prefixed base-2 coding of syntax trees.
//
// A code is the bit stream of the tree prefixed by a single 1 (framing bit),
// read as a natural number MSB-first. Naturals inside the stream use Elias
// gamma on n+1. Formula constructor tags (4 bits each):
//   0 Var  1 Num  2 Succ  3 Add  4 Mul  5 Skolem  6 Run
//   7 Eq   8 Lt   9 And  10 Or  11 Exists  12 Forall
// Eq/Lt carry one negation bit. Programs embedded in Run nodes use 6-bit
// opcode tags in the order of the opcode table (docs/formats.md).
//
// Sequence codes use the same scheme: gamma(length) then gamma of each entry.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bignat.hpp"
#include "expr.hpp"
#include "formula.hpp"

namespace wol {

struct CodecError : std::runtime_error {
  explicit CodecError(const std::string& m) : std::runtime_error(m) {}
};

namespace bits {

struct Writer {
  std::vector<bool> data;
  void bit(bool b) { data.push_back(b); }
  void fixed(uint64_t v, int width) {
    for (int i = width - 1; i >= 0; i--) data.push_back((v >> i) & 1);
  }
  void gamma(const Val& v) {
    BigNat n = BigNat::add(v.to_big(), BigNat(1));
    size_t len = n.bit_length();
    for (size_t i = 1; i < len; i++) data.push_back(false);
    for (size_t i = len; i-- > 0;) data.push_back(n.bit(i));
  }
  void gamma(uint64_t v) { gamma(Val(v)); }
  BigNat finish() const {
    BigNat out;
    out.set_bit(data.size());
    for (size_t i = 0; i < data.size(); i++)
      if (data[i]) out.set_bit(data.size() - 1 - i);
    return out;
  }
};

struct Reader {
  std::vector<bool> data;
  size_t pos = 0;

  explicit Reader(const BigNat& code) {
    size_t len = code.bit_length();
    if (len == 0) throw CodecError("not a code: zero");
    for (size_t i = len - 1; i-- > 0;) data.push_back(code.bit(i));
  }
  bool bit() {
    if (pos >= data.size()) throw CodecError("truncated code");
    return data[pos++];
  }
  uint64_t fixed(int width) {
    uint64_t v = 0;
    for (int i = 0; i < width; i++) v = (v << 1) | (bit() ? 1 : 0);
    return v;
  }
  Val gamma() {
    size_t zeros = 0;
    while (!bit()) {
      zeros++;
      if (zeros > 1u << 26) throw CodecError("absurd gamma length");
    }
    BigNat n;
    n.set_bit(zeros);
    for (size_t i = zeros; i-- > 0;)
      if (bit()) n.set_bit(i);
    return Val(BigNat::sub(n, BigNat(1)));
  }
  bool done() const { return pos == data.size(); }
};

} // namespace bits

// ---- program coding ----

namespace detail {

inline void encode_prog(const expr::NodeRef& n, bits::Writer& w) {
  w.fixed(static_cast<uint64_t>(n->op), 6);
  if (n->op == expr::Op::Arg || n->op == expr::Op::Const) {
    w.gamma(n->payload);
    return;
  }
  for (const auto& k : n->kids) encode_prog(k, w);
}

inline expr::NodeRef decode_prog(bits::Reader& r, int depth = 0) {
  if (depth > 4096) throw CodecError("program nesting too deep");
  uint64_t tag = r.fixed(6);
  if (tag >= static_cast<uint64_t>(expr::op_count)) throw CodecError("bad opcode tag");
  expr::Op op = static_cast<expr::Op>(tag);
  if (op == expr::Op::Arg || op == expr::Op::Const)
    return std::make_shared<expr::Node>(expr::Node{op, r.gamma(), {}});
  std::vector<expr::NodeRef> kids;
  for (int i = 0; i < expr::op_info(op).arity; i++) kids.push_back(decode_prog(r, depth + 1));
  return std::make_shared<expr::Node>(expr::Node{op, Val(), std::move(kids)});
}

// ---- term/formula coding ----

inline void encode_term(const Term& t, bits::Writer& w) {
  switch (t->kind) {
    case TermKind::Var: w.fixed(0, 4); w.gamma(t->var); break;
    case TermKind::Num: w.fixed(1, 4); w.gamma(t->num); break;
    case TermKind::Succ: w.fixed(2, 4); encode_term(t->kids[0], w); break;
    case TermKind::Add: w.fixed(3, 4); encode_term(t->kids[0], w); encode_term(t->kids[1], w); break;
    case TermKind::Mul: w.fixed(4, 4); encode_term(t->kids[0], w); encode_term(t->kids[1], w); break;
    case TermKind::Skolem:
      w.fixed(5, 4);
      w.gamma(t->var);
      w.gamma(t->kids.size());
      for (const auto& k : t->kids) encode_term(k, w);
      break;
    case TermKind::Run:
      w.fixed(6, 4);
      w.gamma(t->kids.size());
      for (const auto& k : t->kids) encode_term(k, w);
      encode_prog(t->prog.root, w);
      break;
  }
}

inline void encode_formula(const Formula& f, bits::Writer& w) {
  switch (f->kind) {
    case FormulaKind::Lit:
      w.fixed(f->atom == AtomKind::Eq ? 7 : 8, 4);
      w.bit(f->neg);
      encode_term(f->lhs, w);
      encode_term(f->rhs, w);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      w.fixed(f->kind == FormulaKind::And ? 9 : 10, 4);
      encode_formula(f->left, w);
      encode_formula(f->right, w);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      w.fixed(f->kind == FormulaKind::Exists ? 11 : 12, 4);
      w.gamma(f->var);
      encode_formula(f->left, w);
      break;
  }
}

inline Term decode_term(bits::Reader& r, int depth);

inline Term decode_term_tagged(uint64_t tag, bits::Reader& r, int depth) {
  if (depth > 4096) throw CodecError("formula nesting too deep");
  switch (tag) {
    case 0: return t_var(r.gamma().as_u64());
    case 1: return t_num(r.gamma());
    case 2: return t_succ(decode_term(r, depth + 1));
    case 3: {
      Term a = decode_term(r, depth + 1), b = decode_term(r, depth + 1);
      return t_add(a, b);
    }
    case 4: {
      Term a = decode_term(r, depth + 1), b = decode_term(r, depth + 1);
      return t_mul(a, b);
    }
    case 5: {
      uint64_t sym = r.gamma().as_u64();
      uint64_t argc = r.gamma().as_u64();
      if (argc > 4096) throw CodecError("absurd arity");
      std::vector<Term> args;
      for (uint64_t i = 0; i < argc; i++) args.push_back(decode_term(r, depth + 1));
      return t_skolem(sym, std::move(args));
    }
    case 6: {
      uint64_t argc = r.gamma().as_u64();
      if (argc > 4096) throw CodecError("absurd arity");
      std::vector<Term> args;
      for (uint64_t i = 0; i < argc; i++) args.push_back(decode_term(r, depth + 1));
      return t_run(expr::Program{decode_prog(r)}, std::move(args));
    }
    default: throw CodecError("bad term tag");
  }
}

inline Term decode_term(bits::Reader& r, int depth) {
  return decode_term_tagged(r.fixed(4), r, depth);
}

inline Formula decode_formula(bits::Reader& r, int depth = 0) {
  if (depth > 4096) throw CodecError("formula nesting too deep");
  uint64_t tag = r.fixed(4);
  switch (tag) {
    case 7:
    case 8: {
      bool neg = r.bit();
      Term l = decode_term(r, depth + 1);
      Term rr = decode_term(r, depth + 1);
      return f_lit(tag == 7 ? AtomKind::Eq : AtomKind::Lt, neg, l, rr);
    }
    case 9:
    case 10: {
      Formula a = decode_formula(r, depth + 1);
      Formula b = decode_formula(r, depth + 1);
      return tag == 9 ? f_and(a, b) : f_or(a, b);
    }
    case 11:
    case 12: {
      uint64_t v = r.gamma().as_u64();
      Formula body = decode_formula(r, depth + 1);
      return tag == 11 ? f_exists(v, body) : f_forall(v, body);
    }
    default: throw CodecError("bad formula tag");
  }
}

} // namespace detail

inline BigNat goedel_encode(const Formula& f) {
  bits::Writer w;
  detail::encode_formula(f, w);
  return w.finish();
}

inline Formula goedel_decode(const BigNat& code) {
  bits::Reader r(code);
  Formula f = detail::decode_formula(r);
  if (!r.done()) throw CodecError("trailing bits in formula code");
  return f;
}

inline BigNat encode_program_bits(const expr::Program& p) {
  bits::Writer w;
  detail::encode_prog(p.root, w);
  return w.finish();
}

inline expr::Program decode_program_bits(const BigNat& code) {
  bits::Reader r(code);
  expr::NodeRef n = detail::decode_prog(r);
  if (!r.done()) throw CodecError("trailing bits in program code");
  return expr::Program{n};
}

// ---- finite sequence coding ----

inline BigNat encode_seq(const std::vector<Val>& s) {
  bits::Writer w;
  w.gamma(s.size());
  for (const auto& v : s) w.gamma(v);
  return w.finish();
}

inline std::vector<Val> decode_seq(const BigNat& code) {
  bits::Reader r(code);
  uint64_t k = r.gamma().as_u64();
  if (k > (1u << 24)) throw CodecError("absurd sequence length");
  std::vector<Val> out;
  out.reserve(k);
  for (uint64_t i = 0; i < k; i++) out.push_back(r.gamma());
  if (!r.done()) throw CodecError("trailing bits in sequence code");
  return out;
}

inline bool seq_valid(const BigNat& code) {
  try {
    decode_seq(code);
    return true;
  } catch (const CodecError&) {
    return false;
  }
}

// ---- the Diagonal Lemma ----
//
// Given F with distinguished free variable v, build G(w) = F[v := subnum(w, wid, w)]
// with w fresh, and return delta = G[w := g] for g the code of G. The subnum
// term then evaluates to the code of delta itself.

inline expr::Program subnum_program() {
  using namespace expr;
  return Program{mk(Op::SubNum, {arg(0), arg(1), arg(2)})};
}

// single-free-variable convenience form; rejects ambiguous inputs
inline Formula diagonal_fixed_point(const Formula& f);

inline Formula diagonal_fixed_point(const Formula& f, uint64_t distinguished) {
  std::set<uint64_t> fv = free_vars(f);
  if (!fv.count(distinguished))
    throw std::invalid_argument("diagonal_fixed_point: variable not free in formula");
  uint64_t w = max_var_id(f);
  Term self = t_run(subnum_program(), {t_var(w), t_num(w), t_var(w)});
  Formula g = subst(f, distinguished, self);
  BigNat gcode = goedel_encode(g);
  return subst(g, w, t_num(Val(gcode)));
}

inline Formula diagonal_fixed_point(const Formula& f) {
  std::set<uint64_t> fv = free_vars(f);
  if (fv.size() != 1)
    throw std::invalid_argument("diagonal_fixed_point: expected exactly one distinguished variable, got " +
                                std::to_string(fv.size()));
  return diagonal_fixed_point(f, *fv.begin());
}

} // namespace wol
