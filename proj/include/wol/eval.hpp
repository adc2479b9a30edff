#pragma once

// Bounded evaluation: the expression-language interpreter and the
// three-valued formula evaluator, mutually recursive through run-terms.
//
// Evaluation is total under an explicit budget. Exceeding the budget or the
// value-size guard raises FuelExhausted; it is never silently wrong.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bignat.hpp"
#include "expr.hpp"
#include "formula.hpp"
#include "goedel.hpp"
#include "reflection.hpp"

namespace wol {

struct FuelExhausted : std::runtime_error {
  explicit FuelExhausted(const std::string& m) : std::runtime_error(m) {}
};
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

struct EvalLimits {
  uint64_t step_budget = 1ull << 31;
  size_t max_value_bits = 1u << 22;
  uint64_t bounded_iter_cap = 1u << 20;  // exact-iteration cap for bounded quantifiers
};

class Registry;  // progressions.hpp

struct EvalContext {
  EvalLimits limits;
  Registry* registry = nullptr;
  mutable uint64_t steps = 0;

  void tick(uint64_t n = 1) const {
    steps += n;
    if (steps > limits.step_budget)
      throw FuelExhausted("evaluation step budget exceeded");
  }
  void check_size(const Val& v) const {
    if (!v.is_small() && v.bit_length() > limits.max_value_bits)
      throw FuelExhausted("value size limit exceeded");
  }
};

// Extension builtins (deduction-chain membership, stage machines, registry
// application) are implemented next to their subject matter and registered
// here so the interpreter stays a single dispatch loop.
using BuiltinFn = Val (*)(const EvalContext&, const std::vector<Val>&);

inline std::array<BuiltinFn, expr::op_count>& builtin_table() {
  static std::array<BuiltinFn, expr::op_count> table{};
  return table;
}

inline bool register_builtin(expr::Op op, BuiltinFn fn) {
  builtin_table()[static_cast<size_t>(op)] = fn;
  return true;
}

// ---- the expression interpreter ----

namespace detail {

struct Frame {
  const Val* locals;
  size_t nlocals;
  const std::vector<Val>* outer;
  const Frame* parent;

  const Val& at(uint64_t i) const {
    const Frame* f = this;
    while (true) {
      if (i < f->nlocals) return f->locals[i];
      i -= f->nlocals;
      if (f->outer) {
        if (i >= f->outer->size()) throw EvalError("argument index out of range");
        return (*f->outer)[i];
      }
      f = f->parent;
      if (!f) throw EvalError("argument index out of range");
    }
  }
};

inline Val eval_node(const EvalContext& ctx, const expr::NodeRef& n, const Frame& frame);

inline bool truthy(const Val& v) { return !v.is_zero(); }

inline Val square_pair(const Val& i, const Val& j) {
  // <i,j> = (i+j)^2 + i
  Val s = Val::add(i, j);
  return Val::add(Val::mul(s, s), i);
}

inline Val isqrt(const Val& p) {
  if (p.is_small()) {
    uint64_t v = p.small();
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) r--;
    while ((r + 1) * (r + 1) <= v && (r + 1) * (r + 1) > r * r) r++;
    return Val(r);
  }
  BigNat n = p.to_big();
  // bisection on bit length
  BigNat lo(0), hi;
  hi.set_bit(n.bit_length() / 2 + 1);
  while (BigNat::cmp(lo, hi) < 0) {
    BigNat mid = BigNat::shr(BigNat::add(BigNat::add(lo, hi), BigNat(1)), 1);
    if (BigNat::cmp(BigNat::mul(mid, mid), n) <= 0) lo = mid;
    else hi = BigNat::sub(mid, BigNat(1));
  }
  return Val(lo);
}

inline Val pair_fst(const Val& p) {
  Val s = isqrt(p);
  Val i = Val::sub(p, Val::mul(s, s));
  return Val::cmp(i, s) <= 0 ? i : Val(uint64_t(0));
}

inline Val pair_snd(const Val& p) {
  Val s = isqrt(p);
  Val i = Val::sub(p, Val::mul(s, s));
  return Val::cmp(i, s) <= 0 ? Val::sub(s, i) : Val(uint64_t(0));
}

inline Val eval_node(const EvalContext& ctx, const expr::NodeRef& n, const Frame& frame) {
  using expr::Op;
  ctx.tick();
  switch (n->op) {
    case Op::Arg: return frame.at(n->payload.as_u64());
    case Op::Const: return n->payload;
    case Op::Add: {
      Val v = Val::add(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame));
      ctx.check_size(v);
      return v;
    }
    case Op::Sub: return Val::sub(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame));
    case Op::Mul: {
      Val v = Val::mul(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame));
      ctx.check_size(v);
      return v;
    }
    case Op::Div: {
      Val b = eval_node(ctx, n->kids[1], frame);
      if (b.is_zero()) return Val(uint64_t(0));  // total: n/0 = 0
      return Val::div(eval_node(ctx, n->kids[0], frame), b);
    }
    case Op::Mod: {
      Val b = eval_node(ctx, n->kids[1], frame);
      if (b.is_zero()) return eval_node(ctx, n->kids[0], frame);  // total: n mod 0 = n
      return Val::mod(eval_node(ctx, n->kids[0], frame), b);
    }
    case Op::Eq: return Val(uint64_t(eval_node(ctx, n->kids[0], frame) == eval_node(ctx, n->kids[1], frame) ? 1 : 0));
    case Op::Lt: return Val(uint64_t(Val::cmp(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame)) < 0 ? 1 : 0));
    case Op::Le: return Val(uint64_t(Val::cmp(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame)) <= 0 ? 1 : 0));
    case Op::And: {
      if (!truthy(eval_node(ctx, n->kids[0], frame))) return Val(uint64_t(0));
      return Val(uint64_t(truthy(eval_node(ctx, n->kids[1], frame)) ? 1 : 0));
    }
    case Op::Or: {
      if (truthy(eval_node(ctx, n->kids[0], frame))) return Val(uint64_t(1));
      return Val(uint64_t(truthy(eval_node(ctx, n->kids[1], frame)) ? 1 : 0));
    }
    case Op::Not: return Val(uint64_t(truthy(eval_node(ctx, n->kids[0], frame)) ? 0 : 1));
    case Op::If:
      return truthy(eval_node(ctx, n->kids[0], frame)) ? eval_node(ctx, n->kids[1], frame)
                                                       : eval_node(ctx, n->kids[2], frame);
    case Op::Pair: {
      Val v = square_pair(eval_node(ctx, n->kids[0], frame), eval_node(ctx, n->kids[1], frame));
      ctx.check_size(v);
      return v;
    }
    case Op::Fst: return pair_fst(eval_node(ctx, n->kids[0], frame));
    case Op::Snd: return pair_snd(eval_node(ctx, n->kids[0], frame));
    case Op::BitLen: return Val(uint64_t(eval_node(ctx, n->kids[0], frame).bit_length()));
    case Op::Shl: {
      Val a = eval_node(ctx, n->kids[0], frame);
      Val b = eval_node(ctx, n->kids[1], frame);
      if (!b.fits_u64() || b.as_u64() > ctx.limits.max_value_bits)
        throw FuelExhausted("shift exceeds size limit");
      Val v(BigNat::shl(a.to_big(), b.as_u64()));
      ctx.check_size(v);
      return v;
    }
    case Op::Shr: {
      Val a = eval_node(ctx, n->kids[0], frame);
      Val b = eval_node(ctx, n->kids[1], frame);
      if (!b.fits_u64()) return Val(uint64_t(0));
      return Val(BigNat::shr(a.to_big(), b.as_u64()));
    }
    case Op::Pow: {
      Val a = eval_node(ctx, n->kids[0], frame);
      Val b = eval_node(ctx, n->kids[1], frame);
      return Val(BigNat::pow_guarded(a.to_big(), b.to_big(), ctx.limits.max_value_bits));
    }
    case Op::MinBelow: {
      Val bound = eval_node(ctx, n->kids[0], frame);
      Val t(uint64_t(0));
      while (Val::cmp(t, bound) < 0) {
        ctx.tick();
        Frame inner{&t, 1, nullptr, &frame};
        if (truthy(eval_node(ctx, n->kids[1], inner))) return t;
        t = Val::add(t, Val(uint64_t(1)));
      }
      return bound;
    }
    case Op::AllBelow: {
      Val bound = eval_node(ctx, n->kids[0], frame);
      Val t(uint64_t(0));
      while (Val::cmp(t, bound) < 0) {
        ctx.tick();
        Frame inner{&t, 1, nullptr, &frame};
        if (!truthy(eval_node(ctx, n->kids[1], inner))) return Val(uint64_t(0));
        t = Val::add(t, Val(uint64_t(1)));
      }
      return Val(uint64_t(1));
    }
    case Op::Iter: {
      Val count = eval_node(ctx, n->kids[0], frame);
      Val acc = eval_node(ctx, n->kids[1], frame);
      Val t(uint64_t(0));
      while (Val::cmp(t, count) < 0) {
        ctx.tick();
        Val locals[2] = {t, acc};
        Frame inner{locals, 2, nullptr, &frame};
        acc = eval_node(ctx, n->kids[2], inner);
        ctx.check_size(acc);
        t = Val::add(t, Val(uint64_t(1)));
      }
      return acc;
    }
    case Op::SeqValid:
      return Val(uint64_t(seq_valid(eval_node(ctx, n->kids[0], frame).to_big()) ? 1 : 0));
    case Op::SeqLen: {
      try {
        return Val(uint64_t(decode_seq(eval_node(ctx, n->kids[0], frame).to_big()).size()));
      } catch (const CodecError&) {
        return Val(uint64_t(0));
      }
    }
    case Op::SeqAt: {
      try {
        std::vector<Val> s = decode_seq(eval_node(ctx, n->kids[0], frame).to_big());
        Val i = eval_node(ctx, n->kids[1], frame);
        if (!i.fits_u64() || i.as_u64() >= s.size()) return Val(uint64_t(0));
        return s[i.as_u64()];
      } catch (const CodecError&) {
        return Val(uint64_t(0));
      }
    }
    case Op::SubNum: {
      Val c = eval_node(ctx, n->kids[0], frame);
      Val v = eval_node(ctx, n->kids[1], frame);
      Val x = eval_node(ctx, n->kids[2], frame);
      try {
        Formula f = goedel_decode(c.to_big());
        Formula sub = subst(f, v.as_u64(), t_num(x));
        Val out(goedel_encode(sub));
        ctx.check_size(out);
        return out;
      } catch (const CodecError&) {
        return Val(uint64_t(0));
      }
    }
    case Op::IsRefl: {
      Val w = eval_node(ctx, n->kids[0], frame);
      Val z = eval_node(ctx, n->kids[1], frame);
      Val y = eval_node(ctx, n->kids[2], frame);
      try {
        Formula d = goedel_decode(w.to_big());
        // convention: variable 0 is the stage, variable 1 the axiom
        Formula staged = subst(d, 0, t_num(z));
        return Val(uint64_t(is_reflection_instance_over(staged, y.to_big()) ? 1 : 0));
      } catch (const CodecError&) {
        return Val(uint64_t(0));
      } catch (const std::invalid_argument&) {
        return Val(uint64_t(0));
      }
    }
    case Op::IsReflAt: {
      Val rc = eval_node(ctx, n->kids[0], frame);
      Val y = eval_node(ctx, n->kids[1], frame);
      try {
        Formula rec = goedel_decode(rc.to_big());
        return Val(uint64_t(is_reflection_instance_over(rec, y.to_big()) ? 1 : 0));
      } catch (const CodecError&) {
        return Val(uint64_t(0));
      } catch (const std::invalid_argument&) {
        return Val(uint64_t(0));
      }
    }
    case Op::PrfChk: {
      Val ax = eval_node(ctx, n->kids[0], frame);
      Val p = eval_node(ctx, n->kids[1], frame);
      Val x = eval_node(ctx, n->kids[2], frame);
      Val proof_check(const EvalContext&, const Val&, const Val&, const Val&);
      return proof_check(ctx, ax, p, x);
    }
    default: {
      BuiltinFn fn = builtin_table()[static_cast<size_t>(n->op)];
      if (!fn) throw EvalError(std::string("opcode '") + expr::op_info(n->op).name +
                               "' has no registered implementation");
      std::vector<Val> args;
      args.reserve(n->kids.size());
      for (const auto& k : n->kids) args.push_back(eval_node(ctx, k, frame));
      return fn(ctx, args);
    }
  }
}

} // namespace detail

inline Val eval_program(const EvalContext& ctx, const expr::Program& p, const std::vector<Val>& args) {
  detail::Frame frame{nullptr, 0, &args, nullptr};
  return detail::eval_node(ctx, p.root, frame);
}

// ---- the formula evaluator ----

enum class Truth : uint8_t { False, True, Unknown };

struct TruthVerdict {
  Truth truth;
  uint64_t fuel;
  bool is_true() const { return truth == Truth::True; }
  bool is_false() const { return truth == Truth::False; }
  bool is_unknown() const { return truth == Truth::Unknown; }
};

struct FreeVariableError : std::runtime_error {
  explicit FreeVariableError(const std::string& m) : std::runtime_error(m) {}
};
struct SkolemSymbolError : std::runtime_error {
  explicit SkolemSymbolError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

struct Env {
  uint64_t var;
  std::optional<Val> val;  // nullopt = value deliberately unknown
  const Env* parent = nullptr;

  static const std::optional<Val>* find(const Env* env, uint64_t v) {
    for (const Env* e = env; e; e = e->parent)
      if (e->var == v) return &e->val;
    return nullptr;
  }
};

inline std::optional<Val> eval_term(const EvalContext& ctx, const Term& t, const Env* env) {
  ctx.tick();
  switch (t->kind) {
    case TermKind::Var: {
      const std::optional<Val>* v = Env::find(env, t->var);
      if (!v) throw FreeVariableError("unbound variable x" + std::to_string(t->var));
      return *v;
    }
    case TermKind::Num: return t->num;
    case TermKind::Succ: {
      auto v = eval_term(ctx, t->kids[0], env);
      if (!v) return std::nullopt;
      return Val::add(*v, Val(uint64_t(1)));
    }
    case TermKind::Add:
    case TermKind::Mul: {
      auto a = eval_term(ctx, t->kids[0], env);
      auto b = eval_term(ctx, t->kids[1], env);
      if (!a || !b) return std::nullopt;
      Val v = t->kind == TermKind::Add ? Val::add(*a, *b) : Val::mul(*a, *b);
      ctx.check_size(v);
      return v;
    }
    case TermKind::Skolem:
      throw SkolemSymbolError("cannot evaluate uninterpreted Skolem symbol #" + std::to_string(t->var));
    case TermKind::Run: {
      std::vector<Val> args;
      args.reserve(t->kids.size());
      for (const auto& k : t->kids) {
        auto v = eval_term(ctx, k, env);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      return eval_program(ctx, t->prog, args);
    }
  }
  return std::nullopt;
}

inline Truth eval_formula(const EvalContext& ctx, const Formula& f, const Env* env, uint64_t fuel);

// exists v (v < bound and body) / forall v (not (v < bound) or body)
struct BoundedPattern {
  Val bound;
  Formula rest;
};

inline std::optional<BoundedPattern> match_bounded(const EvalContext& ctx, const Formula& q,
                                                   const Env* env) {
  bool ex = q->kind == FormulaKind::Exists;
  const Formula& body = q->left;
  FormulaKind conn = ex ? FormulaKind::And : FormulaKind::Or;
  if (body->kind != conn) return std::nullopt;
  const Formula& guard = body->left;
  if (guard->kind != FormulaKind::Lit || guard->atom != AtomKind::Lt) return std::nullopt;
  if (guard->neg != !ex) return std::nullopt;  // exists wants v < t, forall wants not(v < t)
  if (guard->lhs->kind != TermKind::Var || guard->lhs->var != q->var) return std::nullopt;
  std::set<uint64_t> bound_vars;
  term_vars(guard->rhs, bound_vars);
  if (bound_vars.count(q->var)) return std::nullopt;
  auto bound = eval_term(ctx, guard->rhs, env);
  if (!bound) return std::nullopt;
  return BoundedPattern{*bound, body->right};
}

inline Truth eval_formula(const EvalContext& ctx, const Formula& f, const Env* env, uint64_t fuel) {
  ctx.tick();
  switch (f->kind) {
    case FormulaKind::Lit: {
      auto l = eval_term(ctx, f->lhs, env);
      auto r = eval_term(ctx, f->rhs, env);
      if (!l || !r) {
        // identical terms under one environment are equal whatever the
        // unknown values are
        if (term_eq(f->lhs, f->rhs)) {
          bool v = f->atom == AtomKind::Eq;
          if (f->neg) v = !v;
          return v ? Truth::True : Truth::False;
        }
        return Truth::Unknown;
      }
      bool v = f->atom == AtomKind::Eq ? (*l == *r) : (Val::cmp(*l, *r) < 0);
      if (f->neg) v = !v;
      return v ? Truth::True : Truth::False;
    }
    case FormulaKind::And: {
      Truth a = eval_formula(ctx, f->left, env, fuel);
      if (a == Truth::False) return Truth::False;
      Truth b = eval_formula(ctx, f->right, env, fuel);
      if (b == Truth::False) return Truth::False;
      if (a == Truth::True && b == Truth::True) return Truth::True;
      return Truth::Unknown;
    }
    case FormulaKind::Or: {
      Truth a = eval_formula(ctx, f->left, env, fuel);
      if (a == Truth::True) return Truth::True;
      Truth b = eval_formula(ctx, f->right, env, fuel);
      if (b == Truth::True) return Truth::True;
      if (a == Truth::False && b == Truth::False) return Truth::False;
      return Truth::Unknown;
    }
    case FormulaKind::Exists: {
      auto pat = match_bounded(ctx, f, env);
      if (pat && pat->bound.fits_u64() && pat->bound.as_u64() <= ctx.limits.bounded_iter_cap) {
        bool unknown = false;
        for (uint64_t w = 0; w < pat->bound.as_u64(); w++) {
          Env e{f->var, Val(w), env};
          Truth t = eval_formula(ctx, pat->rest, &e, fuel);
          if (t == Truth::True) return Truth::True;
          if (t == Truth::Unknown) unknown = true;
        }
        return unknown ? Truth::Unknown : Truth::False;
      }
      for (uint64_t w = 0; w < fuel; w++) {
        Env e{f->var, Val(w), env};
        if (eval_formula(ctx, f->left, &e, fuel) == Truth::True) return Truth::True;
      }
      // witness-independent falsity
      Env poison{f->var, std::nullopt, env};
      if (eval_formula(ctx, f->left, &poison, fuel) == Truth::False) return Truth::False;
      return Truth::Unknown;
    }
    case FormulaKind::Forall: {
      auto pat = match_bounded(ctx, f, env);
      if (pat && pat->bound.fits_u64() && pat->bound.as_u64() <= ctx.limits.bounded_iter_cap) {
        bool unknown = false;
        for (uint64_t w = 0; w < pat->bound.as_u64(); w++) {
          Env e{f->var, Val(w), env};
          Truth t = eval_formula(ctx, pat->rest, &e, fuel);
          if (t == Truth::False) return Truth::False;
          if (t == Truth::Unknown) unknown = true;
        }
        return unknown ? Truth::Unknown : Truth::True;
      }
      for (uint64_t w = 0; w < fuel; w++) {
        Env e{f->var, Val(w), env};
        if (eval_formula(ctx, f->left, &e, fuel) == Truth::False) return Truth::False;
      }
      Env poison{f->var, std::nullopt, env};
      if (eval_formula(ctx, f->left, &poison, fuel) == Truth::True) return Truth::True;
      return Truth::Unknown;
    }
  }
  return Truth::Unknown;
}

inline bool has_skolem(const Term& t) {
  if (t->kind == TermKind::Skolem) return true;
  for (const auto& k : t->kids)
    if (has_skolem(k)) return true;
  return false;
}

inline bool has_skolem(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Lit: return has_skolem(f->lhs) || has_skolem(f->rhs);
    case FormulaKind::And:
    case FormulaKind::Or: return has_skolem(f->left) || has_skolem(f->right);
    case FormulaKind::Exists:
    case FormulaKind::Forall: return has_skolem(f->left);
  }
  return false;
}

} // namespace detail

inline TruthVerdict evaluate(const Formula& f, uint64_t fuel, const EvalContext& ctx = {}) {
  if (!free_vars(f).empty())
    throw FreeVariableError("evaluate: formula is not a sentence");
  if (detail::has_skolem(f))
    throw SkolemSymbolError("evaluate: formula contains uninterpreted Skolem symbols");
  return TruthVerdict{detail::eval_formula(ctx, f, nullptr, fuel), fuel};
}

// Evaluation for formulas whose free variables are supplied explicitly.
inline Truth evaluate_at(const Formula& f, const std::vector<std::pair<uint64_t, Val>>& binding,
                         uint64_t fuel, const EvalContext& ctx = {}) {
  std::vector<detail::Env> envs;
  envs.reserve(binding.size());
  const detail::Env* head = nullptr;
  for (const auto& [v, val] : binding) {
    envs.push_back(detail::Env{v, val, head});
    head = &envs.back();
  }
  return detail::eval_formula(ctx, f, head, fuel);
}

// ---- Hilbert-style proof checking (docs/calculus.md) ----
//
// A proof is a sequence (f0, j0, f1, j1, ...). Justifications:
//   0                  propositional tautology
//   <1, <a,b>>         modus ponens: line b is (neg A or B) for line a = A
//   <2, w>             premise: the recognizer's matrix holds of the line's
//                      code with w witnessing its leading existential
//   <3, <a, m>>        universal instantiation of line a at numeral m

namespace detail {

inline bool propositional_tautology(const Formula& f) {
  std::vector<BigNat> atoms;
  std::function<bool(const Formula&)> collect = [&](const Formula& g) -> bool {
    switch (g->kind) {
      case FormulaKind::Lit: {
        BigNat key = goedel_encode(f_lit(g->atom, false, g->lhs, g->rhs));
        for (const auto& a : atoms)
          if (a == key) return true;
        atoms.push_back(key);
        return atoms.size() <= 16;
      }
      case FormulaKind::And:
      case FormulaKind::Or:
        return collect(g->left) && collect(g->right);
      default:
        return false;  // quantifiers: not propositional
    }
  };
  if (!collect(f)) return false;
  std::function<bool(const Formula&, uint32_t)> holds = [&](const Formula& g, uint32_t mask) -> bool {
    switch (g->kind) {
      case FormulaKind::Lit: {
        BigNat key = goedel_encode(f_lit(g->atom, false, g->lhs, g->rhs));
        size_t idx = 0;
        while (!(atoms[idx] == key)) idx++;
        bool v = (mask >> idx) & 1;
        return g->neg ? !v : v;
      }
      case FormulaKind::And: return holds(g->left, mask) && holds(g->right, mask);
      case FormulaKind::Or: return holds(g->left, mask) || holds(g->right, mask);
      default: return false;
    }
  };
  for (uint32_t mask = 0; mask < (1u << atoms.size()); mask++)
    if (!holds(f, mask)) return false;
  return true;
}

inline Val proof_check(const EvalContext& ctx, const Val& ax, const Val& p, const Val& x) {
  try {
    Formula recognizer = goedel_decode(ax.to_big());
    uint64_t yvar = the_free_var(recognizer, "proof_check recognizer");
    // strip a single leading existential if present
    std::optional<uint64_t> witness_var;
    Formula matrix = recognizer;
    if (recognizer->kind == FormulaKind::Exists) {
      witness_var = recognizer->var;
      matrix = recognizer->left;
    }
    std::vector<Val> items = decode_seq(p.to_big());
    if (items.size() < 2 || items.size() % 2 != 0) return Val(uint64_t(0));
    std::vector<Formula> lines;
    for (size_t i = 0; i + 1 < items.size(); i += 2) {
      ctx.tick(16);
      Formula line = goedel_decode(items[i].to_big());
      const Val& just = items[i + 1];
      if (just.is_zero()) {
        if (!propositional_tautology(line)) return Val(uint64_t(0));
      } else {
        Val kind = pair_fst(just), payload = pair_snd(just);
        if (kind == Val(uint64_t(1))) {
          uint64_t a = pair_fst(payload).as_u64(), b = pair_snd(payload).as_u64();
          if (a >= lines.size() || b >= lines.size()) return Val(uint64_t(0));
          const Formula& impl = lines[b];
          if (impl->kind != FormulaKind::Or) return Val(uint64_t(0));
          if (!formula_eq(impl->left, negate(lines[a]))) return Val(uint64_t(0));
          if (!formula_eq(impl->right, line)) return Val(uint64_t(0));
        } else if (kind == Val(uint64_t(2))) {
          std::vector<std::pair<uint64_t, Val>> binding;
          binding.emplace_back(yvar, Val(items[i]));
          if (witness_var) binding.emplace_back(*witness_var, payload);
          Truth t = evaluate_at(matrix, binding, 0, ctx);
          if (t != Truth::True) return Val(uint64_t(0));
        } else if (kind == Val(uint64_t(3))) {
          uint64_t a = pair_fst(payload).as_u64();
          Val m = pair_snd(payload);
          if (a >= lines.size() || lines[a]->kind != FormulaKind::Forall) return Val(uint64_t(0));
          if (!formula_eq(line, subst(lines[a]->left, lines[a]->var, t_num(m)))) return Val(uint64_t(0));
        } else {
          return Val(uint64_t(0));
        }
      }
      lines.push_back(line);
    }
    if (items[items.size() - 2] != x) return Val(uint64_t(0));
    return Val(uint64_t(1));
  } catch (const CodecError&) {
    return Val(uint64_t(0));
  } catch (const std::invalid_argument&) {
    return Val(uint64_t(0));
  } catch (const FreeVariableError&) {
    return Val(uint64_t(0));
  }
}

} // namespace detail

inline Val proof_check(const EvalContext& ctx, const Val& ax, const Val& p, const Val& x) {
  return detail::proof_check(ctx, ax, p, x);
}

} // namespace wol
