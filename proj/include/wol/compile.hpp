#pragma once

// Compilation of formulas into the expression language.
//
// compile_decidable: closed-or-parameterized formulas whose quantifiers all
// match the bounded guard patterns; yields a 0/1 program.
//
// compile_skolem_matrix: quantifier-free matrices with the single merged
// Skolem symbol; yields a strict three-valued program (0 false, 1 true,
// 2 undefined) over (x, seq) where seq supplies the Skolem values.

#include <map>
#include <stdexcept>
#include <vector>

#include "expr.hpp"
#include "formula.hpp"

namespace wol {

struct CompileError : std::runtime_error {
  explicit CompileError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

using expr::NodeRef;
using expr::Op;

struct CompileEnv {
  // innermost binder first; slot i of the active frame
  std::vector<uint64_t> binders;
  // formula variable -> top-level argument index
  const std::map<uint64_t, uint64_t>* args;

  NodeRef slot(uint64_t var) const {
    for (size_t i = 0; i < binders.size(); i++)
      if (binders[i] == var) return expr::arg(i);
    auto it = args->find(var);
    if (it == args->end()) throw CompileError("compile: variable x" + std::to_string(var) + " has no argument slot");
    return expr::arg(binders.size() + it->second);
  }

  CompileEnv push(uint64_t var, uint64_t width) const {
    CompileEnv e = *this;
    std::vector<uint64_t> nb;
    nb.push_back(var);
    for (size_t i = 1; i < width; i++) nb.push_back(UINT64_MAX);  // occupied, unnamed
    for (uint64_t b : binders) nb.push_back(b);
    e.binders = std::move(nb);
    return e;
  }
};

inline NodeRef compile_term_total(const Term& t, const CompileEnv& env) {
  switch (t->kind) {
    case TermKind::Var: return env.slot(t->var);
    case TermKind::Num: return expr::cst(t->num);
    case TermKind::Succ:
      return expr::mk(Op::Add, {compile_term_total(t->kids[0], env), expr::cst(uint64_t(1))});
    case TermKind::Add:
    case TermKind::Mul:
      return expr::mk(t->kind == TermKind::Add ? Op::Add : Op::Mul,
                      {compile_term_total(t->kids[0], env), compile_term_total(t->kids[1], env)});
    case TermKind::Skolem:
      throw CompileError("compile_decidable: Skolem symbol in total context");
    case TermKind::Run: {
      std::vector<NodeRef> args;
      args.reserve(t->kids.size());
      for (const auto& k : t->kids) args.push_back(compile_term_total(k, env));
      return expr::apply_program(t->prog, args);
    }
  }
  throw CompileError("compile: unreachable term kind");
}

// exists v (v < t and body) / forall v (not (v < t) or body), t free of v
inline const FormulaNode* bounded_guard(const Formula& q) {
  bool ex = q->kind == FormulaKind::Exists;
  const Formula& body = q->left;
  if (body->kind != (ex ? FormulaKind::And : FormulaKind::Or)) return nullptr;
  const Formula& guard = body->left;
  if (guard->kind != FormulaKind::Lit || guard->atom != AtomKind::Lt) return nullptr;
  if (guard->neg != !ex) return nullptr;
  if (guard->lhs->kind != TermKind::Var || guard->lhs->var != q->var) return nullptr;
  std::set<uint64_t> vs;
  term_vars(guard->rhs, vs);
  if (vs.count(q->var)) return nullptr;
  return body.get();
}

inline NodeRef compile_decidable_rec(const Formula& f, const CompileEnv& env) {
  switch (f->kind) {
    case FormulaKind::Lit: {
      NodeRef l = compile_term_total(f->lhs, env);
      NodeRef r = compile_term_total(f->rhs, env);
      NodeRef cmp = expr::mk(f->atom == AtomKind::Eq ? Op::Eq : Op::Lt, {l, r});
      return f->neg ? expr::mk(Op::Not, {cmp}) : cmp;
    }
    case FormulaKind::And:
      return expr::mk(Op::And, {compile_decidable_rec(f->left, env), compile_decidable_rec(f->right, env)});
    case FormulaKind::Or:
      return expr::mk(Op::Or, {compile_decidable_rec(f->left, env), compile_decidable_rec(f->right, env)});
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const FormulaNode* body = bounded_guard(f);
      if (!body)
        throw CompileError("compile_decidable: unbounded quantifier");
      NodeRef bound = compile_term_total(body->left->rhs, env);
      CompileEnv inner = env.push(f->var, 1);
      NodeRef matrix = compile_decidable_rec(body->right, inner);
      if (f->kind == FormulaKind::Exists) {
        // witness exists below the bound
        NodeRef mb = expr::mk(Op::MinBelow, {bound, matrix});
        NodeRef bound2 = compile_term_total(body->left->rhs, env);
        return expr::mk(Op::Lt, {mb, bound2});
      }
      return expr::mk(Op::AllBelow, {bound, matrix});
    }
  }
  throw CompileError("compile: unreachable formula kind");
}

} // namespace detail

// args maps each free variable of f to its argument position.
inline expr::Program compile_decidable(const Formula& f, const std::map<uint64_t, uint64_t>& args) {
  detail::CompileEnv env{{}, &args};
  return expr::Program{detail::compile_decidable_rec(f, env)};
}

// ---- three-valued Skolem-matrix compilation ----

namespace detail {

struct TriTerm {
  NodeRef def;  // 0/1
  NodeRef val;
};

// seq sits at a fixed argument slot; Skolem applications read seq[t + shift].
struct SkolemCompile {
  uint64_t x_var;
  bool has_x;
  uint64_t seq_arg;   // top-level argument index of the sequence
  uint64_t x_arg;     // top-level argument index of x (if has_x)
  uint64_t shift;     // 0: f(i) = seq[i], 1: f(i) = seq[i+1]

  NodeRef seq(const CompileEnv& env) const { return expr::arg(env.binders.size() + seq_arg); }

  TriTerm term(const Term& t, const CompileEnv& env) const {
    switch (t->kind) {
      case TermKind::Var:
        if (!has_x || t->var != x_var)
          throw CompileError("skolem matrix: unexpected free variable x" + std::to_string(t->var));
        return {expr::cst(uint64_t(1)), expr::arg(env.binders.size() + x_arg)};
      case TermKind::Num:
        return {expr::cst(uint64_t(1)), expr::cst(t->num)};
      case TermKind::Succ: {
        TriTerm a = term(t->kids[0], env);
        return {a.def, expr::mk(Op::Add, {a.val, expr::cst(uint64_t(1))})};
      }
      case TermKind::Add:
      case TermKind::Mul: {
        TriTerm a = term(t->kids[0], env);
        TriTerm b = term(t->kids[1], env);
        return {expr::mk(Op::And, {a.def, b.def}),
                expr::mk(t->kind == TermKind::Add ? Op::Add : Op::Mul, {a.val, b.val})};
      }
      case TermKind::Skolem: {
        if (t->kids.size() != 1)
          throw CompileError("skolem matrix: merged symbol must be unary");
        TriTerm a = term(t->kids[0], env);
        NodeRef idx = expr::mk(Op::Add, {a.val, expr::cst(shift)});
        NodeRef in_range = expr::mk(Op::Lt, {idx, expr::mk(Op::SeqLen, {seq(env)})});
        return {expr::mk(Op::And, {a.def, in_range}),
                expr::mk(Op::SeqAt, {seq(env), expr::mk(Op::Add, {a.val, expr::cst(shift)})})};
      }
      case TermKind::Run: {
        NodeRef def = expr::cst(uint64_t(1));
        std::vector<NodeRef> vals;
        for (const auto& k : t->kids) {
          TriTerm a = term(k, env);
          def = expr::mk(Op::And, {def, a.def});
          vals.push_back(a.val);
        }
        return {def, expr::apply_program(t->prog, vals)};
      }
    }
    throw CompileError("skolem matrix: unreachable term kind");
  }

  // let v = a in body(arg 1 = v, outer shifted by 2)
  static NodeRef let1(NodeRef a, NodeRef body) {
    return expr::mk(Op::Iter, {expr::cst(uint64_t(1)), std::move(a), std::move(body)});
  }

  NodeRef formula(const Formula& f, const CompileEnv& env) const {
    switch (f->kind) {
      case FormulaKind::Lit: {
        TriTerm l = term(f->lhs, env);
        TriTerm r = term(f->rhs, env);
        NodeRef cmp = expr::mk(f->atom == AtomKind::Eq ? Op::Eq : Op::Lt, {l.val, r.val});
        if (f->neg) cmp = expr::mk(Op::Not, {cmp});
        return expr::mk(Op::If, {expr::mk(Op::And, {l.def, r.def}), cmp, expr::cst(uint64_t(2))});
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        bool conj = f->kind == FormulaKind::And;
        NodeRef a = formula(f->left, env);
        CompileEnv e1 = env.push(UINT64_MAX, 2);
        NodeRef b = formula(f->right, e1);
        // strict: undefined wins over any defined value
        NodeRef av = expr::arg(3), bv = expr::arg(1);
        NodeRef undef = expr::mk(Op::Or, {expr::mk(Op::Eq, {av, expr::cst(uint64_t(2))}),
                                          expr::mk(Op::Eq, {bv, expr::cst(uint64_t(2))})});
        NodeRef comb = expr::mk(conj ? Op::And : Op::Or, {expr::arg(3), expr::arg(1)});
        NodeRef inner = let1(b, expr::mk(Op::If, {undef, expr::cst(uint64_t(2)), comb}));
        return let1(a, inner);
      }
      default:
        throw CompileError("skolem matrix: quantifier in matrix");
    }
  }
};

} // namespace detail

// Program over (x, seq): strict three-valued evaluation of the matrix with
// x as the universal variable and the merged Skolem function read off seq.
inline expr::Program compile_skolem_matrix(const Formula& matrix, uint64_t x_var, uint64_t shift) {
  detail::SkolemCompile sc{x_var, true, 1, 0, shift};
  std::map<uint64_t, uint64_t> noargs;
  detail::CompileEnv env{{}, &noargs};
  return expr::Program{sc.formula(matrix, env)};
}

// Closed matrix (no universal variable); program over (seq) alone.
inline expr::Program compile_skolem_matrix_closed(const Formula& matrix, uint64_t shift) {
  detail::SkolemCompile sc{0, false, 0, 0, shift};
  std::map<uint64_t, uint64_t> noargs;
  detail::CompileEnv env{{}, &noargs};
  return expr::Program{sc.formula(matrix, env)};
}

} // namespace wol
