#pragma once

// First-order arithmetic formulas in negation normal form.
// Terms: 0 (as numeral), numerals, S, +, *, variables, Skolem applications,
// and applications of expression-language programs (the interpreted
// primitive-recursive function symbols).
// Formulas: =/< literals with a negation flag, and, or, exists, forall.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bignat.hpp"
#include "expr.hpp"

namespace wol {

enum class TermKind : uint8_t { Var, Num, Succ, Add, Mul, Skolem, Run };
enum class FormulaKind : uint8_t { Lit, And, Or, Exists, Forall };
enum class AtomKind : uint8_t { Eq, Lt };

struct TermNode;
struct FormulaNode;
using Term = std::shared_ptr<const TermNode>;
using Formula = std::shared_ptr<const FormulaNode>;

struct TermNode {
  TermKind kind;
  uint64_t var = 0;              // Var id / Skolem symbol id
  Val num;                       // Num payload
  expr::Program prog;            // Run payload
  std::vector<Term> kids;
};

struct FormulaNode {
  FormulaKind kind;
  AtomKind atom = AtomKind::Eq;  // Lit payload
  bool neg = false;              // Lit payload
  Term lhs, rhs;                 // Lit payload
  uint64_t var = 0;              // quantifier payload
  Formula left, right;           // And/Or children; left doubles as quantifier body
};

// ---- constructors ----

inline Term t_var(uint64_t v) { auto n = std::make_shared<TermNode>(); n->kind = TermKind::Var; n->var = v; return n; }
inline Term t_num(Val v) { auto n = std::make_shared<TermNode>(); n->kind = TermKind::Num; n->num = std::move(v); return n; }
inline Term t_num(uint64_t v) { return t_num(Val(v)); }
inline Term t_zero() { return t_num(uint64_t(0)); }
inline Term t_succ(Term t) { auto n = std::make_shared<TermNode>(); n->kind = TermKind::Succ; n->kids = {std::move(t)}; return n; }
inline Term t_add(Term a, Term b) { auto n = std::make_shared<TermNode>(); n->kind = TermKind::Add; n->kids = {std::move(a), std::move(b)}; return n; }
inline Term t_mul(Term a, Term b) { auto n = std::make_shared<TermNode>(); n->kind = TermKind::Mul; n->kids = {std::move(a), std::move(b)}; return n; }
inline Term t_skolem(uint64_t sym, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Skolem; n->var = sym; n->kids = std::move(args);
  return n;
}
inline Term t_run(expr::Program p, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Run; n->prog = std::move(p); n->kids = std::move(args);
  return n;
}

inline Formula f_lit(AtomKind a, bool neg, Term l, Term r) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::Lit; n->atom = a; n->neg = neg;
  n->lhs = std::move(l); n->rhs = std::move(r);
  return n;
}
inline Formula f_eq(Term l, Term r) { return f_lit(AtomKind::Eq, false, std::move(l), std::move(r)); }
inline Formula f_lt(Term l, Term r) { return f_lit(AtomKind::Lt, false, std::move(l), std::move(r)); }
inline Formula f_and(Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::And; n->left = std::move(a); n->right = std::move(b);
  return n;
}
inline Formula f_or(Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::Or; n->left = std::move(a); n->right = std::move(b);
  return n;
}
inline Formula f_exists(uint64_t v, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::Exists; n->var = v; n->left = std::move(body);
  return n;
}
inline Formula f_forall(uint64_t v, Formula body) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::Forall; n->var = v; n->left = std::move(body);
  return n;
}
inline Formula f_true() { return f_eq(t_zero(), t_zero()); }
inline Formula f_false() { return f_lit(AtomKind::Eq, true, t_zero(), t_zero()); }

// ---- structural equality ----

inline bool term_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case TermKind::Var:
    case TermKind::Skolem: if (a->var != b->var) return false; break;
    case TermKind::Num: if (a->num != b->num) return false; break;
    case TermKind::Run: if (!(a->prog == b->prog)) return false; break;
    default: break;
  }
  for (size_t i = 0; i < a->kids.size(); i++)
    if (!term_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool formula_eq(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::Lit:
      return a->atom == b->atom && a->neg == b->neg &&
             term_eq(a->lhs, b->lhs) && term_eq(a->rhs, b->rhs);
    case FormulaKind::And:
    case FormulaKind::Or:
      return formula_eq(a->left, b->left) && formula_eq(a->right, b->right);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return a->var == b->var && formula_eq(a->left, b->left);
  }
  return false;
}

// ---- traversal helpers ----

inline void term_vars(const Term& t, std::set<uint64_t>& out) {
  if (t->kind == TermKind::Var) out.insert(t->var);
  for (const auto& k : t->kids) term_vars(k, out);
}

inline void free_vars_rec(const Formula& f, std::set<uint64_t>& bound, std::set<uint64_t>& out) {
  switch (f->kind) {
    case FormulaKind::Lit: {
      std::set<uint64_t> vs;
      term_vars(f->lhs, vs);
      term_vars(f->rhs, vs);
      for (uint64_t v : vs) if (!bound.count(v)) out.insert(v);
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      free_vars_rec(f->left, bound, out);
      free_vars_rec(f->right, bound, out);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool fresh = bound.insert(f->var).second;
      free_vars_rec(f->left, bound, out);
      if (fresh) bound.erase(f->var);
      break;
    }
  }
}

inline std::set<uint64_t> free_vars(const Formula& f) {
  std::set<uint64_t> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

inline uint64_t max_var_id(const Formula& f) {
  uint64_t m = 0;
  switch (f->kind) {
    case FormulaKind::Lit: {
      std::set<uint64_t> vs;
      term_vars(f->lhs, vs);
      term_vars(f->rhs, vs);
      for (uint64_t v : vs) m = std::max(m, v + 1);
      return m;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      return std::max(max_var_id(f->left), max_var_id(f->right));
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return std::max(f->var + 1, max_var_id(f->left));
  }
  return 0;
}

inline bool is_literal(const Formula& f) { return f->kind == FormulaKind::Lit; }

// Buildup complexity: 0 on literals, additive plus one under connectives,
// plus one under quantifiers.
inline uint64_t complexity(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Lit: return 0;
    case FormulaKind::And:
    case FormulaKind::Or: return complexity(f->left) + complexity(f->right) + 1;
    case FormulaKind::Exists:
    case FormulaKind::Forall: return complexity(f->left) + 1;
  }
  return 0;
}

// ---- defined negation (De Morgan, double negations dropped) ----

inline Formula negate(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Lit: return f_lit(f->atom, !f->neg, f->lhs, f->rhs);
    case FormulaKind::And: return f_or(negate(f->left), negate(f->right));
    case FormulaKind::Or: return f_and(negate(f->left), negate(f->right));
    case FormulaKind::Exists: return f_forall(f->var, negate(f->left));
    case FormulaKind::Forall: return f_exists(f->var, negate(f->left));
  }
  return f;
}

// ---- substitution (closed terms only; no capture possible) ----

inline Term term_subst(const Term& t, uint64_t v, const Term& repl) {
  if (t->kind == TermKind::Var) return t->var == v ? repl : t;
  if (t->kids.empty()) return t;
  auto n = std::make_shared<TermNode>(*t);
  for (auto& k : n->kids) k = term_subst(k, v, repl);
  return n;
}

inline Formula subst(const Formula& f, uint64_t v, const Term& repl) {
  switch (f->kind) {
    case FormulaKind::Lit:
      return f_lit(f->atom, f->neg, term_subst(f->lhs, v, repl), term_subst(f->rhs, v, repl));
    case FormulaKind::And: return f_and(subst(f->left, v, repl), subst(f->right, v, repl));
    case FormulaKind::Or: return f_or(subst(f->left, v, repl), subst(f->right, v, repl));
    case FormulaKind::Exists:
      if (f->var == v) return f;
      return f_exists(f->var, subst(f->left, v, repl));
    case FormulaKind::Forall:
      if (f->var == v) return f;
      return f_forall(f->var, subst(f->left, v, repl));
  }
  return f;
}

// ---- canonical renaming ----
// Bound variables are renumbered in binder preorder starting above every free
// id, then free ids are kept as-is. This makes every bound variable bound
// exactly once and structural equality stable.

namespace detail {

inline Term term_rename(const Term& t, const std::map<uint64_t, uint64_t>& env) {
  if (t->kind == TermKind::Var) {
    auto it = env.find(t->var);
    return it == env.end() ? t : t_var(it->second);
  }
  if (t->kids.empty()) return t;
  auto n = std::make_shared<TermNode>(*t);
  for (auto& k : n->kids) k = term_rename(k, env);
  return n;
}

inline Formula canon_rec(const Formula& f, std::map<uint64_t, uint64_t>& env, uint64_t& next) {
  switch (f->kind) {
    case FormulaKind::Lit:
      return f_lit(f->atom, f->neg, term_rename(f->lhs, env), term_rename(f->rhs, env));
    case FormulaKind::And: {
      Formula l = canon_rec(f->left, env, next);
      Formula r = canon_rec(f->right, env, next);
      return f_and(l, r);
    }
    case FormulaKind::Or: {
      Formula l = canon_rec(f->left, env, next);
      Formula r = canon_rec(f->right, env, next);
      return f_or(l, r);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      uint64_t fresh = next++;
      auto old = env.find(f->var);
      std::optional<uint64_t> saved;
      if (old != env.end()) saved = old->second;
      env[f->var] = fresh;
      Formula body = canon_rec(f->left, env, next);
      if (saved) env[f->var] = *saved; else env.erase(f->var);
      return f->kind == FormulaKind::Exists ? f_exists(fresh, body) : f_forall(fresh, body);
    }
  }
  return f;
}

} // namespace detail

inline Formula canonicalize(const Formula& f) {
  std::set<uint64_t> fv = free_vars(f);
  uint64_t next = 0;
  for (uint64_t v : fv) next = std::max(next, v + 1);
  std::map<uint64_t, uint64_t> env;
  return detail::canon_rec(f, env, next);
}

// NNF is enforced by the representation; normalize = canonical renaming.
inline Formula normalize(const Formula& f) { return canonicalize(f); }

// ---- printing ----

namespace detail {

inline void print_term(const Term& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var: out += 'x'; out += std::to_string(t->var); break;
    case TermKind::Num: out += t->num.to_dec(); break;
    case TermKind::Succ:
      out += "S(";
      print_term(t->kids[0], out);
      out += ')';
      break;
    case TermKind::Add:
    case TermKind::Mul:
      out += '(';
      print_term(t->kids[0], out);
      out += t->kind == TermKind::Add ? " + " : " * ";
      print_term(t->kids[1], out);
      out += ')';
      break;
    case TermKind::Skolem:
      out += '#';
      out += std::to_string(t->var);
      out += '(';
      for (size_t i = 0; i < t->kids.size(); i++) {
        if (i) out += ", ";
        print_term(t->kids[i], out);
      }
      out += ')';
      break;
    case TermKind::Run:
      out += "run[";
      out += expr::to_sexpr(t->prog);
      out += "](";
      for (size_t i = 0; i < t->kids.size(); i++) {
        if (i) out += ", ";
        print_term(t->kids[i], out);
      }
      out += ')';
      break;
  }
}

inline void print_formula(const Formula& f, std::string& out) {
  switch (f->kind) {
    case FormulaKind::Lit:
      if (f->neg) out += "not ";
      print_term(f->lhs, out);
      out += f->atom == AtomKind::Eq ? " = " : " < ";
      print_term(f->rhs, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or: {
      // quantified children bind to the end of the input, so wrap them
      auto child = [&](const Formula& g) {
        bool wrap = g->kind == FormulaKind::Exists || g->kind == FormulaKind::Forall;
        if (wrap) out += '(';
        print_formula(g, out);
        if (wrap) out += ')';
      };
      out += '(';
      child(f->left);
      out += f->kind == FormulaKind::And ? " and " : " or ";
      child(f->right);
      out += ')';
      break;
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += f->kind == FormulaKind::Exists ? "exists x" : "forall x";
      out += std::to_string(f->var);
      out += ". ";
      print_formula(f->left, out);
      break;
  }
}

} // namespace detail

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_formula(f, out);
  return out;
}

inline std::string print(const Term& t) {
  std::string out;
  detail::print_term(t, out);
  return out;
}

} // namespace wol
