#pragma once

// Skolemization of sentences into the single-function single-variable matrix
// form: a sentence g becomes psi(f, u) with one merged unary Skolem symbol
// (id 0) and one universal variable, such that g holds iff some f satisfies
// psi(f, u) for all u.
//
// Construction: view g in the exists/not fragment (forall x A as
// not exists x not A), give every quantifier node a Skolem symbol indexed in
// preorder, transform bodies by substituting sk_i(y) for the bound variable,
// and conjoin the Skolem axioms xi'(x,y) -> xi'(sk_i(y),y). Merging uses the
// pairing (i+j)^2 + i: sk_i(y1..ym) = #0(<i, <y1, <y2, ... <ym, 0>>>>), and
// the universal variables become unpairing chains of the single variable.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compile.hpp"
#include "eval.hpp"
#include "formula.hpp"
#include "goedel.hpp"

namespace wol {

struct SkolemEntry {
  uint64_t index;                 // symbol index in the merged function
  uint64_t bound_var;             // quantified variable of the subformula
  std::vector<uint64_t> params;   // free variables of the subformula, ascending
  bool from_forall;               // introduced through the not-exists-not rewrite
};

struct SkolemResult {
  Formula matrix;                     // psi; free variable = universal var if present
  std::optional<uint64_t> universal;  // the merged universal variable
  std::vector<SkolemEntry> table;     // merge encoding per quantifier node
};

namespace detail {

// <a, b> = (a+b)^2 + a as a term in the arithmetic signature
inline Term pair_term(const Term& a, const Term& b) {
  Term s = t_add(a, b);
  return t_add(t_mul(s, s), a);
}

inline Term tuple_term(const std::vector<Term>& xs) {
  Term t = t_zero();
  for (size_t i = xs.size(); i-- > 0;) t = pair_term(xs[i], t);
  return t;
}

struct Skolemizer {
  std::vector<SkolemEntry> table;

  Term sk_term(uint64_t index, const std::vector<uint64_t>& params) {
    std::vector<Term> args;
    args.reserve(params.size());
    for (uint64_t p : params) args.push_back(t_var(p));
    return t_skolem(0, {pair_term(t_num(index), tuple_term(args))});
  }

  // Transform in the exists/not view; axioms collected per quantifier node.
  // `polarity` tracks an odd number of enclosing defined negations.
  Formula transform(const Formula& f, std::vector<Formula>& axioms) {
    switch (f->kind) {
      case FormulaKind::Lit: return f;
      case FormulaKind::And: {
        Formula l = transform(f->left, axioms);
        Formula r = transform(f->right, axioms);
        return f_and(l, r);
      }
      case FormulaKind::Or: {
        Formula l = transform(f->left, axioms);
        Formula r = transform(f->right, axioms);
        return f_or(l, r);
      }
      case FormulaKind::Exists: {
        uint64_t idx = table.size();
        std::set<uint64_t> fv = free_vars(f);
        SkolemEntry entry{idx, f->var, {fv.begin(), fv.end()}, false};
        table.push_back(entry);
        Formula body = transform(f->left, axioms);
        Term sk = sk_term(idx, entry.params);
        // axiom: xi'(x, y) -> xi'(sk(y), y)
        axioms.push_back(f_or(negate(body), subst(body, f->var, sk)));
        return subst(body, f->var, sk);
      }
      case FormulaKind::Forall: {
        // forall x A = not exists x not A
        uint64_t idx = table.size();
        std::set<uint64_t> fv = free_vars(f);
        SkolemEntry entry{idx, f->var, {fv.begin(), fv.end()}, true};
        table.push_back(entry);
        Formula body = transform(negate(f->left), axioms);
        Term sk = sk_term(idx, entry.params);
        axioms.push_back(f_or(negate(body), subst(body, f->var, sk)));
        return negate(subst(body, f->var, sk));
      }
    }
    return f;
  }
};

// fst(snd^j(u)) as a run-term
inline Term projection_term(uint64_t j, uint64_t u) {
  using namespace expr;
  NodeRef n = arg(0);
  for (uint64_t i = 0; i < j; i++) n = mk(Op::Snd, {n});
  n = mk(Op::Fst, {n});
  return t_run(Program{n}, {t_var(u)});
}

} // namespace detail

inline SkolemResult skolemize(const Formula& sentence) {
  if (!free_vars(sentence).empty())
    throw FreeVariableError("skolemize: input must be a sentence");
  detail::Skolemizer sk;
  std::vector<Formula> axioms;
  Formula main = sk.transform(normalize(sentence), axioms);
  Formula psi = main;
  for (size_t i = axioms.size(); i-- > 0;) psi = f_and(axioms[i], psi);

  std::set<uint64_t> fv = free_vars(psi);
  SkolemResult out;
  out.table = std::move(sk.table);
  if (fv.empty()) {
    out.matrix = psi;
    return out;
  }
  if (fv.size() == 1) {
    // single universal variable: no unpairing detour
    out.matrix = psi;
    out.universal = *fv.begin();
    return out;
  }
  uint64_t u = max_var_id(psi);
  uint64_t j = 0;
  for (uint64_t v : fv) psi = subst(psi, v, detail::projection_term(j++, u));
  out.matrix = psi;
  out.universal = u;
  return out;
}

// ---- the tree-membership predicate theta and the survivor tree ----

// theta(seq, psi): seq = (s0, ..., s_{k-1}) read as x = s0 and f(i) = s_{i+1};
// true iff the fragment determines psi(f, x) and its value is false.
inline expr::Program theta_program(const SkolemResult& sk) {
  using namespace expr;
  // tri-valued matrix over (x, seq), f(i) = seq[i+1]
  Program m = sk.universal ? compile_skolem_matrix(sk.matrix, *sk.universal, 1)
                           : compile_skolem_matrix_closed(sk.matrix, 1);
  NodeRef tri = sk.universal
                    ? apply_program(m, {mk(Op::SeqAt, {arg(0), cst(uint64_t(0))}), arg(0)})
                    : apply_program(m, {arg(0)});
  NodeRef nonempty = mk(Op::Lt, {cst(uint64_t(0)), mk(Op::SeqLen, {arg(0)})});
  NodeRef valid = mk(Op::SeqValid, {arg(0)});
  return Program{mk(Op::And, {mk(Op::And, {valid, nonempty}),
                              mk(Op::Eq, {tri, cst(uint64_t(0))})})};
}

inline bool theta_test(const BigNat& seq_code, const SkolemResult& sk,
                       const EvalContext& ctx = {}) {
  if (!seq_valid(seq_code)) throw CodecError("theta_test: malformed sequence code");
  return !eval_program(ctx, theta_program(sk), {Val(seq_code)}).is_zero();
}

// Survivor-tree membership: s is in T iff no x < |s| makes the fragment a
// falsification witness, i.e. for all x < len(s): not theta-with-x-and-s.
// Read with f(i) = s_i (shift 0) and the candidate x supplied directly; this
// is the prefix-closed tree whose infinite branches are exactly the Skolem
// functions satisfying psi everywhere.
inline expr::Program member_program(const SkolemResult& sk) {
  using namespace expr;
  Program m = sk.universal ? compile_skolem_matrix(sk.matrix, *sk.universal, 0)
                           : compile_skolem_matrix_closed(sk.matrix, 0);
  // inside allbelow: arg0 = candidate x, arg1 = seq
  NodeRef tri = sk.universal ? apply_program(m, {arg(0), arg(1)})
                             : apply_program(m, {arg(1)});
  NodeRef alive = mk(Op::Not, {mk(Op::Eq, {tri, cst(uint64_t(2 - 2))})});
  NodeRef all = mk(Op::AllBelow, {mk(Op::SeqLen, {arg(0)}), alive});
  return Program{mk(Op::And, {mk(Op::SeqValid, {arg(0)}), all})};
}

} // namespace wol
