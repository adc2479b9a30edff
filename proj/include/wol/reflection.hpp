#pragma once

// Rendering of uniform reflection instances and the schema shapes built from
// an axiom recognizer. Pure syntax; evaluation semantics live in eval.hpp.

#include <optional>
#include <stdexcept>

#include "formula.hpp"
#include "goedel.hpp"

namespace wol {

inline uint64_t the_free_var(const Formula& f, const char* what) {
  std::set<uint64_t> fv = free_vars(f);
  if (fv.size() != 1)
    throw std::invalid_argument(std::string(what) + ": expected exactly one free variable, got " +
                                std::to_string(fv.size()));
  return *fv.begin();
}

// prfchk program with the recognizer code baked in: args (p, x).
inline expr::Program prv_program(const BigNat& recognizer_code) {
  using namespace expr;
  return Program{mk(Op::PrfChk, {cst(Val(recognizer_code)), arg(0), arg(1)})};
}

// The numeral-substitution term: evaluates to the code of phi(num) at num = x.
inline Term phi_dot_term(const BigNat& phi_code, uint64_t phi_var, Term x) {
  return t_run(subnum_program(), {t_num(Val(phi_code)), t_num(phi_var), std::move(x)});
}

// forall x ( Prv(code of phi(dot x)) -> phi(x) ), in negation normal form:
// forall x ( forall p not(prfchk(ax, p, sub(phi, x)) = 1)  or  phi(x) ).
inline Formula render_reflection_instance(const Formula& recognizer, const Formula& phi) {
  uint64_t phi_var = the_free_var(phi, "render_reflection_instance(phi)");
  (void)the_free_var(recognizer, "render_reflection_instance(recognizer)");
  BigNat ax_code = goedel_encode(recognizer);
  BigNat phi_code = goedel_encode(phi);
  uint64_t x = std::max(max_var_id(phi), max_var_id(recognizer));
  uint64_t p = x + 1;
  Term prf = t_run(prv_program(ax_code), {t_var(p), phi_dot_term(phi_code, phi_var, t_var(x))});
  Formula not_prv = f_forall(p, f_lit(AtomKind::Eq, true, prf, t_num(uint64_t(1))));
  Formula inst = f_forall(x, f_or(not_prv, subst(phi, phi_var, t_var(x))));
  return normalize(inst);
}

// Recognize the exact output shape of render_reflection_instance and pull out
// the phi component; used by the IsRefl builtins.
inline std::optional<std::pair<BigNat, uint64_t>> find_subnum_payload(const Term& t) {
  if (t->kind == TermKind::Run && t->prog == subnum_program() && t->kids.size() == 3 &&
      t->kids[0]->kind == TermKind::Num && t->kids[1]->kind == TermKind::Num)
    return std::make_pair(t->kids[0]->num.to_big(), t->kids[1]->num.as_u64());
  for (const auto& k : t->kids) {
    auto r = find_subnum_payload(k);
    if (r) return r;
  }
  return std::nullopt;
}

inline std::optional<std::pair<BigNat, uint64_t>> find_subnum_payload(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Lit: {
      auto r = find_subnum_payload(f->lhs);
      if (r) return r;
      return find_subnum_payload(f->rhs);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      auto r = find_subnum_payload(f->left);
      if (r) return r;
      return find_subnum_payload(f->right);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return find_subnum_payload(f->left);
  }
  return std::nullopt;
}

inline bool is_reflection_instance_over(const Formula& recognizer, const BigNat& candidate_code) {
  Formula y;
  try {
    y = goedel_decode(candidate_code);
  } catch (const CodecError&) {
    return false;
  }
  auto payload = find_subnum_payload(y);
  if (!payload) return false;
  Formula phi;
  try {
    phi = goedel_decode(payload->first);
  } catch (const CodecError&) {
    return false;
  }
  if (free_vars(phi) != std::set<uint64_t>{payload->second}) return false;
  Formula expected = render_reflection_instance(recognizer, phi);
  return goedel_encode(expected) == candidate_code;
}

// Transfinite induction schema instance for a presentation given as raw
// membership / strict-precedence programs:
//   ( forall x in L )( (forall y < x) phi(y) -> phi(x) ) -> (forall x in L) phi(x)
// with an optional bound b rendering the restricted form TI(L|b).
inline Formula render_ti_instance(const expr::Program& mem, const expr::Program& prec,
                                  const Formula& phi, std::optional<Val> below) {
  uint64_t phi_var = the_free_var(phi, "render_ti_instance(phi)");
  uint64_t x = max_var_id(phi);
  uint64_t y = x + 1;

  auto in_dom = [&](uint64_t v) {
    return f_eq(t_run(mem, {t_var(v)}), t_num(uint64_t(1)));
  };
  auto not_in_dom = [&](uint64_t v) {
    return f_lit(AtomKind::Eq, true, t_run(mem, {t_var(v)}), t_num(uint64_t(1)));
  };
  auto prec_f = [&](uint64_t a, uint64_t b) {
    return f_eq(t_run(prec, {t_var(a), t_var(b)}), t_num(uint64_t(1)));
  };
  auto not_prec = [&](uint64_t a, uint64_t b) {
    return f_lit(AtomKind::Eq, true, t_run(prec, {t_var(a), t_var(b)}), t_num(uint64_t(1)));
  };
  auto guard = [&](uint64_t v, Formula body) {
    // (forall v in scope) body, where scope is the domain or the part below b
    if (below) {
      Formula outside = f_lit(AtomKind::Eq, true,
                              t_run(prec, {t_var(v), t_num(*below)}), t_num(uint64_t(1)));
      return f_forall(v, f_or(outside, std::move(body)));
    }
    return f_forall(v, f_or(not_in_dom(v), std::move(body)));
  };
  (void)in_dom;
  (void)prec_f;

  // progressive(x): (forall y < x) phi(y) -> phi(x)
  Formula prog_x = f_or(f_exists(y, f_and(prec_f(y, x), negate(subst(phi, phi_var, t_var(y))))),
                        subst(phi, phi_var, t_var(x)));
  (void)not_prec;
  Formula antecedent = guard(x, prog_x);
  Formula consequent = guard(x, subst(phi, phi_var, t_var(x)));
  // A -> B in NNF is  neg A or B
  return normalize(f_or(negate(antecedent), consequent));
}

} // namespace wol
