#pragma once

// Iterated-reflection machinery: axiom recognizers for theories, the fixed
// point Ax_T^L for progressions along an order presentation, the notation
// cases RFN^a for Kleene-O-style numbers, the g-map from structured orders
// to notations, and CNF evaluation of denoted ordinals.
//
// Conventions (docs/progressions.md):
//   - recognizers are Sigma_1-shaped: at most one leading unbounded
//     existential over a decidable matrix;
//   - in the two-variable fixed points, variable 0 is the stage and
//     variable 1 the candidate axiom code;
//   - the base notation is the number 1 = 2^0, denoting the ordinal 1;
//   - g sends limit points to 2^(3*5^e), the successor of a fresh limit
//     notation, so that |g(x)| matches the weak initial segment up to x.

#include <fstream>
#include <sstream>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "eval.hpp"
#include "order.hpp"
#include "ordinal.hpp"
#include "reflection.hpp"

namespace wol {

struct ProgressionError : std::runtime_error {
  explicit ProgressionError(const std::string& m) : std::runtime_error(m) {}
};

// ---- Sigma_1 shape ----

inline bool decidable_shape(const Formula& f);

inline bool decidable_shape_quantifier(const Formula& f) {
  // only the bounded guard patterns keep a quantifier decidable
  bool ex = f->kind == FormulaKind::Exists;
  const Formula& body = f->left;
  if (body->kind != (ex ? FormulaKind::And : FormulaKind::Or)) return false;
  const Formula& guard = body->left;
  if (guard->kind != FormulaKind::Lit || guard->atom != AtomKind::Lt) return false;
  if (guard->neg != !ex) return false;
  if (guard->lhs->kind != TermKind::Var || guard->lhs->var != f->var) return false;
  std::set<uint64_t> vs;
  term_vars(guard->rhs, vs);
  if (vs.count(f->var)) return false;
  return decidable_shape(body->right);
}

inline bool decidable_shape(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Lit: return true;
    case FormulaKind::And:
    case FormulaKind::Or: return decidable_shape(f->left) && decidable_shape(f->right);
    case FormulaKind::Exists:
    case FormulaKind::Forall: return decidable_shape_quantifier(f);
  }
  return false;
}

inline bool is_sigma1_shaped(const Formula& f) {
  if (f->kind == FormulaKind::Exists && !decidable_shape_quantifier(f))
    return decidable_shape(f->left);
  return decidable_shape(f);
}

// ---- theories ----

struct TheorySpec {
  std::string name;
  Formula ax;  // one free variable: the candidate axiom code

  TheorySpec(std::string name_, Formula ax_) : name(std::move(name_)), ax(normalize(ax_)) {
    (void)the_free_var(ax, "TheorySpec");
    if (!is_sigma1_shaped(ax))
      throw ProgressionError("TheorySpec: recognizer is not Sigma_1-shaped");
  }
};

// finite axiom list compiled to a disjunctive recognizer over variable 0
inline TheorySpec theory_from_axioms(const std::string& name, const std::vector<Formula>& axioms) {
  if (axioms.empty()) throw ProgressionError("theory_from_axioms: empty axiom list");
  Formula rec;
  for (const auto& a : axioms) {
    Formula eq = f_eq(t_var(0), t_num(Val(goedel_encode(normalize(a)))));
    rec = rec ? f_or(rec, eq) : eq;
  }
  return TheorySpec(name, rec);
}

inline Formula render_reflection_instance(const TheorySpec& t, const Formula& phi) {
  return render_reflection_instance(t.ax, phi);
}

// ---- the registry ----

// Append-only table of total programs (the {e} of limit notations) plus the
// interned notation terms produced by the g-map. Indices are stable across
// runs given identical inputs; allocation is the only mutation.
class Registry {
public:
  enum class ProgramKind : uint8_t { Number, Handle };
  struct ProgramEntry {
    expr::Program prog;
    ProgramKind kind;
  };
  enum class TermShape : uint8_t { Other, Succ, Lim };
  struct TermEntry {
    TermShape shape;
    BigNat other_value;   // Other: the raw number
    uint64_t sub = 0;     // Succ: handle of the predecessor
    uint64_t e = 0;       // Lim: program index
  };

  uint64_t add_program(expr::Program p, ProgramKind kind) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    programs_.push_back({std::move(p), kind});
    return programs_.size() - 1;
  }
  ProgramEntry program(uint64_t e) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (e >= programs_.size()) throw ProgressionError("registry: unresolvable index " + std::to_string(e));
    return programs_[e];
  }
  size_t program_count() const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    return programs_.size();
  }

  uint64_t intern(TermEntry t) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    terms_.push_back(std::move(t));
    return terms_.size() - 1;
  }
  TermEntry term(uint64_t h) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    if (h >= terms_.size()) throw ProgressionError("registry: bad term handle");
    return terms_[h];
  }

  // g-map memo: (packed presentation, domain code) -> handle
  std::optional<uint64_t> gmap_hit(const BigNat& pres, uint64_t x) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = gmap_.find({pres, x});
    if (it == gmap_.end()) return std::nullopt;
    return it->second;
  }
  void gmap_store(const BigNat& pres, uint64_t x, uint64_t handle) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    gmap_[{pres, x}] = handle;
  }

  // append-only persistence: one record per line
  void save(const std::string& path) const {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    std::ofstream out(path, std::ios::trunc);
    for (const auto& p : programs_)
      out << "program " << (p.kind == ProgramKind::Number ? "number " : "handle ")
          << expr::to_sexpr(p.prog) << "\n";
    for (const auto& t : terms_) {
      if (t.shape == TermShape::Other) out << "term other " << t.other_value.to_dec() << "\n";
      else if (t.shape == TermShape::Succ) out << "term succ " << t.sub << "\n";
      else out << "term lim " << t.e << "\n";
    }
  }

  static void load_into(const std::string& path, Registry& reg) {
    std::ifstream in(path);
    if (!in) throw ProgressionError("registry: cannot read " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string kind, sub;
      ls >> kind >> sub;
      if (kind == "program") {
        std::string rest;
        std::getline(ls, rest);
        size_t start = rest.find('(');
        if (start == std::string::npos) throw ProgressionError("registry: bad program record");
        reg.add_program(expr::parse_program(rest.substr(start)),
                        sub == "number" ? ProgramKind::Number : ProgramKind::Handle);
      } else if (kind == "term") {
        std::string payload;
        ls >> payload;
        if (sub == "other") reg.intern({TermShape::Other, BigNat::from_dec(payload), 0, 0});
        else if (sub == "succ") reg.intern({TermShape::Succ, BigNat(0), std::stoull(payload), 0});
        else reg.intern({TermShape::Lim, BigNat(0), 0, std::stoull(payload)});
      } else {
        throw ProgressionError("registry: bad record '" + kind + "'");
      }
    }
  }

private:
  mutable std::recursive_mutex mu_;
  std::vector<ProgramEntry> programs_;
  std::vector<TermEntry> terms_;
  std::map<std::pair<BigNat, uint64_t>, uint64_t> gmap_;
};

namespace detail {

inline Val regeval_builtin(const EvalContext& ctx, const std::vector<Val>& args) {
  if (!ctx.registry) throw EvalError("regeval: no registry in evaluation context");
  if (!args[0].fits_u64()) throw EvalError("regeval: absurd program index");
  const Registry::ProgramEntry entry = ctx.registry->program(args[0].as_u64());
  return eval_program(ctx, entry.prog, {args[1]});
}

inline const bool regeval_registered = register_builtin(expr::Op::RegEval, &regeval_builtin);

} // namespace detail

// ---- notation terms ----

struct NotationTerm {
  enum class Shape : uint8_t { Other, Succ, Lim };
  Shape shape = Shape::Other;
  std::optional<BigNat> number;              // exact Kleene-style value when small
  std::optional<uint64_t> handle;            // registry term handle when interned
  std::shared_ptr<const NotationTerm> sub;   // Succ
  uint64_t e = 0;                            // Lim

  static constexpr size_t value_bit_cap = 1u << 14;

  // arithmetic shape parse of a raw number: 2^a, 3*5^e, or other
  static NotationTerm from_number(const BigNat& a) {
    NotationTerm t;
    t.number = a;
    if (!a.is_zero() && a.bit_length() >= 1) {
      // single set bit: a power of two
      size_t len = a.bit_length();
      BigNat pow2 = BigNat::shl(BigNat(1), len - 1);
      if (a == pow2 && len >= 1 && !(len == 1 && false)) {
        if (len == 1) {
          // a = 1 = 2^0: successor of the number 0
          t.shape = Shape::Succ;
          t.sub = std::make_shared<NotationTerm>(from_number(BigNat(0)));
          return t;
        }
        t.shape = Shape::Succ;
        t.sub = std::make_shared<NotationTerm>(from_number(BigNat(len - 1)));
        return t;
      }
      // 3 * 5^e
      BigNat q, r;
      BigNat::divmod(a, BigNat(3), q, r);
      if (r.is_zero() && !q.is_zero()) {
        BigNat five(5);
        BigNat cur = q;
        uint64_t e = 0;
        while (cur > BigNat(1)) {
          BigNat qq, rr;
          BigNat::divmod(cur, five, qq, rr);
          if (!rr.is_zero()) { e = UINT64_MAX; break; }
          cur = qq;
          e++;
        }
        if (e != UINT64_MAX && cur == BigNat(1)) {
          t.shape = Shape::Lim;
          t.e = e;
          return t;
        }
      }
    }
    t.shape = Shape::Other;
    return t;
  }

  static NotationTerm from_handle(uint64_t h, const Registry& reg) {
    const Registry::TermEntry entry = reg.term(h);
    NotationTerm t;
    t.handle = h;
    switch (entry.shape) {
      case Registry::TermShape::Other:
        t.shape = Shape::Other;
        t.number = entry.other_value;
        break;
      case Registry::TermShape::Succ:
        t.shape = Shape::Succ;
        t.sub = std::make_shared<NotationTerm>(from_handle(entry.sub, reg));
        break;
      case Registry::TermShape::Lim:
        t.shape = Shape::Lim;
        t.e = entry.e;
        break;
    }
    return t;
  }

  // the Kleene-style numeral, when it fits the size cap
  std::optional<BigNat> value() const {
    if (number) return number;
    switch (shape) {
      case Shape::Other: return number;
      case Shape::Succ: {
        auto v = sub->value();
        if (!v) return std::nullopt;
        if (v->bit_length() >= value_bit_cap) return std::nullopt;
        if (!v->fits_u64() || v->as_u64() >= value_bit_cap) return std::nullopt;
        return BigNat::shl(BigNat(1), v->as_u64());
      }
      case Shape::Lim: {
        // 3 * 5^e
        BigNat five(5), acc(1);
        for (uint64_t i = 0; i < e; i++) {
          acc = acc.mul_small(5);
          if (acc.bit_length() > value_bit_cap) return std::nullopt;
        }
        (void)five;
        return acc.mul_small(3);
      }
    }
    return std::nullopt;
  }

  std::string describe() const {
    switch (shape) {
      case Shape::Other: return number ? number->to_dec() : std::string("?");
      case Shape::Succ: return "2^(" + sub->describe() + ")";
      case Shape::Lim: return "3*5^(e" + std::to_string(e) + ")";
    }
    return "?";
  }
};

// ---- the Ax_T^L fixed point ----

namespace detail {

inline Term run1(const expr::Program& p, Term a) {
  return t_run(p, {std::move(a)});
}
inline Term run2(const expr::Program& p, Term a, Term b) {
  return t_run(p, {std::move(a), std::move(b)});
}
inline Formula run_true(Term t) { return f_eq(std::move(t), t_num(uint64_t(1))); }
inline Formula run_false(Term t) {
  return f_lit(AtomKind::Eq, true, std::move(t), t_num(uint64_t(1)));
}

inline expr::Program fst_program() {
  using namespace expr;
  return Program{mk(Op::Fst, {arg(0)})};
}
inline expr::Program snd_program() {
  using namespace expr;
  return Program{mk(Op::Snd, {arg(0)})};
}

// split the recognizer into (optional witness var, matrix)
inline std::pair<std::optional<uint64_t>, Formula> sigma1_split(const Formula& rec) {
  if (rec->kind == FormulaKind::Exists && !decidable_shape_quantifier(rec))
    return {rec->var, rec->left};
  return {std::nullopt, rec};
}

} // namespace detail

// The Goedel-diagonal recognizer Ax_T^L(x, y): x is in L, and y is an axiom
// of T or a uniform-reflection instance over some stage strictly below x.
// Variable 0 is the stage, variable 1 the axiom candidate.
inline Formula build_ax_progression(const TheorySpec& t, const OrderPresentation& p) {
  using detail::run2;
  using detail::run_true;
  using detail::run_false;

  uint64_t xv = 0, yv = 1, wv = 2, uv = 3;
  auto [tw, tmatrix] = detail::sigma1_split(t.ax);
  uint64_t tvar = the_free_var(t.ax, "build_ax_progression");

  Term u = t_var(uv);
  Term tag = detail::run1(detail::fst_program(), u);
  Term payload = detail::run1(detail::snd_program(), u);

  // tag 0: y is an axiom of T, payload witnessing the recognizer's existential
  Formula ax_branch = subst(tmatrix, tvar, t_var(yv));
  if (tw) ax_branch = subst(ax_branch, *tw, payload);
  ax_branch = f_and(f_eq(tag, t_num(uint64_t(0))), ax_branch);

  // tag 1: payload is a stage z strictly below x carrying a reflection instance
  Term z = payload;
  Formula z_in = run_true(run2(p.leq, z, z));
  Formula z_below = f_and(run_true(run2(p.leq, z, t_var(xv))),
                          run_false(run2(p.leq, t_var(xv), z)));
  using namespace expr;
  expr::Program isrefl{mk(Op::IsRefl, {arg(0), arg(1), arg(2)})};
  Formula is_inst = run_true(t_run(isrefl, {t_var(wv), z, t_var(yv)}));
  Formula refl_branch = f_and(f_eq(tag, t_num(uint64_t(1))),
                              f_and(z_in, f_and(z_below, is_inst)));

  Formula x_in = run_true(run2(p.leq, t_var(xv), t_var(xv)));
  Formula body = f_and(x_in, f_or(ax_branch, refl_branch));
  Formula pre = f_exists(uv, body);
  Formula fixed = diagonal_fixed_point(pre, wv);
  if (!is_sigma1_shaped(fixed))
    throw ProgressionError("build_ax_progression: fixed point is not Sigma_1-shaped");
  return fixed;
}

// the recognizer of RFN^(L,a)(T): the fixed point with the stage filled in
inline Formula ax_progression_at(const Formula& ax_lx, uint64_t stage) {
  return subst(ax_lx, 0, t_num(stage));
}

// ---- TI / LO rendering over a presentation ----

inline expr::Program strict_prec_program(const OrderPresentation& p) {
  using namespace expr;
  return Program{mk(Op::And, {apply_program(p.leq, {arg(0), arg(1)}),
                              mk(Op::Not, {apply_program(p.leq, {arg(1), arg(0)})})})};
}

inline expr::Program membership_program(const OrderPresentation& p) {
  using namespace expr;
  return Program{apply_program(p.leq, {arg(0), arg(0)})};
}

inline Formula render_ti_instance(const OrderPresentation& p, const Formula& phi,
                                  std::optional<Val> below = std::nullopt) {
  return render_ti_instance(membership_program(p), strict_prec_program(p), phi, below);
}

// documentation shapes: the linearity and well-orderedness statements
inline std::string render_lo_text(const OrderPresentation& p) {
  std::string L = "x in L  :=  leq(x,x) = 1   with leq = " + expr::to_sexpr(p.leq);
  return "LO(L): the comparison program is reflexive on its universe, "
         "antisymmetric, transitive and total:\n  " + L + "\n"
         "  forall x in L. x <= x\n"
         "  forall x, y in L. (x <= y and y <= x) -> x = y\n"
         "  forall x, y, z in L. (x <= y and y <= z) -> x <= z\n"
         "  forall x, y in L. x <= y or y <= x\n";
}

inline std::string render_wo_text(const OrderPresentation& p) {
  (void)p;
  return "WO(L): LO(L) and every nonempty subset has a least element:\n"
         "  forall Y. (exists x. x in Y and x in L) ->\n"
         "            (exists x in Y and L)(forall y in Y and L). x <= y\n";
}

// ---- RFN^a over notations ----

namespace detail {

// chain-validity program over (a, chain): walks descent steps
//   <0, _>  : b' = log2(b), for b a power of two
//   <1, n>  : b = 3*5^e and b' = {e}(n)
// returns endpoint + 1, or 0 when the chain is invalid or empty.
inline expr::Program descent_program() {
  using namespace expr;
  // iter body frame: arg0 = idx, arg1 = acc (b+1 or 0), arg2 = a, arg3 = chain
  NodeRef entry = mk(Op::SeqAt, {arg(3), arg(0)});
  NodeRef kind = mk(Op::Fst, {entry});
  NodeRef n = mk(Op::Snd, {entry});
  NodeRef b = mk(Op::Sub, {arg(1), cst(uint64_t(1))});
  // power of two: exactly one set bit
  NodeRef pow2 = mk(Op::And, {mk(Op::Lt, {cst(uint64_t(0)), b}),
                              mk(Op::Eq, {b, mk(Op::Shl, {cst(uint64_t(1)),
                                                          mk(Op::Sub, {mk(Op::BitLen, {b}), cst(uint64_t(1))})})})});
  NodeRef log2b = mk(Op::Sub, {mk(Op::BitLen, {b}), cst(uint64_t(1))});
  NodeRef pow2_step = mk(Op::If, {pow2, mk(Op::Add, {log2b, cst(uint64_t(1))}), cst(uint64_t(0))});
  // 3 * 5^e: q = b / 3 must be a pure power of five
  NodeRef q = mk(Op::Div, {b, cst(uint64_t(3))});
  NodeRef three_ok = mk(Op::Eq, {mk(Op::Mul, {q, cst(uint64_t(3))}), b});
  // e = minbelow(bitlen q + 1, 5^t == q); frame: arg0 = t, then outer shifted
  NodeRef e_search = mk(Op::MinBelow, {mk(Op::Add, {mk(Op::BitLen, {q}), cst(uint64_t(1))}),
                                       mk(Op::Eq, {mk(Op::Pow, {cst(uint64_t(5)), arg(0)}),
                                                   shift_free_args(q, 1)})});
  NodeRef e_found = mk(Op::Lt, {e_search, mk(Op::Add, {mk(Op::BitLen, {q}), cst(uint64_t(1))})});
  NodeRef lim_step = mk(Op::If, {mk(Op::And, {three_ok, e_found}),
                                 mk(Op::Add, {mk(Op::RegEval, {e_search, n}), cst(uint64_t(1))}),
                                 cst(uint64_t(0))});
  NodeRef step = mk(Op::If, {mk(Op::Eq, {arg(1), cst(uint64_t(0))}), cst(uint64_t(0)),
                  mk(Op::If, {mk(Op::Eq, {kind, cst(uint64_t(0))}), pow2_step, lim_step})});
  NodeRef walk = mk(Op::Iter, {mk(Op::SeqLen, {arg(1)}),
                               mk(Op::Add, {arg(0), cst(uint64_t(1))}), step});
  // args of the program: (a, chain); empty chains yield 0
  NodeRef result = mk(Op::If, {mk(Op::Eq, {mk(Op::SeqLen, {arg(1)}), cst(uint64_t(0))}),
                               cst(uint64_t(0)), walk});
  return Program{result};
}

} // namespace detail

// the two-variable fixed point AxO(a, y) behind RFN^a(T); variable 0 is the
// notation, variable 1 the axiom candidate
inline Formula build_ax_notation(const TheorySpec& t) {
  using detail::run_true;
  uint64_t av = 0, yv = 1, wv = 2, uv = 3;
  auto [tw, tmatrix] = detail::sigma1_split(t.ax);
  uint64_t tvar = the_free_var(t.ax, "build_ax_notation");

  Term u = t_var(uv);
  Term tag = detail::run1(detail::fst_program(), u);
  Term payload = detail::run1(detail::snd_program(), u);

  Formula ax_branch = subst(tmatrix, tvar, t_var(yv));
  if (tw) ax_branch = subst(ax_branch, *tw, payload);
  ax_branch = f_and(f_eq(tag, t_num(uint64_t(0))), ax_branch);

  // tag 1: payload codes a descent chain from a; the endpoint carries the
  // reflection instances
  using namespace expr;
  Term endpoint_plus = t_run(wol::detail::descent_program(), {t_var(av), payload});
  expr::Program isrefl{mk(Op::IsRefl, {arg(0), mk(Op::Sub, {arg(1), cst(uint64_t(1))}), arg(2)})};
  Formula chain_ok = f_lt(t_num(uint64_t(0)), endpoint_plus);
  Formula is_inst = run_true(t_run(isrefl, {t_var(wv), endpoint_plus, t_var(yv)}));
  Formula refl_branch = f_and(f_eq(tag, t_num(uint64_t(1))), f_and(chain_ok, is_inst));

  Formula body = f_or(ax_branch, refl_branch);
  Formula fixed = diagonal_fixed_point(f_exists(uv, body), wv);
  if (!is_sigma1_shaped(fixed))
    throw ProgressionError("build_ax_notation: fixed point is not Sigma_1-shaped");
  return fixed;
}

// RFN^a(T) recognizer per the notation's shape; numbers that are neither
// successors nor limits collapse to T itself.
inline Formula rfn_case(const NotationTerm& a, const TheorySpec& t) {
  if (a.shape == NotationTerm::Shape::Other) return t.ax;
  if (!a.number)
    throw ProgressionError("rfn_case: notation has no numeric form");
  Formula axo = build_ax_notation(t);
  return subst(axo, 0, t_num(Val(*a.number)));
}

// ---- the g-map ----

namespace detail {

inline uint64_t eval_code(const EvalContext& ctx, const expr::Program& p, std::vector<Val> args) {
  Val v = eval_program(ctx, p, args);
  if (!v.fits_u64()) throw ProgressionError("g-map: domain code out of range");
  return v.as_u64();
}

inline uint64_t gmap_rec(const OrderPresentation& p, const BigNat& packed, uint64_t x,
                         Registry& reg, const EvalContext& ctx, uint64_t depth);

inline Val gmap_builtin(const EvalContext& ctx, const std::vector<Val>& args);

inline const bool gmap_registered = register_builtin(expr::Op::GMap, &gmap_builtin);

} // namespace detail

inline BigNat pack_presentation(const OrderPresentation& p) {
  std::vector<Val> fields;
  fields.push_back(Val(encode_program_bits(p.leq)));
  auto opt = [&](const std::optional<expr::Program>& q) {
    fields.push_back(q ? Val(encode_program_bits(*q)) : Val(uint64_t(0)));
  };
  opt(p.succ);
  opt(p.limit);
  opt(p.first);
  opt(p.last);
  opt(p.fundseq);
  return encode_seq(fields);
}

inline OrderPresentation unpack_presentation(const BigNat& packed) {
  std::vector<Val> fields = decode_seq(packed);
  if (fields.size() != 6) throw ProgressionError("unpack_presentation: bad field count");
  OrderPresentation p;
  p.leq = decode_program_bits(fields[0].to_big());
  auto opt = [&](const Val& v) -> std::optional<expr::Program> {
    if (v.is_zero()) return std::nullopt;
    return decode_program_bits(v.to_big());
  };
  p.succ = opt(fields[1]);
  p.limit = opt(fields[2]);
  p.first = opt(fields[3]);
  p.last = opt(fields[4]);
  p.fundseq = opt(fields[5]);
  return p;
}

namespace detail {

inline uint64_t gmap_rec(const OrderPresentation& p, const BigNat& packed, uint64_t x,
                         Registry& reg, const EvalContext& ctx, uint64_t depth) {
  if (depth > 4096) throw ProgressionError("g-map recursion too deep");
  if (auto hit = reg.gmap_hit(packed, x)) return *hit;
  if (!p.succ || !p.limit || !p.first || !p.fundseq)
    throw ProgressionError("g-map needs successor, limit, first and fundseq programs");

  uint64_t first_code = eval_code(ctx, *p.first, {});
  uint64_t handle;
  if (x == first_code) {
    // base notation: the number 1 = 2^0, so |base| = 1
    uint64_t zero = reg.intern({Registry::TermShape::Other, BigNat(0), 0, 0});
    handle = reg.intern({Registry::TermShape::Succ, BigNat(0), zero, 0});
  } else if (!eval_program(ctx, *p.limit, {Val(x)}).is_zero()) {
    // limit point: fresh program e with {e}(n) = g(fundseq(x, n)), wrapped in
    // one successor so the denoted ordinal covers x itself
    using namespace expr;
    Program prog{mk(Op::GMap, {cst(Val(packed)), cst(uint64_t(x)), arg(0)})};
    uint64_t e = reg.add_program(prog, Registry::ProgramKind::Handle);
    uint64_t lim = reg.intern({Registry::TermShape::Lim, BigNat(0), 0, e});
    handle = reg.intern({Registry::TermShape::Succ, BigNat(0), lim, 0});
  } else {
    // successor: find the predecessor below x
    std::optional<uint64_t> pred;
    for (uint64_t y = 0; y < x; y++) {
      if (!eval_program(ctx, p.leq, {Val(y), Val(y)}).is_zero() &&
          !eval_program(ctx, *p.succ, {Val(y), Val(x)}).is_zero()) {
        pred = y;
        break;
      }
    }
    if (!pred) throw ProgressionError("g-map: no predecessor for a successor point at code " +
                                      std::to_string(x));
    uint64_t sub = gmap_rec(p, packed, *pred, reg, ctx, depth + 1);
    handle = reg.intern({Registry::TermShape::Succ, BigNat(0), sub, 0});
  }
  reg.gmap_store(packed, x, handle);
  return handle;
}

inline Val gmap_builtin(const EvalContext& ctx, const std::vector<Val>& args) {
  if (!ctx.registry) throw EvalError("gmap: no registry in evaluation context");
  OrderPresentation p = unpack_presentation(args[0].to_big());
  if (!args[1].fits_u64() || !args[2].fits_u64()) throw EvalError("gmap: bad arguments");
  uint64_t x = args[1].as_u64(), n = args[2].as_u64();
  if (!p.fundseq) throw EvalError("gmap: presentation lacks fundamental sequences");
  uint64_t fs = eval_code(ctx, *p.fundseq, {Val(x), Val(n)});
  return Val(gmap_rec(p, args[0].to_big(), fs, *ctx.registry, ctx, 0));
}

} // namespace detail

inline NotationTerm notation_map_g(const OrderPresentation& p, uint64_t x, Registry& reg,
                                   const EvalContext& base_ctx = {}) {
  (void)detail::gmap_registered;
  EvalContext ctx = base_ctx;
  ctx.registry = &reg;
  BigNat packed = pack_presentation(p);
  uint64_t handle = detail::gmap_rec(p, packed, x, reg, ctx, 0);
  return NotationTerm::from_handle(handle, reg);
}

// ---- |a|: CNF evaluation of denoted ordinals ----

// left subtraction: the unique c with a + c = b, for a <= b
inline std::optional<CnfOrdinal> cnf_left_sub(const CnfOrdinal& a, const CnfOrdinal& b) {
  if (b < a) return std::nullopt;
  // walk common terms; at the first difference the rest of b is the answer
  const auto& at = a.terms();
  const auto& bt = b.terms();
  size_t i = 0;
  while (i < at.size() && i < bt.size()) {
    CnfOrdinal ae = at[i].exponent(), be = bt[i].exponent();
    if (ae != be || BigNat::cmp(at[i].coeff, bt[i].coeff) != 0) break;
    i++;
  }
  if (i == at.size()) {
    CnfOrdinal rest;
    for (size_t j = i; j < bt.size(); j++)
      rest = CnfOrdinal::add(rest, CnfOrdinal::mul(CnfOrdinal::omega_pow(bt[j].exponent()),
                                                   CnfOrdinal::finite(bt[j].coeff)));
    return rest;
  }
  // a and b diverge at term i: b's term must dominate with the same exponent
  CnfOrdinal ae = at[i].exponent(), be = bt[i].exponent();
  if (!(ae == be) || BigNat::cmp(at[i].coeff, bt[i].coeff) >= 0) {
    // exponent drop: b's remaining terms absorb a's tail entirely
    CnfOrdinal rest;
    for (size_t j = i; j < bt.size(); j++)
      rest = CnfOrdinal::add(rest, CnfOrdinal::mul(CnfOrdinal::omega_pow(bt[j].exponent()),
                                                   CnfOrdinal::finite(bt[j].coeff)));
    if (CnfOrdinal::add(a, rest) == b) return rest;
    return std::nullopt;
  }
  CnfOrdinal rest = CnfOrdinal::mul(CnfOrdinal::omega_pow(be),
                                    CnfOrdinal::finite(BigNat::sub(bt[i].coeff, at[i].coeff)));
  for (size_t j = i + 1; j < bt.size(); j++)
    rest = CnfOrdinal::add(rest, CnfOrdinal::mul(CnfOrdinal::omega_pow(bt[j].exponent()),
                                                 CnfOrdinal::finite(bt[j].coeff)));
  if (CnfOrdinal::add(a, rest) == b) return rest;
  return std::nullopt;
}

// |a| by recursion; limits take a recognized supremum of {|{e}(n)|} sampled
// up to depth, or unknown. Recognized pattern: beyond a common prefix w the
// samples share a leading exponent with strictly increasing coefficients, so
// the supremum is w + omega^(exponent + 1).
inline std::optional<CnfOrdinal> notation_ordinal(const NotationTerm& a, uint64_t depth,
                                                  Registry& reg, const EvalContext& base_ctx = {},
                                                  uint64_t rec_depth = 0) {
  if (rec_depth > 512) return std::nullopt;
  switch (a.shape) {
    case NotationTerm::Shape::Other:
      return CnfOrdinal();
    case NotationTerm::Shape::Succ: {
      auto s = notation_ordinal(*a.sub, depth, reg, base_ctx, rec_depth + 1);
      if (!s) return std::nullopt;
      return CnfOrdinal::add(*s, CnfOrdinal::finite(1));
    }
    case NotationTerm::Shape::Lim: {
      if (depth < 3) return std::nullopt;
      EvalContext ctx = base_ctx;
      ctx.registry = &reg;
      const Registry::ProgramEntry entry = reg.program(a.e);
      std::vector<CnfOrdinal> samples;
      for (uint64_t n = 0; n < depth; n++) {
        Val v = eval_program(ctx, entry.prog, {Val(n)});
        NotationTerm tn = entry.kind == Registry::ProgramKind::Handle
                              ? NotationTerm::from_handle(v.fits_u64() ? v.as_u64() : 0, reg)
                              : NotationTerm::from_number(v.to_big());
        auto o = notation_ordinal(tn, depth, reg, base_ctx, rec_depth + 1);
        if (!o) return std::nullopt;
        samples.push_back(*o);
      }
      // tail of the samples must strictly increase
      size_t start = samples.size() / 2;
      for (size_t i = start; i + 1 < samples.size(); i++)
        if (!(samples[i] < samples[i + 1])) return std::nullopt;
      // per consecutive pair, the exponent of the first differing CNF term;
      // the supremum lives one power above the highest exponent that keeps
      // changing (seen to change at least twice), with the stable prefix of
      // the later samples in front
      auto diff_exponent = [&](const CnfOrdinal& x, const CnfOrdinal& y) -> CnfOrdinal {
        const auto& xt = x.terms();
        const auto& yt = y.terms();
        for (size_t i = 0; i < yt.size(); i++) {
          if (i >= xt.size()) return yt[i].exponent();
          if (!(xt[i].exponent() == yt[i].exponent())) return yt[i].exponent();
          if (BigNat::cmp(xt[i].coeff, yt[i].coeff) != 0) return yt[i].exponent();
        }
        return CnfOrdinal();
      };
      std::map<std::string, std::pair<CnfOrdinal, uint64_t>> change_counts;
      for (size_t i = start; i + 1 < samples.size(); i++) {
        CnfOrdinal e = diff_exponent(samples[i], samples[i + 1]);
        auto& slot = change_counts[e.to_text()];
        slot.first = e;
        slot.second++;
      }
      // the eventual regime is read off the final pair; transient climbs
      // higher up must have settled by then
      std::optional<CnfOrdinal> eps =
          diff_exponent(samples[samples.size() - 2], samples.back());
      if (change_counts[eps->to_text()].second < 2) return std::nullopt;
      // stable prefix: the part of the last samples strictly above eps
      auto above = [&](const CnfOrdinal& x) {
        CnfOrdinal w;
        for (const auto& t : x.terms()) {
          CnfOrdinal e = t.exponent();
          if (!(*eps < e)) break;
          w = CnfOrdinal::add(w, CnfOrdinal::mul(CnfOrdinal::omega_pow(e),
                                                 CnfOrdinal::finite(t.coeff)));
        }
        return w;
      };
      CnfOrdinal w = above(samples.back());
      if (!(above(samples[samples.size() - 2]) == w)) return std::nullopt;
      for (size_t i = start; i < samples.size(); i++)
        if (w < above(samples[i])) return std::nullopt;
      CnfOrdinal sup = CnfOrdinal::add(
          w, CnfOrdinal::omega_pow(CnfOrdinal::add(*eps, CnfOrdinal::finite(1))));
      // sanity: every sample sits strictly below the recognized supremum
      for (const auto& s : samples)
        if (!(s < sup)) return std::nullopt;
      return sup;
    }
  }
  return std::nullopt;
}

} // namespace wol
