#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wol/progressions.hpp>
#include <wol/parse.hpp>

using namespace wol;

static TheorySpec tiny_theory() {
  return theory_from_axioms("tiny", {parse_sentence("0 = 0"),
                                     parse_sentence("forall x. x + 0 = x")});
}

TEST_CASE("sigma1 shape checker") {
  CHECK(is_sigma1_shaped(parse_formula("exists p. p = x0", true)));
  CHECK(is_sigma1_shaped(parse_formula("x0 = 0", true)));
  CHECK(is_sigma1_shaped(parse_formula("exists p. (exists q. q < p and q = x0)", true)));
  CHECK(!is_sigma1_shaped(parse_formula("exists p. exists q. q = p + x0", true)));
  CHECK(!is_sigma1_shaped(parse_formula("forall p. p = p + x0", true)));
}

TEST_CASE("reflection instances render and round trip") {
  TheorySpec t = tiny_theory();
  Formula phi = parse_formula("x0 = x0", true);
  Formula inst = render_reflection_instance(t, phi);
  CHECK(free_vars(inst).empty());
  CHECK(inst->kind == FormulaKind::Forall);
  CHECK(formula_eq(parse_sentence(print(inst)), inst));

  // two theories differ only inside the provability atom
  TheorySpec t2 = theory_from_axioms("other", {parse_sentence("0 = 0")});
  Formula inst2 = render_reflection_instance(t2, phi);
  CHECK(!formula_eq(inst, inst2));
  CHECK(is_reflection_instance_over(t.ax, goedel_encode(inst)));
  CHECK(!is_reflection_instance_over(t.ax, goedel_encode(inst2)));
  CHECK(is_reflection_instance_over(t2.ax, goedel_encode(inst2)));
}

TEST_CASE("Ax progression over the 2-chain") {
  TheorySpec t = tiny_theory();
  FiniteOrder two;
  two.elems = {0, 1};
  two.le[{0, 0}] = two.le[{0, 1}] = two.le[{1, 1}] = true;
  two.le[{1, 0}] = false;
  OrderPresentation p = lift_finite(two);
  Formula ax = build_ax_progression(t, p);
  CHECK(is_sigma1_shaped(ax));
  CHECK(free_vars(ax) == std::set<uint64_t>{0, 1});

  // seeded axiom recognized at stage 0
  Formula axiom0 = parse_sentence("0 = 0");
  Formula probe = subst(subst(ax, 0, t_num(uint64_t(0))), 1,
                        t_num(Val(goedel_encode(axiom0))));
  CHECK(evaluate(probe, 4).is_true());

  // stage-0 reflection instance recognized at stage 1: the witness is
  // u = <1, 0> = 2, so fuel 8 is plenty
  Formula rec0 = ax_progression_at(ax, 0);
  Formula rho = render_reflection_instance(rec0, parse_formula("x0 = x0", true));
  Formula probe1 = subst(subst(ax, 0, t_num(uint64_t(1))), 1,
                         t_num(Val(goedel_encode(rho))));
  CHECK(evaluate(probe1, 8).is_true());

  // and not recognized at stage 0 (nothing strictly below)
  Formula probe0 = subst(subst(ax, 0, t_num(uint64_t(0))), 1,
                         t_num(Val(goedel_encode(rho))));
  CHECK(!evaluate(probe0, 8).is_true());

  // empty order: everything probes false
  Formula ax_empty = build_ax_progression(t, empty_presentation());
  Formula probe_e = subst(subst(ax_empty, 0, t_num(uint64_t(0))), 1,
                          t_num(Val(goedel_encode(axiom0))));
  CHECK(evaluate(probe_e, 6).is_false());
}

TEST_CASE("fixed point unfolds to its own code") {
  TheorySpec t = tiny_theory();
  FiniteOrder two;
  two.elems = {0, 1};
  two.le[{0, 0}] = two.le[{0, 1}] = two.le[{1, 1}] = true;
  two.le[{1, 0}] = false;
  OrderPresentation p = lift_finite(two);
  Formula ax = build_ax_progression(t, p);
  // manual unfold: IsRefl receives exactly the code of ax
  auto payload = find_subnum_payload(ax);
  REQUIRE(payload.has_value());
  BigNat gcode = payload->first;
  Formula g = goedel_decode(gcode);
  Formula delta = subst(g, payload->second, t_num(Val(gcode)));
  CHECK(formula_eq(delta, ax));
}

TEST_CASE("TI instance rendering") {
  OrderPresentation p = omega_presentation();
  Formula phi = parse_formula("x0 = x0", true);
  Formula ti = render_ti_instance(p, phi);
  CHECK(free_vars(ti).empty());
  CHECK(formula_eq(parse_sentence(print(ti)), ti));
  Formula ti_below = render_ti_instance(p, phi, Val(uint64_t(3)));
  CHECK(!formula_eq(ti, ti_below));

  // 1-element order with a decidable-true phi: the instance probes true
  FiniteOrder one;
  one.elems = {0};
  one.le[{0, 0}] = true;
  Formula ti1 = render_ti_instance(lift_finite(one), phi);
  CHECK(evaluate(ti1, 3).is_true());
}

TEST_CASE("notation shapes from numbers") {
  NotationTerm zero = NotationTerm::from_number(BigNat(0));
  CHECK(zero.shape == NotationTerm::Shape::Other);

  NotationTerm one = NotationTerm::from_number(BigNat(1));
  CHECK(one.shape == NotationTerm::Shape::Succ);

  NotationTerm four = NotationTerm::from_number(BigNat(4));
  CHECK(four.shape == NotationTerm::Shape::Succ);

  NotationTerm lim = NotationTerm::from_number(BigNat(75));  // 3 * 5^2
  CHECK(lim.shape == NotationTerm::Shape::Lim);
  CHECK(lim.e == 2);

  NotationTerm other = NotationTerm::from_number(BigNat(6));
  CHECK(other.shape == NotationTerm::Shape::Other);

  Registry reg;
  CHECK(notation_ordinal(zero, 8, reg) == CnfOrdinal());
  CHECK(notation_ordinal(one, 8, reg) == CnfOrdinal::finite(1));
  CHECK(notation_ordinal(four, 8, reg) == CnfOrdinal::finite(3));  // 2^(2^(2^0))
}

TEST_CASE("rfn_case over notations") {
  TheorySpec t = tiny_theory();
  Registry reg;
  EvalContext ctx;
  ctx.registry = &reg;

  // case 3: plain numbers collapse to T
  NotationTerm other = NotationTerm::from_number(BigNat(6));
  CHECK(formula_eq(rfn_case(other, t), t.ax));

  // case 1: a = 2 = 2^1; the recognizer accepts instances over RFN^1(T)
  Formula axo = build_ax_notation(t);
  CHECK(is_sigma1_shaped(axo));
  Formula rec1 = subst(axo, 0, t_num(uint64_t(1)));
  Formula rho = render_reflection_instance(rec1, parse_formula("x0 = x0", true));
  Formula rec2 = rfn_case(NotationTerm::from_number(BigNat(2)), t);
  Formula probe = subst(rec2, the_free_var(rec2, "probe"), t_num(Val(goedel_encode(rho))));
  EvalContext pctx;
  pctx.registry = &reg;
  uint64_t fuel = 1024;
  CHECK(evaluate(probe, fuel, pctx).is_true());

  // a known axiom of T is recognized everywhere
  Formula probe_ax = subst(rec2, the_free_var(rec2, "probe"),
                           t_num(Val(goedel_encode(parse_sentence("0 = 0")))));
  CHECK(evaluate(probe_ax, 8, pctx).is_true());

  // case 2: a = 3 * 5^e with a constant registry program
  using namespace expr;
  uint64_t e = reg.add_program(Program{cst(uint64_t(2))}, Registry::ProgramKind::Number);
  BigNat a_lim = BigNat(3).mul_small(5);  // 3 * 5^1, e must be 1
  (void)a_lim;
  NotationTerm lim = NotationTerm::from_number(BigNat(3).mul_small(5));
  CHECK(lim.e == 1);
  // register a second program so index 1 resolves: {1}(n) = 2 constant
  uint64_t e1 = reg.add_program(Program{cst(uint64_t(2))}, Registry::ProgramKind::Number);
  (void)e;
  (void)e1;
  Formula rec_lim = rfn_case(lim, t);
  Formula rho2 = render_reflection_instance(subst(axo, 0, t_num(uint64_t(2))),
                                            parse_formula("x0 = x0", true));
  Formula probe2 = subst(rec_lim, the_free_var(rec_lim, "probe"),
                         t_num(Val(goedel_encode(rho2))));
  CHECK(evaluate(probe2, 8192, pctx).is_true());
}

TEST_CASE("g-map over L' of small chains") {
  Registry reg;
  EvalContext ctx;
  ctx.registry = &reg;

  auto chain_presentation = [&](uint64_t k) {
    FiniteOrder f;
    for (uint64_t i = 0; i < k; i++) f.elems.push_back(i);
    for (uint64_t a = 0; a < k; a++)
      for (uint64_t b = 0; b < k; b++) f.le[{a, b}] = a <= b;
    return k == 0 ? empty_presentation() : lift_finite(f);
  };

  for (uint64_t k = 0; k <= 3; k++) {
    OrderPresentation lp = omega_times_one_plus_plus_one(chain_presentation(k));
    NotationTerm g_inf = notation_map_g(lp, 0, reg, ctx);  // code 0 is infinity
    CHECK(g_inf.shape == NotationTerm::Shape::Succ);
    auto o = notation_ordinal(g_inf, 8, reg, ctx);
    REQUIRE(o.has_value());
    CnfOrdinal expected = CnfOrdinal::add(
        CnfOrdinal::mul(CnfOrdinal::omega(), CnfOrdinal::finite(k + 1)), CnfOrdinal::finite(1));
    CHECK(*o == expected);
  }

  // first element maps to the base notation of ordinal 1
  OrderPresentation lp1 = omega_times_one_plus_plus_one(chain_presentation(1));
  EvalContext c2;
  c2.registry = &reg;
  uint64_t first_code = eval_program(c2, *lp1.first, {}).as_u64();
  NotationTerm base = notation_map_g(lp1, first_code, reg, c2);
  CHECK(notation_ordinal(base, 8, reg, c2) == CnfOrdinal::finite(1));

  // g is well-defined on explored successor points: |g(x)| equals the weak
  // initial segment type
  FiniteOrder pre = explore_prefix(lp1, 12, &c2);
  std::vector<uint64_t> sorted = pre.sorted();
  for (size_t pos = 0; pos < sorted.size() && pos < 4; pos++) {
    if (sorted[pos] == 0) continue;  // infinity handled above
    NotationTerm gx = notation_map_g(lp1, sorted[pos], reg, c2);
    auto o = notation_ordinal(gx, 8, reg, c2);
    REQUIRE(o.has_value());
    CHECK(*o == CnfOrdinal::finite(pos + 1));
  }
}
