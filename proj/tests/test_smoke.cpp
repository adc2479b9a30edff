#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wol/bignat.hpp>
#include <wol/ordinal.hpp>
#include <wol/parse.hpp>
#include <wol/eval.hpp>
#include <wol/order.hpp>

using namespace wol;

TEST_CASE("bignat basics") {
  BigNat a = BigNat::from_dec("123456789012345678901234567890");
  BigNat b = BigNat::from_dec("987654321");
  CHECK(BigNat::add(a, b).to_dec() == "123456789012345678902222222211");
  BigNat q, r;
  BigNat::divmod(a, b, q, r);
  CHECK(BigNat::add(BigNat::mul(q, b), r) == a);
  CHECK(BigNat::sub(b, a).is_zero());
  CHECK(BigNat::pow_guarded(BigNat(2), BigNat(100), 1 << 20).to_dec() == "1267650600228229401496703205376");
}

TEST_CASE("ordinal arithmetic") {
  CnfOrdinal one = CnfOrdinal::finite(1);
  CnfOrdinal w = CnfOrdinal::omega();
  CHECK(CnfOrdinal::add(one, w) == w);
  CHECK(CnfOrdinal::add(CnfOrdinal::mul(w, CnfOrdinal::finite(2)), one).to_text() == "w\xc2\xb7""2 + 1");
  CHECK(CnfOrdinal::parse("w^(w)\xc2\xb7""2 + w\xc2\xb7""3 + 5").to_text() == "w^(w)\xc2\xb7""2 + w\xc2\xb7""3 + 5");
  CHECK(CnfOrdinal::parse("w^2*1 + 1") < CnfOrdinal::parse("w^3"));
  CHECK(w.fundamental_sequence(3) == CnfOrdinal::finite(3));
}

TEST_CASE("formula parse and print round trip") {
  Formula f = parse_sentence("forall x. exists y. y > x");
  CHECK(print(f) == "forall x0. exists x1. x0 < x1");
  Formula g = parse_sentence(print(f));
  CHECK(formula_eq(f, g));

  Formula nn = parse_sentence("not (exists x. x = 0)");
  CHECK(nn->kind == FormulaKind::Forall);
  CHECK(nn->left->kind == FormulaKind::Lit);
  CHECK(nn->left->neg);
}

TEST_CASE("goedel round trip") {
  Formula f = parse_sentence("0 = S(0) or S(0) = S(0)");
  CHECK(formula_eq(goedel_decode(goedel_encode(f)), f));
  CHECK(goedel_encode(parse_sentence("0 = 0")) != goedel_encode(parse_sentence("0 = S(0)")));
}

TEST_CASE("bounded evaluation") {
  CHECK(evaluate(parse_sentence("0 = 0"), 0).is_true());
  CHECK(evaluate(parse_sentence("exists x. x + x = S(S(S(S(0))))"), 10).is_true());
  CHECK(evaluate(parse_sentence("forall x. exists y. y > x"), 10).is_unknown());
  CHECK(evaluate(parse_sentence("forall x. x < 3 or 2 < x"), 10).is_unknown());
  CHECK(evaluate(parse_sentence("forall x. not x < 3 or x < 5"), 0).is_true());
  CHECK(evaluate(parse_sentence("exists x. x < 4 and x + x = S(S(S(0))) * 3"), 0).is_false());
}

TEST_CASE("expr language") {
  EvalContext ctx;
  expr::Program p = expr::parse_program("(add (arg 0) (const 2))");
  CHECK(eval_program(ctx, p, {Val(uint64_t(40))}) == Val(uint64_t(42)));
  CHECK(expr::to_sexpr(p) == "(add (arg 0) (const 2))");

  expr::Program sum = expr::parse_program("(iter (arg 0) (const 0) (add (arg 1) (arg 0)))");
  CHECK(eval_program(ctx, sum, {Val(uint64_t(5))}) == Val(uint64_t(10)));

  expr::Program pairs = expr::parse_program("(fst (pair (const 7) (const 9)))");
  CHECK(eval_program(ctx, pairs, {}) == Val(uint64_t(7)));
}

TEST_CASE("error paths") {
  // decode fails on non-codes
  CHECK_THROWS_AS(goedel_decode(BigNat(0)), CodecError);
  bool some_bad = false;
  for (uint64_t c = 1; c < 40; c++) {
    try {
      goedel_decode(BigNat(c));
    } catch (const CodecError&) {
      some_bad = true;
    }
  }
  CHECK(some_bad);

  // evaluate rejects open formulas and Skolem symbols
  CHECK_THROWS_AS(evaluate(parse_formula("x0 = 0", true), 4), FreeVariableError);

  // more than one distinguished variable is ambiguous
  CHECK_THROWS_AS(diagonal_fixed_point(parse_formula("x0 = x1", true)), std::invalid_argument);

  // fundamental sequences demand a limit
  CHECK_THROWS_AS(CnfOrdinal::finite(3).fundamental_sequence(1), std::domain_error);
  CHECK_THROWS_AS(CnfOrdinal().fundamental_sequence(1), std::domain_error);

  // a runaway comparison program hits the fuel policy loudly
  expr::Program runaway = expr::parse_program(
      "(minbelow (shl (const 1) (const 40)) (eq (arg 0) (shl (const 1) (const 39))))");
  OrderPresentation bad;
  bad.leq = runaway;
  bad.fuel.step_budget = 10000;
  CHECK_THROWS_AS(explore_prefix(bad, 2), FuelExhausted);
}

TEST_CASE("diagonal fixed point") {
  Formula f = parse_formula("x0 = x0", true);
  Formula d = diagonal_fixed_point(f, 0);
  CHECK(free_vars(d).empty());
  for (uint64_t fuel : {0, 1, 5}) {
    CHECK(evaluate(d, fuel).is_true());
  }
  Formula neg = parse_formula("not x0 = x0", true);
  Formula dn = diagonal_fixed_point(neg, 0);
  CHECK(evaluate(dn, 3).is_false());
}
