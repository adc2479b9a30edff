#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wol/stages.hpp>
#include <wol/templates.hpp>

using namespace wol;

// R(y,u,v) = (v >= u) and (y in mask): the canonical monotone matrix shape
static expr::Program mask_matrix(const BigNat& mask) {
  using namespace expr;
  NodeRef v_ge_u = mk(Op::Not, {mk(Op::Lt, {arg(2), arg(1)})});
  NodeRef in_mask = mk(Op::Mod, {mk(Op::Shr, {cst(Val(mask)), arg(0)}), cst(uint64_t(2))});
  return Program{mk(Op::And, {v_ge_u, in_mask})};
}

static BigNat mask_of(std::initializer_list<uint64_t> xs) {
  BigNat m;
  for (uint64_t x : xs) m.set_bit(x);
  return m;
}

static BigNat complement_mask(const BigNat& m, uint64_t upto) {
  BigNat out;
  for (uint64_t i = 0; i < upto; i++)
    if (!m.bit(i)) out.set_bit(i);
  return out;
}

TEST_CASE("limit lemma: evens stabilize") {
  BigNat evens = complement_mask(mask_of({1, 3, 5, 7, 9}), 64);
  ApproxSequence a = limit_decompose(mask_matrix(evens), mask_matrix(complement_mask(evens, 64)));
  EvalContext ctx;
  BigNat a40 = a.at(40, ctx);
  for (uint64_t y = 0; y < 10; y++)
    CHECK(a40.bit(y) == (y % 2 == 0));
}

TEST_CASE("limit lemma: empty set stays empty") {
  using namespace expr;
  expr::Program never{cst(uint64_t(0))};
  expr::Program always{cst(uint64_t(1))};
  ApproxSequence a = limit_decompose(never, always);
  EvalContext ctx;
  CHECK(a.at(20, ctx).is_zero());
  CHECK(a.at(33, ctx).is_zero());
}

TEST_CASE("limit lemma: age bookkeeping matches brute force") {
  BigNat target = mask_of({0, 3, 4, 7});
  expr::Program r0 = mask_matrix(target);
  expr::Program r1 = mask_matrix(complement_mask(target, 64));
  ApproxSequence a = limit_decompose(r0, r1);
  EvalContext ctx;
  for (uint64_t i : {5, 12, 23}) {
    BigNat ai = a.at(i, ctx);
    for (uint64_t y = 0; y < i; y++) {
      bool expected = age_host(r0, i, y, ctx) > age_host(r1, i, y, ctx);
      CHECK(ai.bit(y) == expected);
    }
  }
  // hand case: y = 3 enters every B_j once visible (j > 3) and no C_j,
  // so age_B(9,3) = 9 - 3 > 0 = age_C(9,3) and 3 lands in A_9
  BigNat ai = a.at(9, ctx);
  bool all_b = true, no_c = true;
  for (uint64_t j = 4; j <= 9; j++)
    if (!approx_member_host(r0, j, 3, ctx)) all_b = false;
  for (uint64_t j = 0; j <= 9; j++)
    if (approx_member_host(r1, j, 3, ctx)) no_c = false;
  CHECK(all_b);
  CHECK(no_c);
  CHECK(age_host(r0, 9, 3, ctx) == 6);
  CHECK(age_host(r1, 9, 3, ctx) == 0);
  CHECK(ai.bit(3));
}

TEST_CASE("limit_to_stages extracts chains and drops cycles") {
  // constant relation: chain 0 < 1 < 2
  BigNat chain;
  for (uint64_t a = 0; a < 3; a++)
    for (uint64_t b = a; b < 3; b++) chain.set_bit(pair_code(a, b));
  bool exact = false;
  FiniteOrder f = extract_stage_order(chain, &exact);
  CHECK(exact);
  CHECK(f.elems == std::vector<uint64_t>{0, 1, 2});
  CHECK(f.leq(0, 2));
  CHECK(!f.leq(2, 0));

  // 3-cycle 3->4->5->3 plus the chain: extraction keeps the chain
  BigNat messy = chain;
  for (uint64_t x : {3, 4, 5}) messy.set_bit(pair_code(x, x));
  messy.set_bit(pair_code(3, 4));
  messy.set_bit(pair_code(4, 5));
  messy.set_bit(pair_code(5, 3));
  FiniteOrder g = extract_stage_order(messy, &exact);
  CHECK(exact);
  CHECK(g.elems == std::vector<uint64_t>{0, 1, 2});

  // brute-force oracle on <= 6 elements: maximum-cardinality linearly
  // ordered subset with lexicographically least element list
  auto oracle = [&](const BigNat& rel, std::vector<uint64_t> universe) {
    std::vector<uint64_t> best;
    for (uint64_t mask = 0; mask < (1ull << universe.size()); mask++) {
      std::vector<uint64_t> sub;
      for (size_t b = 0; b < universe.size(); b++)
        if ((mask >> b) & 1) sub.push_back(universe[b]);
      bool linear = true;
      for (uint64_t x : sub)
        for (uint64_t y : sub) {
          if (x == y) continue;
          if (rel.bit(pair_code(x, y)) == rel.bit(pair_code(y, x))) linear = false;
          for (uint64_t z : sub)
            if (rel.bit(pair_code(x, y)) && rel.bit(pair_code(y, z)) && !rel.bit(pair_code(x, z)))
              linear = false;
        }
      if (!linear) continue;
      if (sub.size() > best.size() || (sub.size() == best.size() && sub < best)) best = sub;
    }
    return best;
  };
  CHECK(oracle(messy, {0, 1, 2, 3, 4, 5}) == g.elems);
}

TEST_CASE("jumpinv1 machine on a stable single point") {
  // constant stage: the one-element order {0}
  using namespace expr;
  BigNat point;
  point.set_bit(pair_code(0, 0));
  StageSequence st{Program{cst(Val(point))}, false};
  OrderPresentation p = jump_inv_omega_times(st);
  EvalContext ctx;
  FiniteOrder f = explore_prefix(p, 30, &ctx);
  CHECK(f.elems.size() >= 10);
  // snapshots at two bounds: consistent with omega
  PrefixEvidence ev;
  ev.snapshots.push_back(explore_prefix(p, 12, &ctx));
  ev.snapshots.push_back(explore_prefix(p, 30, &ctx));
  CHECK(prefix_iso_check(ev, PrefixTemplate::omega()));
  // successor chain total on settled elements: each element except the last
  // explored has exactly one successor among explored
  const MachineState& ms = machine_state(MachineRun::JumpInv1, st, 30, ctx);
  CHECK(ms.snapshots[30].size() > 10);
  for (size_t i = 0; i + 1 < ms.snapshots[30].size(); i++) {
    uint64_t x = ms.snapshots[30][i], y = ms.snapshots[30][i + 1];
    CHECK(ms.succ_snaps[30].count({x, y}));
  }
}

TEST_CASE("jumpinv1 machine on a stable 2-chain") {
  using namespace expr;
  BigNat one, two;
  one.set_bit(pair_code(0, 0));
  for (uint64_t a = 0; a < 2; a++)
    for (uint64_t b = a; b < 2; b++) two.set_bit(pair_code(a, b));
  // stage 0 shows {0}, every later stage the full chain {0 < 1}
  StageSequence st{Program{mk(Op::If, {mk(Op::Eq, {arg(0), cst(uint64_t(0))}),
                                       cst(Val(one)), cst(Val(two))})}, false};
  OrderPresentation p = jump_inv_omega_times(st);
  EvalContext ctx;
  const MachineState& ms = machine_state(MachineRun::JumpInv1, st, 30, ctx);
  // two blocks, every element of block 0 below every element of block 1
  const auto& order = ms.snapshots[30];
  const auto& labels = ms.label_snaps[30];
  bool seen1 = false;
  for (uint64_t x : order) {
    if (labels.at(x) == 1) seen1 = true;
    else CHECK(!seen1);  // once in block 1, never back to block 0
  }
  CHECK(seen1);
  // labels only move left, blocks only grow rightward after anchoring
  for (const auto& ev : ms.trace)
    if (ev.kind == "relabel") CHECK(ev.c < ev.b);
  // omega * 2 template against two snapshots
  PrefixEvidence evd;
  evd.snapshots.push_back(explore_prefix(p, 14, &ctx));
  evd.snapshots.push_back(explore_prefix(p, 30, &ctx));
  CHECK(prefix_iso_check(evd, PrefixTemplate::omega_times(2)));
}

TEST_CASE("jumpinv1 retraction fires case (2)") {
  using namespace expr;
  // stages grow to the chain 0 < 1 < 2, then element 1 retracts at stage 5
  auto chain_upto = [](uint64_t top) {
    BigNat rel;
    for (uint64_t a = 0; a <= top; a++)
      for (uint64_t b = a; b <= top; b++) rel.set_bit(pair_code(a, b));
    return rel;
  };
  BigNat reduced;
  reduced.set_bit(pair_code(0, 0));
  reduced.set_bit(pair_code(2, 2));
  reduced.set_bit(pair_code(0, 2));
  NodeRef prog = mk(Op::If, {mk(Op::Eq, {arg(0), cst(uint64_t(0))}), cst(Val(chain_upto(0))),
                 mk(Op::If, {mk(Op::Eq, {arg(0), cst(uint64_t(1))}), cst(Val(chain_upto(1))),
                 mk(Op::If, {mk(Op::Lt, {arg(0), cst(uint64_t(5))}), cst(Val(chain_upto(2))),
                             cst(Val(reduced))})})});
  StageSequence st{Program{prog}, false};
  EvalContext ctx;
  const MachineState& ms = machine_state(MachineRun::JumpInv1, st, 12, ctx);
  bool saw_break = false, saw_relabel = false, saw_seal = false;
  for (const auto& ev : ms.trace) {
    if (ev.kind == "break") saw_break = true;
    if (ev.kind == "relabel") saw_relabel = true;
    if (ev.kind == "seal") saw_seal = true;
  }
  CHECK(saw_break);
  CHECK(saw_relabel);
  CHECK(saw_seal);
  // the machine still presents a linear order
  OrderPresentation p = jump_inv_omega_times(st);
  explore_prefix(p, 16, &ctx);
}

TEST_CASE("jumpinv2 machine copies a stable order") {
  using namespace expr;
  // stages grow to 0 < 1 < 2 with full successor information and stay there
  auto upto = [](uint64_t top) {
    BigNat rel, succ;
    for (uint64_t a = 0; a <= top; a++)
      for (uint64_t b = a; b <= top; b++) rel.set_bit(pair_code(a, b));
    for (uint64_t a = 0; a < top; a++) succ.set_bit(pair_code(a, a + 1));
    return std::pair<BigNat, BigNat>{rel, succ};
  };
  NodeRef packed = cst(uint64_t(0));
  for (uint64_t top = 3; top-- > 0;) {
    auto [rel, succ] = upto(top);
    NodeRef here = cst(Val(pack_stage(rel, succ)));
    packed = top == 2 ? here
                      : mk(Op::If, {mk(Op::Eq, {arg(0), cst(top)}), here, packed});
  }
  StageSequence st{Program{packed}, true};
  OrderPresentation p = jump_inv_copy(st);
  EvalContext ctx;
  FiniteOrder f = explore_prefix(p, 24, &ctx);
  CHECK(f.elems.size() == 3);
  CHECK(f.sorted().front() == 0);
}

TEST_CASE("jumpinv2 blocks stay finite and non-empty") {
  using namespace expr;
  // approximate omega*2 over a growing prefix with sealed successors:
  // stage s shows elements 0..min(s,6) of the final order 0<1<...<6
  // (a finite snapshot family; blocks anchor and then stop growing)
  BigNat rels[8], succs[8];
  for (uint64_t s = 0; s < 8; s++) {
    uint64_t top = std::min<uint64_t>(s, 6);
    for (uint64_t a = 0; a <= top; a++)
      for (uint64_t b = a; b <= top; b++) rels[s].set_bit(pair_code(a, b));
    for (uint64_t a = 0; a < top; a++) succs[s].set_bit(pair_code(a, a + 1));
  }
  NodeRef prog = cst(Val(pack_stage(rels[7], succs[7])));
  for (uint64_t s = 7; s-- > 0;) {
    prog = mk(Op::If, {mk(Op::Le, {arg(0), cst(s)}),
                       cst(Val(pack_stage(rels[s], succs[s]))), prog});
  }
  StageSequence st{Program{prog}, true};
  EvalContext ctx;
  const MachineState& ms = machine_state(MachineRun::JumpInv2, st, 40, ctx);
  // every anchored block is non-empty and stops growing once its successor
  // pair is sealed in the stages
  std::map<uint64_t, uint64_t> block_size;
  for (const auto& [x, l] : ms.label_snaps[40]) block_size[l]++;
  for (uint64_t a = 0; a <= 6; a++) {
    CHECK(block_size[a] >= 1);
    CHECK(block_size[a] < 40);
  }
}

TEST_CASE("stage-max queries are stable and labels stay surjective") {
  using namespace expr;
  BigNat one, two;
  one.set_bit(pair_code(0, 0));
  for (uint64_t a = 0; a < 2; a++)
    for (uint64_t b = a; b < 2; b++) two.set_bit(pair_code(a, b));
  StageSequence st{Program{mk(Op::If, {mk(Op::Eq, {arg(0), cst(uint64_t(0))}),
                                       cst(Val(one)), cst(Val(two))})}, false};
  EvalContext ctx;
  uint64_t bound = 14;
  const MachineState& ms = machine_state(MachineRun::JumpInv1, st, 2 * bound, ctx);
  // comparison answered at stage max{x,y} equals comparison at 2x the bound
  auto pos_in = [](const std::vector<uint64_t>& order, uint64_t x) {
    return std::find(order.begin(), order.end(), x) - order.begin();
  };
  for (uint64_t x = 0; x < bound; x++)
    for (uint64_t y = 0; y < bound; y++) {
      uint64_t m = std::max(x, y);
      const auto& snap = ms.snapshots[m];
      const auto& late = ms.snapshots[2 * bound];
      bool in_m = std::count(snap.begin(), snap.end(), x) &&
                  std::count(snap.begin(), snap.end(), y);
      if (!in_m) continue;
      bool le_m = pos_in(snap, x) <= pos_in(snap, y);
      bool le_late = pos_in(late, x) <= pos_in(late, y);
      CHECK(le_m == le_late);
    }
  // at every stage the labeling is order-preserving and surjective
  for (uint64_t s = 1; s <= 2 * bound; s++) {
    const auto& order = ms.snapshots[s];
    const auto& labels = ms.label_snaps[s];
    FiniteOrder stage = st.stage(s, ctx);
    std::set<uint64_t> hit;
    uint64_t prev = 0;
    bool first = true;
    for (uint64_t x : order) {
      uint64_t l = labels.at(x);
      hit.insert(l);
      if (!first) CHECK(stage.leq(prev, l));
      prev = l;
      first = false;
    }
    CHECK(hit.size() == stage.elems.size());
  }
}

TEST_CASE("oscillating elements never stabilize") {
  using namespace expr;
  // element 5 flips in and out forever; elements 0..1 stay put
  BigNat base, with5;
  for (uint64_t a = 0; a < 2; a++)
    for (uint64_t b = a; b < 2; b++) base.set_bit(pair_code(a, b));
  with5 = base;
  with5.set_bit(pair_code(5, 5));
  with5.set_bit(pair_code(0, 5));
  with5.set_bit(pair_code(1, 5));
  Program prog{mk(Op::If, {mk(Op::Eq, {mk(Op::Mod, {arg(0), cst(uint64_t(2))}), cst(uint64_t(0))}),
                           cst(Val(base)), cst(Val(with5))})};
  ApproxSequence approx{prog};
  LimitStageSequence stages = limit_to_stages(approx);
  EvalContext ctx;
  int in = 0, out = 0;
  for (uint64_t i = 1; i < 20; i++) {
    FiniteOrder f = stages.stage(i, ctx);
    CHECK(f.contains(0));
    CHECK(f.contains(1));
    (f.contains(5) ? in : out)++;
  }
  CHECK(in >= 8);   // oscillation shows in the stage trace
  CHECK(out >= 8);  // and 5 is in no stable claim
  // consecutive stages remain locally coherent on the stable part
  for (uint64_t i = 1; i < 10; i++)
    CHECK(locally_coherent_pair(stages.stage(i, ctx), stages.stage(i + 1, ctx)) ==
          (true));
}

TEST_CASE("sentence_order with add_top") {
  EvalContext ctx;
  // true Pi_1 sentence at n = 0: a singleton; with a top added, a 2-chain
  OrderPresentation l = sentence_order(parse_formula("forall y. y = y", true), 0);
  FiniteOrder f = explore_prefix(l, 30, &ctx);
  CHECK(f.elems == std::vector<uint64_t>{0});
  FiniteOrder g = explore_prefix(add_top(l), 30, &ctx);
  CHECK(g.elems.size() == 2);
  CHECK(g.sorted().back() == 0);  // the added top lives at code 0
}

TEST_CASE("dichotomy family at n = 0") {
  EvalContext ctx;
  // phi(i) = forall y. y = y: true everywhere; the order is the single point
  DichotomyFamily good = ash_knight_family(parse_formula("forall y. y = y", true), 0);
  FiniteOrder f = explore_prefix(good.at(3), 40, &ctx);
  CHECK(f.elems == std::vector<uint64_t>{0});

  // phi(i) = forall y. not y = y: false; prefixes densify
  DichotomyFamily bad = ash_knight_family(parse_formula("forall y. not y = y", true), 0);
  PrefixEvidence ev;
  ev.snapshots.push_back(explore_prefix(bad.at(0), 10, &ctx));
  ev.snapshots.push_back(explore_prefix(bad.at(0), 40, &ctx));
  CHECK(ev.snapshots[0].elems.size() >= 3);
  CHECK(prefix_iso_check(ev, PrefixTemplate::omega_pow_eta(0)));
  // and it is not consistent with omega: new elements appear in the middle
  CHECK(!prefix_iso_check(ev, PrefixTemplate::omega()));
}

TEST_CASE("dichotomy family at n = 1") {
  EvalContext ctx;
  DichotomyFamily good = ash_knight_family(parse_formula("forall y. y = y", true), 1);
  OrderPresentation p = good.at(0);
  PrefixEvidence ev;
  ev.snapshots.push_back(explore_prefix(p, 20, &ctx));
  ev.snapshots.push_back(explore_prefix(p, 45, &ctx));
  CHECK(ev.snapshots[1].elems.size() >= 6);
  CHECK(prefix_iso_check(ev, PrefixTemplate::omega()));
}
