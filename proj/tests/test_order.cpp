#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wol/embed.hpp>
#include <wol/kb.hpp>
#include <wol/templates.hpp>

using namespace wol;

TEST_CASE("explore_prefix basics") {
  EvalContext ctx;
  FiniteOrder w4 = explore_prefix(omega_presentation(), 4, &ctx);
  CHECK(w4.elems == std::vector<uint64_t>{0, 1, 2, 3});
  CHECK(w4.sorted() == std::vector<uint64_t>{0, 1, 2, 3});
  CHECK(w4.succ.count({1, 2}));

  CHECK(explore_prefix(empty_presentation(), 9, &ctx).elems.empty());

  // eta: code 0 first, dyadics dense and consistent with rational order
  FiniteOrder eta = explore_prefix(eta_presentation(), 16, &ctx);
  CHECK(eta.sorted().front() == 0);
  // oracle: code n >= 1 denotes (2*(n - 2^(k-1)) + 1) / 2^k for k = bitlen(n)
  auto frac = [](uint64_t n) {
    int k = 64 - __builtin_clzll(n);
    double num = 2.0 * (n - (1ull << (k - 1))) + 1.0;
    return num / double(1ull << k);
  };
  for (uint64_t a = 1; a < 16; a++)
    for (uint64_t b = 1; b < 16; b++)
      CHECK(eta.leq(a, b) == (frac(a) <= frac(b)));
  // density witness on the explored prefix: between 1/2 and 3/4 sits 5/8
  CHECK(eta.lt(1, 6));
  CHECK(eta.lt(6, 3));
}

TEST_CASE("add_top") {
  EvalContext ctx;
  FiniteOrder f = explore_prefix(add_top(omega_presentation()), 10, &ctx);
  CHECK(f.elems.size() == 10);
  std::vector<uint64_t> s = f.sorted();
  CHECK(s.back() == 0);  // the new top lives at code 0
  for (size_t i = 0; i + 2 < s.size(); i++) CHECK(s[i] < s[i + 1]);

  // L' of the empty order explored: an omega-prefix with infinity on top
  FiniteOrder g = explore_prefix(omega_times_one_plus_plus_one(empty_presentation()), 18, &ctx);
  std::vector<uint64_t> gs = g.sorted();
  REQUIRE(gs.size() >= 4);
  CHECK(gs.back() == 0);
  CHECK(prefix_iso_check(g, PrefixTemplate::omega_times(2)));
}

TEST_CASE("L' structure programs agree with its comparison") {
  EvalContext ctx;
  FiniteOrder one;
  one.elems = {0};
  one.le[{0, 0}] = true;
  OrderPresentation lp = omega_times_one_plus_plus_one(lift_finite(one));
  FiniteOrder f = explore_prefix(lp, 40, &ctx);
  REQUIRE(f.elems.size() >= 6);

  // successor program consistent with comparison: S(x,y) means adjacent
  for (const auto& [x, y] : f.succ) {
    CHECK(f.lt(x, y));
    for (uint64_t z : f.elems) CHECK(!(f.lt(x, z) && f.lt(z, y)));
  }
  // limit points are exactly the explored elements with no explored
  // successor-predecessor, except the first element
  uint64_t first = eval_program(ctx, *lp.first, {}).as_u64();
  for (uint64_t x : f.elems) {
    bool is_lim = !eval_program(ctx, *lp.limit, {Val(x)}).is_zero();
    bool has_pred = false;
    for (uint64_t y : f.elems)
      if (f.succ.count({y, x})) has_pred = true;
    if (is_lim) CHECK(!has_pred);
    if (x != first && !has_pred) CHECK(is_lim);
  }
  // fundamental sequences strictly increase and stay below their limit
  for (uint64_t x : f.elems) {
    if (eval_program(ctx, *lp.limit, {Val(x)}).is_zero()) continue;
    std::optional<uint64_t> prev;
    for (uint64_t n = 1; n < 6; n++) {
      uint64_t fs = eval_program(ctx, *lp.fundseq, {Val(x), Val(n)}).as_u64();
      CHECK(!eval_program(ctx, lp.leq, {Val(x), Val(fs)}).is_zero() == false);
      if (prev) {
        CHECK(!eval_program(ctx, lp.leq, {Val(*prev), Val(fs)}).is_zero());
        CHECK(eval_program(ctx, lp.leq, {Val(fs), Val(*prev)}).is_zero());
      }
      prev = fs;
    }
  }
}

TEST_CASE("embed_check examples") {
  EvalContext ctx;
  // finite 3-chain
  FiniteOrder three;
  three.elems = {0, 1, 2};
  for (uint64_t a = 0; a < 3; a++)
    for (uint64_t b = 0; b < 3; b++) three.le[{a, b}] = a <= b;
  OrderPresentation p3 = lift_finite(three);

  // segment below the top element (2 points) into 3: true; into 2: also true;
  // the weak segment including the top needs the strict reading, so test the
  // pigeonhole on the full universe below a virtual top via alpha = 2 at a=2
  CHECK(embed_check(p3, 2, CnfOrdinal::finite(3), 1, 8).is_true());
  CHECK(embed_check(p3, 2, CnfOrdinal::finite(2), 1, 8).is_true());
  CHECK(embed_check(p3, 2, CnfOrdinal::finite(1), 1, 8).is_false());

  // omega-presentation, a = 5, alpha = omega at level 2
  CHECK(embed_check(omega_presentation(), 5, CnfOrdinal::omega(), 2, 10).is_true());
  // and [min, 5) does not embed into 3
  CHECK(embed_check(omega_presentation(), 5, CnfOrdinal::finite(3), 2, 10).is_false());

  // alpha must sit below omega^n
  CHECK_THROWS_AS(embed_check(p3, 1, CnfOrdinal::omega(), 1, 8), OrderError);
}

TEST_CASE("embed recursion property") {
  // (L|a into alpha) iff (for all explored b < a)(exists beta < alpha)(L|b into beta)
  EvalContext ctx;
  std::vector<OrderPresentation> corpus;
  corpus.push_back(omega_presentation());
  FiniteOrder five;
  five.elems = {0, 1, 2, 3, 4};
  for (uint64_t a = 0; a < 5; a++)
    for (uint64_t b = 0; b < 5; b++) five.le[{a, b}] = a <= b;
  corpus.push_back(lift_finite(five));
  corpus.push_back(omega_times_one_plus_plus_one(empty_presentation()));

  std::vector<CnfOrdinal> alphas;
  for (uint64_t j = 0; j < 3; j++)
    for (uint64_t i = 0; i < 3; i++)
      alphas.push_back(CnfOrdinal::add(CnfOrdinal::mul(CnfOrdinal::omega(), CnfOrdinal::finite(j)),
                                       CnfOrdinal::finite(i)));

  for (const auto& p : corpus) {
    FiniteOrder f = explore_prefix(p, 12, &ctx);
    if (f.elems.empty()) continue;
    for (uint64_t a : f.elems) {
      for (const auto& alpha : alphas) {
        TruthVerdict lhs = embed_check(f, a, alpha, 2);
        if (lhs.is_unknown()) continue;
        bool rhs = true;
        bool rhs_known = true;
        for (uint64_t b : f.elems) {
          if (!f.lt(b, a)) continue;
          bool found = false;
          for (const auto& beta : detail::enumerate_below(alpha, 2, f.size() + 1)) {
            TruthVerdict t = embed_check(f, b, beta, 2);
            if (t.is_unknown()) { rhs_known = false; break; }
            if (t.is_true()) { found = true; break; }
          }
          if (!rhs_known) break;
          if (!found) { rhs = false; break; }
        }
        if (rhs_known) CHECK(lhs.is_true() == rhs);
      }
    }
  }
}

TEST_CASE("KB well-foundedness on bounded grids") {
  // every finite tree over entries < m, depth < d: the KB order has no
  // descending chain longer than its node count
  EvalContext ctx;
  std::vector<std::vector<Val>> seqs{{},
                                     {Val(uint64_t(0))},
                                     {Val(uint64_t(2))},
                                     {Val(uint64_t(0)), Val(uint64_t(1))},
                                     {Val(uint64_t(0)), Val(uint64_t(1)), Val(uint64_t(0))}};
  SequenceTree t = finite_tree(seqs);
  OrderPresentation kb = kleene_brouwer(t);
  std::vector<BigNat> codes;
  for (const auto& s : seqs) codes.push_back(encode_seq(s));
  auto lt = [&](const BigNat& a, const BigNat& b) {
    return !eval_program(ctx, kb.leq, {Val(a), Val(b)}).is_zero() &&
           eval_program(ctx, kb.leq, {Val(b), Val(a)}).is_zero();
  };
  // brute force: longest strictly descending chain among the five nodes
  size_t longest = 0;
  for (size_t start = 0; start < codes.size(); start++) {
    std::function<size_t(size_t)> depth = [&](size_t i) -> size_t {
      size_t best = 1;
      for (size_t j = 0; j < codes.size(); j++)
        if (lt(codes[j], codes[i])) best = std::max(best, 1 + depth(j));
      return best;
    };
    longest = std::max(longest, depth(start));
  }
  CHECK(longest <= seqs.size());

  // infinite-branch prefixes map to descending chains of the same length
  SequenceTree spine = finite_tree({{},
                                    {Val(uint64_t(0))},
                                    {Val(uint64_t(0)), Val(uint64_t(0))},
                                    {Val(uint64_t(0)), Val(uint64_t(0)), Val(uint64_t(0))}});
  OrderPresentation kbs = kleene_brouwer(spine);
  std::vector<Val> path;
  BigNat prev = encode_seq(path);
  for (int i = 0; i < 3; i++) {
    path.push_back(Val(uint64_t(0)));
    BigNat cur = encode_seq(path);
    CHECK(!eval_program(ctx, kbs.leq, {Val(cur), Val(prev)}).is_zero());
    CHECK(eval_program(ctx, kbs.leq, {Val(prev), Val(cur)}).is_zero());
    prev = cur;
  }
}

TEST_CASE("prefix template single snapshots") {
  FiniteOrder chain;
  chain.elems = {0, 1, 2};
  for (uint64_t a = 0; a < 3; a++)
    for (uint64_t b = 0; b < 3; b++) chain.le[{a, b}] = a <= b;
  CHECK(prefix_iso_check(chain, PrefixTemplate::omega()));
  CHECK(prefix_iso_check(chain, PrefixTemplate::omega_times(2)));
  CHECK(prefix_iso_check(chain, PrefixTemplate::finite(3)));
  CHECK(!prefix_iso_check(chain, PrefixTemplate::finite(2)));

  // an element acquiring new predecessors after its stability certificate
  FiniteOrder later;
  later.elems = {0, 1, 2, 5};
  for (uint64_t a : later.elems)
    for (uint64_t b : later.elems) {
      auto rank = [](uint64_t v) { return v == 5 ? 15 : v * 10; };  // 5 sits between 1 and 2
      later.le[{a, b}] = rank(a) <= rank(b);
    }
  PrefixEvidence ev;
  ev.snapshots = {chain, later};
  ev.stable_since[2] = 0;
  CHECK(!prefix_iso_check(ev, PrefixTemplate::omega()));
  // without the certificate the insertion still violates omega
  PrefixEvidence ev2;
  ev2.snapshots = {chain, later};
  CHECK(!prefix_iso_check(ev2, PrefixTemplate::omega()));
  // but a dense template accepts it as a densification witness
  CHECK(prefix_iso_check(ev2, PrefixTemplate::omega_pow_eta(1)));
}
