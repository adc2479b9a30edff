#pragma once

// Tait-calculus omega-logic: deduction chains, the lazily generated
// Stammbaum, truth-guided proof certificates with CNF height annotations,
// refutation path streams, and the Kleene-Brouwer presentation of the
// Stammbaum via the stammem builtin.
//
// A sequent holds iff some member formula is true. Chains reduce the first
// non-literal (the redex): or/exists keep one child, and branches in two,
// forall branches over every numeral. Exists re-appends the redex after
// instantiating the first numeral whose instance has not occurred in the
// chain so far.

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "eval.hpp"
#include "kb.hpp"
#include "ordinal.hpp"
#include "parse.hpp"

namespace wol {

using Sequent = std::vector<Formula>;

enum class NodeClass { Axiomatic, Reducible, Stuck };

struct Classified {
  NodeClass cls;
  size_t redex = 0;           // index of the first non-literal
  FormulaKind tag = FormulaKind::Lit;
};

inline bool literal_true(const Formula& lit, const EvalContext& ctx) {
  return detail::eval_formula(ctx, lit, nullptr, 0) == Truth::True;
}

inline Classified classify(const Sequent& s, const EvalContext& ctx) {
  size_t redex = s.size();
  for (size_t i = 0; i < s.size(); i++) {
    if (is_literal(s[i])) {
      if (literal_true(s[i], ctx)) return {NodeClass::Axiomatic};
    } else if (redex == s.size()) {
      redex = i;
    }
  }
  // axioms win over reducibility only through a true literal anywhere;
  // the redex itself is the first non-literal regardless of position
  if (redex == s.size()) return {NodeClass::Stuck};
  return {NodeClass::Reducible, redex, s[redex]->kind};
}

inline Formula instantiate(const Formula& quantified, uint64_t m) {
  return normalize(subst(quantified->left, quantified->var, t_num(m)));
}

inline bool occurs_in_chain(const std::vector<Sequent>& chain, const Formula& f) {
  for (const auto& s : chain)
    for (const auto& g : s)
      if (formula_eq(f, g)) return true;
  return false;
}

// children of the last sequent of a chain; forall children are demanded by index
inline std::optional<Sequent> chain_child(const std::vector<Sequent>& chain, uint64_t index,
                                          const EvalContext& ctx) {
  const Sequent& s = chain.back();
  Classified c = classify(s, ctx);
  if (c.cls != NodeClass::Reducible) return std::nullopt;
  const Formula& chi = s[c.redex];
  Sequent left(s.begin(), s.begin() + c.redex);
  Sequent right(s.begin() + c.redex + 1, s.end());
  auto assemble = [&](const std::vector<Formula>& mid, bool reappend) {
    Sequent out = left;
    for (const auto& f : mid) out.push_back(f);
    for (const auto& f : right) out.push_back(f);
    if (reappend) out.push_back(chi);
    return out;
  };
  switch (c.tag) {
    case FormulaKind::Or:
      if (index != 0) return std::nullopt;
      return assemble({chi->left, chi->right}, false);
    case FormulaKind::And:
      if (index > 1) return std::nullopt;
      return assemble({index == 0 ? chi->left : chi->right}, false);
    case FormulaKind::Exists: {
      if (index != 0) return std::nullopt;
      uint64_t m = 0;
      while (occurs_in_chain(chain, instantiate(chi, m))) {
        m++;
        if (m > (1u << 20)) throw FuelExhausted("exists-instantiation search exhausted");
      }
      return assemble({instantiate(chi, m)}, true);
    }
    case FormulaKind::Forall:
      return assemble({instantiate(chi, index)}, false);
    default:
      return std::nullopt;
  }
}

// replay a child-index path from the root chain (Gamma_0 = psi)
inline std::optional<std::vector<Sequent>> stam_replay(const Formula& psi,
                                                       const std::vector<Val>& path,
                                                       const EvalContext& ctx) {
  std::vector<Sequent> chain{{normalize(psi)}};
  for (const Val& idx : path) {
    if (!idx.fits_u64()) return std::nullopt;
    auto next = chain_child(chain, idx.as_u64(), ctx);
    if (!next) return std::nullopt;
    chain.push_back(std::move(*next));
  }
  return chain;
}

namespace detail {

inline Val stammem_builtin(const EvalContext& ctx, const std::vector<Val>& args) {
  try {
    Formula psi = goedel_decode(args[0].to_big());
    std::vector<Val> path = decode_seq(args[1].to_big());
    return Val(uint64_t(stam_replay(psi, path, ctx) ? 1 : 0));
  } catch (const CodecError&) {
    return Val(uint64_t(0));
  }
}

inline const bool stammem_registered = register_builtin(expr::Op::StamMem, &stammem_builtin);

} // namespace detail

// Stammbaum as a sequence tree over child-index paths, and its KB order.
inline SequenceTree stammbaum_tree(const Formula& psi) {
  using namespace expr;
  (void)wol::detail::stammem_registered;
  BigNat code = goedel_encode(normalize(psi));
  return SequenceTree{Program{mk(Op::StamMem, {cst(Val(code)), arg(0)})}};
}

inline OrderPresentation stammbaum_kb(const Formula& psi) {
  return kleene_brouwer(stammbaum_tree(psi));
}

// ---- proof certificates ----

struct UnknownProbe : std::runtime_error {
  explicit UnknownProbe(const std::string& m) : std::runtime_error(m) {}
};

struct ProofCertificate {
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Sequent sequent;
    NodeClass cls;
    FormulaKind rule = FormulaKind::Lit;
    size_t redex = 0;
    std::vector<NodePtr> kids;       // or/exists: 1, and: 2, forall: sampled
    std::vector<uint64_t> sampled;   // forall: materialized numerals
    CnfOrdinal height;
  };
  Formula psi;
  uint64_t fuel = 0;
  uint64_t sample_width = 3;
  uint64_t depth_cap = 4096;
  NodePtr root;

  CnfOrdinal height() const { return root->height; }
};

namespace detail {

inline uint64_t omega_coefficient(const CnfOrdinal& h) {
  // h = w*q + r with r finite; anything at w^2 or above is out of scope here
  for (const auto& t : h.terms()) {
    CnfOrdinal e = t.exponent();
    if (!e.is_finite()) throw OrderError("certificate height not below w^2");
    BigNat ev = e.finite_value();
    if (!ev.fits_u64() || ev.as_u64() > 1) throw OrderError("certificate height not below w^2");
    if (ev.as_u64() == 1) {
      if (!t.coeff.fits_u64()) throw OrderError("certificate height coefficient overflow");
      return t.coeff.as_u64();
    }
  }
  return 0;
}

struct CertBuilder {
  const EvalContext& ctx;
  uint64_t fuel;
  uint64_t sample_width;
  uint64_t depth_cap;

  ProofCertificate::NodePtr build(std::vector<Sequent>& chain, uint64_t depth) {
    if (depth > depth_cap) throw UnknownProbe("certificate depth cap exceeded");
    const Sequent& s = chain.back();
    Classified c = classify(s, ctx);
    auto node = std::make_shared<ProofCertificate::Node>();
    node->sequent = s;
    node->cls = c.cls;
    if (c.cls == NodeClass::Axiomatic) {
      node->height = CnfOrdinal();
      return node;
    }
    if (c.cls == NodeClass::Stuck)
      throw UnknownProbe("stuck sequent while certifying a true sentence");
    // a sequent with every member probing false can never close
    bool maybe_true = false;
    for (const Formula& g : s)
      if (eval_formula(ctx, g, nullptr, fuel) != Truth::False) { maybe_true = true; break; }
    if (!maybe_true) throw UnknownProbe("sequent probes false on every member");
    node->rule = c.tag;
    node->redex = c.redex;
    auto child_at = [&](uint64_t idx) {
      auto next = chain_child(chain, idx, ctx);
      if (!next) throw UnknownProbe("calculus refused a child during certification");
      chain.push_back(std::move(*next));
      auto kid = build(chain, depth + 1);
      chain.pop_back();
      return kid;
    };
    switch (c.tag) {
      case FormulaKind::Or:
      case FormulaKind::Exists: {
        auto kid = child_at(0);
        node->kids.push_back(kid);
        node->height = CnfOrdinal::add(kid->height, CnfOrdinal::finite(1));
        break;
      }
      case FormulaKind::And: {
        auto k0 = child_at(0);
        auto k1 = child_at(1);
        node->kids = {k0, k1};
        CnfOrdinal m = k0->height < k1->height ? k1->height : k0->height;
        node->height = CnfOrdinal::add(m, CnfOrdinal::finite(1));
        break;
      }
      case FormulaKind::Forall: {
        CnfOrdinal hmax;
        for (uint64_t m = 0; m < sample_width; m++) {
          auto kid = child_at(m);
          node->kids.push_back(kid);
          node->sampled.push_back(m);
          if (hmax < kid->height) hmax = kid->height;
        }
        uint64_t q = omega_coefficient(hmax);
        node->height = CnfOrdinal::mul(CnfOrdinal::omega(), CnfOrdinal::finite(q + 1));
        break;
      }
      default:
        throw UnknownProbe("unexpected redex kind");
    }
    return node;
  }
};

} // namespace detail

// Certificate for a true sentence; nullopt when the truth probe or the
// construction cannot be closed at this fuel.
inline std::optional<ProofCertificate> prove_true(const Formula& psi, uint64_t fuel,
                                                  const EvalContext& ctx = {},
                                                  uint64_t sample_width = 3,
                                                  uint64_t depth_cap = 4096) {
  Formula p = normalize(psi);
  if (evaluate(p, fuel, ctx).is_false()) return std::nullopt;
  ProofCertificate cert;
  cert.psi = p;
  cert.fuel = fuel;
  cert.sample_width = sample_width;
  cert.depth_cap = depth_cap;
  detail::CertBuilder b{ctx, fuel, sample_width, depth_cap};
  std::vector<Sequent> chain{{p}};
  try {
    cert.root = b.build(chain, 0);
  } catch (const UnknownProbe&) {
    return std::nullopt;
  } catch (const FuelExhausted&) {
    return std::nullopt;
  }
  return cert;
}

// The premise generator of a forall node: materialize the subcertificate for
// an arbitrary numeral by replaying the canonical strategy at that path.
inline std::optional<ProofCertificate::NodePtr> materialize_premise(
    const ProofCertificate& cert, const std::vector<uint64_t>& path_to_node, uint64_t m,
    const EvalContext& ctx = {}) {
  std::vector<Val> path;
  for (uint64_t i : path_to_node) path.push_back(Val(i));
  auto chain = stam_replay(cert.psi, path, ctx);
  if (!chain) return std::nullopt;
  auto next = chain_child(*chain, m, ctx);
  if (!next) return std::nullopt;
  chain->push_back(std::move(*next));
  detail::CertBuilder b{ctx, cert.fuel, cert.sample_width, cert.depth_cap};
  try {
    return b.build(*chain, path_to_node.size() + 1);
  } catch (const UnknownProbe&) {
    return std::nullopt;
  }
}

// Replay audit: every leaf axiomatic, every parent height strictly above its
// materialized children, rules consistent with the chain calculus.
inline bool replay_certificate(const ProofCertificate& cert, const EvalContext& ctx = {}) {
  std::function<bool(const ProofCertificate::NodePtr&, std::vector<Sequent>&)> walk =
      [&](const ProofCertificate::NodePtr& n, std::vector<Sequent>& chain) -> bool {
    Classified c = classify(n->sequent, ctx);
    if (c.cls != n->cls) return false;
    if (n->cls == NodeClass::Axiomatic) return n->kids.empty();
    if (n->cls == NodeClass::Stuck) return false;
    if (c.redex != n->redex || c.tag != n->rule) return false;
    std::vector<uint64_t> indices;
    if (n->rule == FormulaKind::Forall) indices = n->sampled;
    else if (n->rule == FormulaKind::And) indices = {0, 1};
    else indices = {0};
    if (indices.size() != n->kids.size()) return false;
    for (size_t i = 0; i < indices.size(); i++) {
      auto next = chain_child(chain, indices[i], ctx);
      if (!next) return false;
      if (next->size() != n->kids[i]->sequent.size()) return false;
      for (size_t j = 0; j < next->size(); j++)
        if (!formula_eq((*next)[j], n->kids[i]->sequent[j])) return false;
      if (!(n->kids[i]->height < n->height)) return false;
      chain.push_back(std::move(*next));
      if (!walk(n->kids[i], chain)) return false;
      chain.pop_back();
    }
    return true;
  };
  std::vector<Sequent> chain{{cert.psi}};
  if (cert.root->sequent.size() != 1 || !formula_eq(cert.root->sequent[0], cert.psi)) return false;
  return walk(cert.root, chain);
}

// ---- refutation streams ----

class RefutationStream {
public:
  RefutationStream(Formula psi, uint64_t fuel, const EvalContext& ctx = {})
      : ctx_(ctx), fuel_(fuel) {
    chain_.push_back({normalize(psi)});
    pending_first_ = true;
  }

  // next sequent of the deduction-chain path, all members false at the probe
  std::optional<Sequent> next() {
    if (pending_first_) {
      pending_first_ = false;
      return chain_.back();
    }
    const Sequent& s = chain_.back();
    Classified c = classify(s, ctx_);
    if (c.cls == NodeClass::Axiomatic)
      throw UnknownProbe("refutation stream reached an axiomatic sequent");
    if (c.cls == NodeClass::Stuck) return std::nullopt;
    uint64_t index = 0;
    const Formula& chi = s[c.redex];
    if (c.tag == FormulaKind::And) {
      Truth t0 = detail::eval_formula(ctx_, chi->left, nullptr, fuel_);
      Truth t1 = detail::eval_formula(ctx_, chi->right, nullptr, fuel_);
      if (t0 == Truth::False) index = 0;
      else if (t1 == Truth::False) index = 1;
      else throw UnknownProbe("no conjunct probes false");
    } else if (c.tag == FormulaKind::Forall) {
      bool found = false;
      for (uint64_t m = 0; m < fuel_ && !found; m++) {
        if (detail::eval_formula(ctx_, instantiate(chi, m), nullptr, fuel_) == Truth::False) {
          index = m;
          found = true;
        }
      }
      if (!found) throw UnknownProbe("no falsifying numeral below the fuel");
    }
    auto nxt = chain_child(chain_, index, ctx_);
    if (!nxt) return std::nullopt;
    chain_.push_back(std::move(*nxt));
    indices_.push_back(index);
    return chain_.back();
  }

  const std::vector<Sequent>& chain() const { return chain_; }
  const std::vector<uint64_t>& indices() const { return indices_; }

private:
  EvalContext ctx_;
  uint64_t fuel_;
  std::vector<Sequent> chain_;
  std::vector<uint64_t> indices_;
  bool pending_first_;
};

inline std::vector<Sequent> refute_false(const Formula& psi, uint64_t fuel, uint64_t steps,
                                         const EvalContext& ctx = {}) {
  RefutationStream stream(psi, fuel, ctx);
  std::vector<Sequent> out;
  for (uint64_t i = 0; i <= steps; i++) {
    auto s = stream.next();
    if (!s) break;
    out.push_back(std::move(*s));
  }
  return out;
}

} // namespace wol
