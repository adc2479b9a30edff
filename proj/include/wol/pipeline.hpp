#pragma once

// Sentence -> Skolem matrix -> survivor tree -> Kleene-Brouwer order.
// The tree's infinite branches are exactly the Skolem-function candidates f
// with psi(f, u) true for every u, so the sentence holds iff the tree is
// well-founded iff the emitted order presentation is well-ordered.

#include "kb.hpp"
#include "skolem.hpp"

namespace wol {

struct SentencePipeline {
  Formula phi;            // the input sentence, normalized
  Formula negated;        // not phi, the sentence actually Skolemized
  SkolemResult skolem;
  SequenceTree tree;
  OrderPresentation order;
};

inline SequenceTree sentence_to_tree(const Formula& phi) {
  Formula neg = normalize(negate(normalize(phi)));
  SkolemResult sk = skolemize(neg);
  return SequenceTree{member_program(sk)};
}

inline SentencePipeline sentence_pipeline(const Formula& phi) {
  SentencePipeline out;
  out.phi = normalize(phi);
  out.negated = normalize(negate(out.phi));
  out.skolem = skolemize(out.negated);
  out.tree = SequenceTree{member_program(out.skolem)};
  out.order = kleene_brouwer(out.tree);
  return out;
}

inline OrderPresentation sentence_to_order(const Formula& phi) {
  return sentence_pipeline(phi).order;
}

// KB-descending chain extracted from a branch: deeper tree nodes are smaller.
inline std::vector<BigNat> descending_chain(const SentencePipeline& p, uint64_t length,
                                            uint64_t width = 8, const EvalContext& ctx = {}) {
  auto path = follow_branch(p.tree, length, width, ctx);
  std::vector<BigNat> codes;
  codes.reserve(path.size());
  for (const auto& s : path) codes.push_back(encode_seq(s));
  return codes;
}

} // namespace wol
