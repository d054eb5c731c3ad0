#pragma once

#include <map>
#include <optional>
#include <string>

#include "abd/common.hpp"
#include "abd/flat_abduce.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// A flat ABox whose fresh individuals form levels hanging off the original
// ones; root names the original individual each fresh one descends from.
struct RootedFlatABox {
  KnowledgeBase abox;
  std::map<std::string, std::string> root;
};

// Break complex concept assertions into atoms and role edges: (C and D)(a)
// splits, (some r C)(a) spawns a fresh successor carrying C. Role assertions
// and atomic assertions pass through unchanged.
RootedFlatABox flatten(const KnowledgeBase& abox);

// Inverse of flatten: fold every fresh individual back into an existential
// restriction on its parent, bottom-up. Fresh individuals reached from
// several parents are folded once per incoming edge. A cycle among fresh
// individuals, a fresh individual without an incoming edge, or an edge from
// a fresh individual back to an original violates the shape and is refused.
KnowledgeBase rollup(const RootedFlatABox& r);

// The level-stratified hypothesis: original individuals carry their
// selector type's signature atoms and succ-permitted edges; below each
// original hang L levels of per-type individuals, wired level k to k+1.
// Levels carry only the types forward-reachable from the selected ones;
// entailment at the originals never depends on the rest.
RootedFlatABox chain_hypothesis(const Selector& s, const TypeSet& T,
                                const Signature& sigma, std::size_t L);

// Abduction returning a hypothesis over the original individuals only, with
// complex concepts instead of fresh names: enumerate compatible selectors,
// entail the observation through a chain hypothesis, strip the assertions
// that entailment does not need, and roll the rest up. chain_length
// defaults to the number of types.
std::optional<KnowledgeBase> complex_abduce_elbot(
    const AbductionProblem& problem, std::optional<std::size_t> chain_length,
    Ctx& ctx);

}  // namespace abd
