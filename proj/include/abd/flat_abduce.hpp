#pragma once

#include <optional>
#include <set>
#include <string>

#include "abd/common.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// A selector assigns one type to every individual of K union Phi.
using Selector = TypeAssignment;

// Deterministic fresh-name scheme that cannot collide with any taken name:
// the prefix is extended until no taken name starts with it.
class FreshNamer {
 public:
  explicit FreshNamer(const std::set<std::string>& taken);

  std::string per_type(std::size_t t) const;  // b_t
  std::string chain(const std::string& ind, std::size_t t,
                    std::size_t level) const;  // b_{a,t,i}
  std::string sequential(std::size_t i) const;  // flatten's running names

 private:
  std::string prefix_;
};

// All Sigma-atoms over the existing individuals, including every role pair.
// Satisfies A3 by construction; in EL it is the strongest flat hypothesis.
KnowledgeBase trivial_hypothesis(const AbductionProblem& problem);

// True iff every concept assertion of kb is inside the selected type and
// every role assertion lands in succ_candidates.
bool selector_compatible(const Selector& s, const KnowledgeBase& kb,
                         const TypeSet& T);

// The canonical flat hypothesis H_s: Sigma-atoms of each selected type over
// the original individuals plus one fresh individual b_t per type in T, and
// every succ-permitted Sigma-role edge between them.
KnowledgeBase build_selector_hypothesis(const Selector& s, const TypeSet& T,
                                        const Signature& sigma);

// Forward-closed restriction of build_selector_hypothesis: fresh individuals
// only for types reachable from the selected ones along Sigma-role
// successor candidates. Verification verdict matches the full construction
// because EL-bot derivations at a node depend only on its forward closure.
KnowledgeBase reachable_selector_hypothesis(const Selector& s, const TypeSet& T,
                                            const Signature& sigma);

// EL: the trivial hypothesis iff it entails the observation. EL-bot / ALC /
// ALCI: the first hypothesis of a compatible selector, in lexicographic
// (individual order, type index) order, that passes verification.
std::optional<KnowledgeBase> flat_abduce(const AbductionProblem& problem,
                                         Ctx& ctx);

// Merges fresh individuals of equal type under a consistent assignment,
// bounding the individual count by |ind(K union Phi)| + |T|.
KnowledgeBase quotient_by_types(const KnowledgeBase& h0,
                                const AbductionProblem& problem, Ctx& ctx);

}  // namespace abd
