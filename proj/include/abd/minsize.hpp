#pragma once

#include <optional>
#include <vector>

#include "abd/common.hpp"
#include "abd/syntax.hpp"

namespace abd {

// Bounded search for the smallest passing hypothesis under the size metric.

struct SearchConfig {
  enum class Pool { ExistingOnly, WithFreshPool };
  Pool pool = Pool::ExistingOnly;
  std::size_t fresh_count = 0;  // only read when pool == WithFreshPool
  // nonzero values override the budget carried by the Ctx
  std::size_t node_budget = 0;
  double wall_seconds = 0.0;
};

enum class Outcome { Found, None, Unknown };

struct MinResult {
  Outcome outcome = Outcome::None;
  std::optional<KnowledgeBase> hypothesis;
  std::size_t size = 0;
};

// Every signature atom over the problem's individuals, then over the fresh
// pool: concept assertions first (individual-major, names sorted), then role
// assertions (role-major, ordered pairs). Stable, hence reproducible.
std::vector<Axiom> candidate_pool(const AbductionProblem& problem,
                                  const SearchConfig& cfg);

// Iterative deepening over exact total size with subset DFS in pool order.
// Partial sets that already clash with the background are pruned (adding
// assertions never restores consistency); fresh individuals are used in
// sequence to break symmetry. Found results are size-minimal and
// lexicographically least in pool order; Unknown reports a budget hit,
// distinct from an exhausted None.
MinResult min_abduce(const AbductionProblem& problem, const SearchConfig& cfg,
                     Ctx& ctx);

}  // namespace abd
