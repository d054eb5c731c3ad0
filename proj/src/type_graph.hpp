#pragma once

// Shared type-graph saturation used by the selector-based engines: the
// quotient view of a selector hypothesis with one node b_t per type and every
// succ-permitted Sigma-role edge. Derivations over this finite graph equal
// the limit of derivations over the materialized per-level chains, which lets
// the engines screen selectors without building any fresh individuals.

#include <optional>
#include <utility>
#include <vector>

#include "abd/common.hpp"
#include "abd/flat_abduce.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// The TBox reindexed against one closure: CI pairs, conjunction entries,
// existential entries with their filler, and the bot position if any.
struct CompiledTBox {
  std::vector<std::pair<std::size_t, std::size_t>> cis;
  std::vector<std::size_t> and_entries;
  struct Ex {
    std::size_t entry, inner;
    Role role;
  };
  std::vector<Ex> exists_entries;
  std::optional<std::size_t> bot_idx;

  CompiledTBox(const Closure& cl, const KnowledgeBase& kb);

  // Boolean and CI closure local to one node.
  void close(const Closure& cl, Bits& s) const;
};

// Derivable concepts of the anonymous witness vertex of each closure entry:
// V[i] saturates {top, i} under the TBox, with existential members feeding
// from the witness of their own filler.
std::vector<Bits> vertex_tables(const Closure& cl, const CompiledTBox& tb,
                                Ctx& ctx);

// S[t]: concepts derivable at the fresh individual b_t inside K union H_s.
// Valid for any selector because b_t's derivations depend only on its type.
// Requires an assertion-free K (otherwise original individuals could feed
// extra facts into the b_t part).
std::vector<Bits> saturate_type_graph(const TypeSet& T, const CompiledTBox& tb,
                                      const std::vector<Bits>& V,
                                      const Signature& sigma, Ctx& ctx);

// Types reachable from the selected ones along Sigma-role successor
// candidates; the forward closure that EL-bot derivations depend on.
std::vector<std::size_t> reachable_types(const Selector& s, const TypeSet& T,
                                         const Signature& sigma);

// True when the knowledge base holds any assertion besides inclusions.
bool kb_has_assertions(const KnowledgeBase& kb);

}  // namespace abd
