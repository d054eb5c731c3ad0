#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "abd/common.hpp"
#include "abd/syntax.hpp"

namespace abd {

// Indexed subconcept closure over the desugared core form (top, bot, atom,
// not, exists, and). Concepts are kept in the canonical order, so sub-terms
// precede their hosts and position 0 is always top.
struct Closure {
  std::vector<ConceptPtr> concepts;

  // Membership of every entry in a candidate type is a function of the
  // entries that carry a free bit: atoms and existential restrictions.
  std::vector<std::size_t> free_bits;  // closure indices of Atom/Exists entries
  std::vector<int> free_bit_of;        // closure index -> free bit, or -1
  std::vector<std::vector<std::size_t>> children;  // positions of direct sub-terms

  std::size_t size() const { return concepts.size(); }
  std::optional<std::size_t> index_of(const ConceptPtr& c) const;
};

using ClosurePtr = std::shared_ptr<const Closure>;

using TypeAssignment = std::map<std::string, std::size_t>;  // name -> type index

// sub(kb) + sub(obs) + sub(extra) + top, all desugared.
ClosurePtr build_closure(const KnowledgeBase& kb, const KnowledgeBase& obs,
                         const std::vector<ConceptPtr>& extra = {});

// Evaluates membership of every closure entry given the free-bit mask;
// out must have closure.size() slots.
void eval_members(const Closure& cl, std::uint64_t mask, std::vector<char>& out);

struct TypeSet {
  ClosurePtr closure;
  std::vector<Bits> types;            // full membership bitsets, mask-ascending
  std::vector<std::uint64_t> masks;   // free-bit masks, strictly ascending

  // Per existential role token: its closure entries and, per type, compact
  // masks ex (which entries are in the type) and pat (which entries' inner
  // concepts hold in the type). succ_candidates(t, R) is
  //   { t' | pat_R(t') subset-of ex_R(t)  and  pat_{R^-}(t) subset-of ex_{R^-}(t') }.
  struct RoleTable {
    Role role;
    std::vector<std::size_t> exists_indices;
    std::vector<std::size_t> inner_indices;
    std::vector<std::uint64_t> ex, pat;  // indexed by type
  };
  std::vector<RoleTable> role_tables;

  std::size_t count() const { return types.size(); }
  int role_table_index(const Role& r) const;
  bool member(std::size_t type_idx, std::size_t concept_idx) const {
    return types[type_idx].test(concept_idx);
  }
  std::optional<std::size_t> index_of_mask(std::uint64_t mask) const;

  bool succ_permits(std::size_t t, const Role& r, std::size_t succ) const;
  // Bitset over type indices; cached per (type, role).
  const Bits& succ_candidates(std::size_t t, const Role& r) const;

 private:
  mutable std::map<std::pair<std::size_t, Role>, Bits> succ_cache_;
};

// Greatest fixpoint of the local coherence conditions: no bot, and/not
// coherence and CI closure hold by construction of the candidates, and every
// existential member keeps a witness among the surviving successor
// candidates. kb supplies the CIs; its assertions are ignored here.
TypeSet type_elimination(ClosurePtr closure, const KnowledgeBase& kb, Ctx& ctx);

// Debug dump: ordered types as ordered concept-text lists.
std::string dump_types_json(const TypeSet& T);

}  // namespace abd
