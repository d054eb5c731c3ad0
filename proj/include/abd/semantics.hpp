#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "abd/common.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// A finite interpretation over domain {0, ..., domain_size-1}. Concept and
// role names without an entry denote the empty extension.
struct FiniteInterpretation {
  std::size_t domain_size = 0;
  std::map<std::string, std::size_t> individuals;
  std::map<std::string, Bits> concept_ext;
  std::map<std::string, std::vector<Bits>> role_ext;  // adjacency rows

  bool has_edge(const std::string& role, std::size_t from,
                std::size_t to) const {
    auto it = role_ext.find(role);
    return it != role_ext.end() && it->second[from].test(to);
  }
};

Bits eval_concept(const FiniteInterpretation& I, const ConceptPtr& c);

// Missing mapped individuals raise input_error; everything else evaluates.
bool is_model(const FiniteInterpretation& I, const KnowledgeBase& kb);

// Canonical model of a compatible type assignment: the domain holds the
// assigned individuals plus one anonymous element per type, atom extensions
// are read off the types, and each role connects exactly the
// succ_candidates-permitted pairs. extra_roles names roles that need an
// extension but have no existential entry in the closure.
FiniteInterpretation model_from_assignment(
    const TypeAssignment& assignment, const TypeSet& T,
    const std::set<std::string>& extra_roles = {});

}  // namespace abd
