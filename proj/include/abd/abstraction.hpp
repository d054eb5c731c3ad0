#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abd/semantics.hpp"
#include "abd/syntax.hpp"
#include "abd/typecore.hpp"

namespace abd {

// One tuple of the role assignment. `type` is the type index (into a TypeSet)
// of the *source* element the edge serves: an element mapped to `from` that
// realizes `type` may/must have an r-successor mapped to `to`.
struct AbstractionEdge {
  std::string from;
  std::size_t type = 0;
  std::string role;
  std::string to;

  friend bool operator==(const AbstractionEdge&,
                         const AbstractionEdge&) = default;
  friend auto operator<=>(const AbstractionEdge&,
                          const AbstractionEdge&) = default;
};

// A finite description of a family of interpretations: nodes carry the
// admissible types of the elements mapped onto them, anchors pin individuals
// to nodes, edges describe the admitted role successors, and open nodes leave
// their successors unconstrained.
//
// A node is *internal* when some individual anchors to it and *outgoing*
// otherwise; internal nodes anchored by an individual of the problem at hand
// are *named*.
struct InterpretationAbstraction {
  std::vector<std::string> nodes;                       // ordered, unique
  std::map<std::string, std::set<std::size_t>> labels;  // node -> type indices
  std::map<std::string, std::string> anchors;           // individual -> node
  std::vector<AbstractionEdge> edges;
  std::set<std::string> open;

  bool has_node(const std::string& v) const;
  bool is_internal(const std::string& v) const;
  bool has_edge(const std::string& from, std::size_t type,
                const std::string& role, const std::string& to) const;
  // Label set of a node; empty set for nodes without an entry.
  const std::set<std::size_t>& label(const std::string& v) const;
};

// A failed well-formedness condition, with the witnessing nodes/edges spelled
// out in detail. rule is one of:
//   "outgoing-cycle"          cyclic path among outgoing nodes
//   "edge-label-closure"      internal source covers only part of the target's
//                             label set for some (role, target)
//   "outgoing-witness"        edge from an outgoing source to an internal
//                             target lacks a parallel edge to an outgoing
//                             target
//   "label-signature-closure" label set not closed under signature-equal types
//   "edge-signature-closure"  edges not closed under signature-equal types
struct Violation {
  std::string rule;
  std::string detail;
};

// Structural conditions that make the abstraction expressible as a single
// concept assertion per internal node plus role assertions (rules
// outgoing-cycle, edge-label-closure, outgoing-witness). Throws input_error on
// dangling node references; label/anchor consistency is not semantic here.
std::vector<Violation> check_alc_conform(const InterpretationAbstraction& a);

// Conditions that make the abstraction expressible with names from sigma only
// (rules label-signature-closure, edge-signature-closure): label sets and the
// role assignment must be closed under types that agree on sigma's concept
// names. Throws input_error on dangling references or type indices outside T.
std::vector<Violation> check_sigma_complete(const InterpretationAbstraction& a,
                                            const TypeSet& T,
                                            const Signature& sigma);

// Witness that I matches the abstraction: a map h from a subset of I's domain
// onto nodes such that anchored individuals land on their nodes, every mapped
// element realizes one of its node's types, and elements on non-open nodes
// have exactly the sigma-role successors the edges admit.
using AbstractionWitness = std::map<std::size_t, std::string>;

// Exhaustive search for a witness subset/map; nullopt when none exists.
// Throws input_error when an anchored individual is missing from I or the
// abstraction has dangling references.
std::optional<AbstractionWitness> abstracts(const InterpretationAbstraction& a,
                                            const FiniteInterpretation& I,
                                            const TypeSet& T,
                                            const Signature& sigma);

// Renders the abstraction as an ABox over sigma whose models (together with
// the background CIs that produced T) are exactly the interpretations the
// abstraction matches. Requires check_alc_conform and check_sigma_complete to
// pass; otherwise throws input_error naming the first violation.
//
// Every internal node contributes C_v(x) for each of its anchors x, where C_v
// unfolds literals over sigma's concept names, existential restrictions along
// outgoing edges, and universal restrictions bounding the admitted successors
// (unrolled once per abstraction node, covering every simple edge chain).
// Edges between internal nodes become role assertions between their anchors.
KnowledgeBase abstraction_to_abox(const InterpretationAbstraction& a,
                                  const TypeSet& T, const Signature& sigma);

// JSON object with fields nodes, labels, anchors, edges, open; inverse pair.
// abstraction_from_json throws input_error on malformed documents.
std::string abstraction_to_json(const InterpretationAbstraction& a);
InterpretationAbstraction abstraction_from_json(const std::string& text);

}  // namespace abd
