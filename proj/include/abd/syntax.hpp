#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "abd/common.hpp"

namespace abd {

// Kind values double as the tie-break rank in the canonical concept order.
enum class CKind : std::uint8_t {
  Top,
  Bot,
  Atom,
  Not,
  Exists,
  Forall,
  And,
  Or,
  AtMost
};

struct Role {
  std::string name;
  bool inverted = false;

  Role() = default;
  Role(std::string n, bool inv = false) : name(std::move(n)), inverted(inv) {}
  Role inverse() const { return Role(name, !inverted); }
  friend bool operator==(const Role&, const Role&) = default;
  friend auto operator<=>(const Role&, const Role&) = default;
};

struct Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

struct Concept {
  CKind kind = CKind::Top;
  std::string name;              // Atom
  Role role;                     // Exists / Forall / AtMost
  std::vector<ConceptPtr> args;  // Not: 1; Exists/Forall/AtMost: 1; And/Or: >= 2
  std::uint64_t number = 0;      // AtMost
};

ConceptPtr top();
ConceptPtr bot();
ConceptPtr atom(std::string name);
ConceptPtr negation(ConceptPtr c);
ConceptPtr exists(Role r, ConceptPtr c);
ConceptPtr forall(Role r, ConceptPtr c);
// Empty argument lists collapse to the unit (top / bot), singletons to the
// sole element; n-ary lists are kept flat.
ConceptPtr conj(std::vector<ConceptPtr> args);
ConceptPtr disj(std::vector<ConceptPtr> args);
ConceptPtr at_most(std::uint64_t n, Role r, ConceptPtr c);

// Canonical total order: size first, then kind, then components. Sub-terms
// always sort strictly before their hosts, which closure indexing relies on.
int compare(const ConceptPtr& a, const ConceptPtr& b);
bool equal(const ConceptPtr& a, const ConceptPtr& b);

struct ConceptLess {
  bool operator()(const ConceptPtr& a, const ConceptPtr& b) const {
    return compare(a, b) < 0;
  }
};

using ConceptSet = std::set<ConceptPtr, ConceptLess>;

struct CI {
  ConceptPtr lhs, rhs;
};

struct ConceptAssertion {
  std::string individual;
  ConceptPtr c;
};

struct RoleAssertion {
  std::string role;  // never inverted: r^-(a,b) is normalized to r(b,a)
  std::string from, to;
};

using Axiom = std::variant<CI, ConceptAssertion, RoleAssertion>;

int compare(const Axiom& a, const Axiom& b);
bool equal(const Axiom& a, const Axiom& b);

struct KnowledgeBase {
  std::vector<Axiom> axioms;

  void add(Axiom ax) { axioms.push_back(std::move(ax)); }
  bool empty() const { return axioms.empty(); }
  bool is_abox() const;
  bool contains(const Axiom& ax) const;
};

// K followed by H, in order.
KnowledgeBase merged(const KnowledgeBase& a, const KnowledgeBase& b);

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;

  bool has_concept(const std::string& n) const { return concepts.count(n); }
  bool has_role(const std::string& n) const { return roles.count(n); }
};

enum class Dialect : std::uint8_t { EL, ELbot, ALC, ALCI };

std::string to_string(Dialect d);
std::optional<Dialect> dialect_from_string(const std::string& s);

enum class Mode : std::uint8_t { Flat, Complex, ComplexNoFresh };

std::string to_string(Mode m);
std::optional<Mode> mode_from_string(const std::string& s);

struct AbductionProblem {
  KnowledgeBase kb;           // background K
  KnowledgeBase observation;  // Phi, assertions only
  Signature sigma;
  std::optional<std::uint64_t> size_bound;
  Mode mode = Mode::Flat;
  Dialect dialect = Dialect::EL;
};

// Size metric: every name and operator counts 1, numbers count their binary
// bit-length, n-ary and/or count arity-1 operators, an inverse role counts 2.
// A concept assertion C(a) has size |C|+1, a role assertion size 3, a CI
// |lhs|+|rhs|+1.
unsigned bit_length(std::uint64_t n);
std::uint64_t size_of(const ConceptPtr& c);
std::uint64_t size_of(const Axiom& ax);
std::uint64_t size_of(const KnowledgeBase& kb);

// Minimal dialect admitting every constructor of kb and obs; rejects at-most
// restrictions (ALCQ is out of scope).
Dialect detect_dialect(const KnowledgeBase& kb, const KnowledgeBase& obs);

Signature signature_of(const ConceptPtr& c);
Signature signature_of(const Axiom& ax);
Signature signature_of(const KnowledgeBase& kb);

std::set<std::string> individuals_of(const KnowledgeBase& kb);

// Surface sub-terms, including the concept itself; no desugaring, no extras.
ConceptSet subconcepts_of(const ConceptPtr& c);
ConceptSet subconcepts_of(const Axiom& ax);
ConceptSet subconcepts_of(const KnowledgeBase& kb);

// Core form used by the reasoning modules: or/forall rewritten through
// negation, double negations collapsed. The surface AST is untouched.
ConceptPtr desugar(const ConceptPtr& c);
Axiom desugar(const Axiom& ax);
KnowledgeBase desugar(const KnowledgeBase& kb);

// KRSS-style rendering; parse_* in parser.hpp invert these.
std::string to_text(const Role& r);
std::string to_text(const ConceptPtr& c);
std::string to_text(const Axiom& ax);
std::string to_text(const KnowledgeBase& kb);  // one axiom per line

}  // namespace abd
