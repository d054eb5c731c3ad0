#pragma once

#include <string>

#include "abd/syntax.hpp"

namespace abd {

// Problem files are UTF-8 with `#` line comments and sections :kb,
// :observation, :sigma, :bound, :mode and optional :dialect. Axioms are
// KRSS-style s-expressions: (implies C D), (instance a C), (related a b r).
// Concepts: top, bot, (and C ...), (or C ...), (not C), (some r C),
// (all r C) with roles either a name or (inv name). Sigma entries are bare
// names classified by their occurrence in the axioms, or explicit
// (concept N) / (role N) entries.
AbductionProblem parse_problem(const std::string& text);

// Bare list of axioms, no sections; used for hypothesis files.
KnowledgeBase parse_kb(const std::string& text);

// A single concept term; used by tests and the abstraction JSON loader.
ConceptPtr parse_concept_text(const std::string& text);

std::string print_problem(const AbductionProblem& p);

}  // namespace abd
