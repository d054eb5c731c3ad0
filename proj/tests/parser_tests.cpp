#include <string>

#include "abd/parser.hpp"
#include "abd/syntax.hpp"
#include "doctest.h"

using namespace abd;

namespace {

std::string parse_error_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const input_error& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const char* kFixEl = R"(# running example
:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
(concept B)
(role r)
)";

}  // namespace

TEST_CASE("parse the running example") {
  AbductionProblem p = parse_problem(kFixEl);
  REQUIRE(p.kb.axioms.size() == 1);
  REQUIRE(p.observation.axioms.size() == 1);
  CHECK(equal(p.kb.axioms[0],
              Axiom(CI{exists(Role("r"), atom("B")), atom("A")})));
  CHECK(equal(p.observation.axioms[0], Axiom(ConceptAssertion{"a", atom("A")})));
  CHECK(p.sigma.concepts == std::set<std::string>{"B"});
  CHECK(p.sigma.roles == std::set<std::string>{"r"});
  CHECK(p.mode == Mode::Flat);
  CHECK(p.dialect == Dialect::EL);
  CHECK(!p.size_bound);
}

TEST_CASE("print then parse is identity") {
  std::string text = R"(:kb
(implies (and A B) bot)
(implies (some r B) A)
(related a b s)
:observation
(instance a (some r (and A B)))
:sigma
(concept A)
(role r)
:bound 7
:mode complex-no-fresh
)";
  AbductionProblem p = parse_problem(text);
  AbductionProblem q = parse_problem(print_problem(p));
  REQUIRE(p.kb.axioms.size() == q.kb.axioms.size());
  for (std::size_t i = 0; i < p.kb.axioms.size(); ++i)
    CHECK(equal(p.kb.axioms[i], q.kb.axioms[i]));
  REQUIRE(p.observation.axioms.size() == q.observation.axioms.size());
  for (std::size_t i = 0; i < p.observation.axioms.size(); ++i)
    CHECK(equal(p.observation.axioms[i], q.observation.axioms[i]));
  CHECK(p.sigma.concepts == q.sigma.concepts);
  CHECK(p.sigma.roles == q.sigma.roles);
  CHECK(p.size_bound == q.size_bound);
  CHECK(p.mode == q.mode);
  CHECK(p.dialect == q.dialect);
  CHECK(q.dialect == Dialect::ELbot);
}

TEST_CASE("bare sigma names classify by occurrence") {
  std::string text = R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
B
r
)";
  AbductionProblem p = parse_problem(text);
  CHECK(p.sigma.concepts == std::set<std::string>{"B"});
  CHECK(p.sigma.roles == std::set<std::string>{"r"});

  CHECK(mentions(parse_error_of(R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
Unseen
)"),
                 "cannot classify sigma name 'Unseen'"));
}

TEST_CASE("observation accepts only assertions") {
  CHECK(mentions(parse_error_of(R"(:kb
:observation
(implies A B)
:sigma
(concept A)
)"),
                 "observation must contain only assertions"));
}

TEST_CASE("errors carry line and column") {
  std::string msg = parse_error_of(R"(:kb
(implies (what A B) A)
:observation
:sigma
)");
  CHECK(mentions(msg, "line 2"));
  CHECK(mentions(msg, "unknown concept operator 'what'"));
}

TEST_CASE("at-most restrictions are rejected as out of scope") {
  CHECK(mentions(parse_error_of(R"(:kb
(implies A (at-most 1 r B))
:observation
(instance a A)
:sigma
(concept A)
)"),
                 "at-most"));
}

TEST_CASE("declared dialect rejects stronger constructors") {
  CHECK(mentions(parse_error_of(R"(:kb
(implies A (not B))
:observation
(instance a A)
:sigma
(concept A)
:dialect EL
)"),
                 "negation not in EL"));
  CHECK(mentions(parse_error_of(R"(:kb
(implies A bot)
:observation
(instance a A)
:sigma
(concept A)
:dialect EL
)"),
                 "bottom not in EL"));
  CHECK(mentions(parse_error_of(R"(:kb
(implies (some (inv r) A) B)
:observation
(instance a A)
:sigma
(concept A)
:dialect ALC
)"),
                 "inverse role not in ALC"));
}

TEST_CASE("declared dialect may exceed the detected one") {
  std::string text = R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
(concept B)
:dialect ALC
)";
  CHECK(parse_problem(text).dialect == Dialect::ALC);
}

TEST_CASE("parse_kb reads a bare axiom list") {
  KnowledgeBase kb = parse_kb("(instance a B)\n(related a b r)\n");
  REQUIRE(kb.axioms.size() == 2);
  CHECK(equal(kb.axioms[0], Axiom(ConceptAssertion{"a", atom("B")})));
  CHECK(equal(kb.axioms[1], Axiom(RoleAssertion{"r", "a", "b"})));
}

TEST_CASE("related with an inverse role swaps endpoints") {
  KnowledgeBase kb = parse_kb("(related a b (inv r))\n");
  REQUIRE(kb.axioms.size() == 1);
  CHECK(equal(kb.axioms[0], Axiom(RoleAssertion{"r", "b", "a"})));
}

TEST_CASE("parse_concept_text") {
  CHECK(equal(parse_concept_text("(some r (and A B))"),
              exists(Role("r"), conj({atom("A"), atom("B")}))));
  CHECK_THROWS_AS(parse_concept_text("(some r A) junk"), input_error);
}
