#include "abd/parser.hpp"
#include "abd/reasoner.hpp"
#include "doctest.h"

using namespace abd;

namespace {

KnowledgeBase kb_of(const std::string& text) { return parse_kb(text); }

Axiom inst(const std::string& ind, const ConceptPtr& c) {
  return ConceptAssertion{ind, c};
}

}  // namespace

TEST_CASE("el entailment on the running example") {
  KnowledgeBase kb = kb_of(R"((implies (some r B) A)
(instance b B)
(related a b r)
)");
  CHECK(el_consistent(kb));
  CHECK(el_entails(kb, inst("a", atom("A"))));
  CHECK(!el_entails(kb, inst("b", atom("A"))));
  CHECK(el_entails(kb, inst("a", exists(Role("r"), atom("B")))));
  CHECK(el_entails(kb, Axiom(RoleAssertion{"r", "a", "b"})));
  CHECK(!el_entails(kb, Axiom(RoleAssertion{"r", "b", "a"})));
}

TEST_CASE("el derives through existential witnesses") {
  KnowledgeBase kb = kb_of(R"((implies A (some r B))
(implies B C)
(implies (some r C) D)
(instance a A)
)");
  CHECK(el_entails(kb, inst("a", atom("D"))));
  CHECK(!el_entails(kb, inst("a", atom("B"))));
}

TEST_CASE("bot propagates backwards over edges") {
  KnowledgeBase kb = kb_of(R"((implies A (some r B))
(implies B bot)
(instance a A)
)");
  CHECK(!el_consistent(kb));
  CHECK(el_entails(kb, inst("a", atom("Z"))));  // everything follows
}

TEST_CASE("disjointness makes the running example inconsistent") {
  KnowledgeBase kb = kb_of(R"((implies (some r B) A)
(implies (and A B) bot)
(instance a A)
(instance a B)
)");
  CHECK(!el_consistent(kb));
}

TEST_CASE("el engine refuses stronger dialects") {
  KnowledgeBase kb;
  kb.add(CI{top(), disj({atom("A"), atom("B")})});
  CHECK_THROWS_AS(el_consistent(kb), input_error);
}

TEST_CASE("alc agrees with el on el-bot inputs") {
  auto check_both = [](const std::string& text, const Axiom& goal) {
    KnowledgeBase kb = kb_of(text);
    bool el = el_entails(kb, goal);
    KnowledgeBase goal_kb;
    goal_kb.add(goal);
    Ctx ctx;
    auto cl = build_closure(kb, goal_kb);
    TypeSet T = type_elimination(cl, kb, ctx);
    CHECK(alc_entails(kb, goal, T, ctx) == el);
    return el;
  };
  CHECK(check_both(R"((implies (some r B) A)
(instance b B)
(related a b r)
)",
                   inst("a", atom("A"))));
  CHECK(!check_both(R"((implies (some r B) A)
(instance b B)
)",
                    inst("a", atom("A"))));
  CHECK(check_both(R"((implies A (some r B))
(implies B C)
(implies (some r C) D)
(instance a A)
)",
                   inst("a", atom("D"))));
}

TEST_CASE("alc reasons by cases") {
  KnowledgeBase kb = kb_of(R"((implies top (or A B))
(implies A C)
(implies B C)
(instance a top)
)");
  KnowledgeBase goals;
  goals.add(inst("a", atom("C")));
  goals.add(inst("a", atom("A")));
  Ctx ctx;
  auto cl = build_closure(kb, goals);
  TypeSet T = type_elimination(cl, kb, ctx);
  CHECK(alc_entails(kb, inst("a", atom("C")), T, ctx));
  CHECK(!alc_entails(kb, inst("a", atom("A")), T, ctx));
  CHECK(alc_consistent(kb, T, ctx).has_value());
}

TEST_CASE("alc handles inverse roles") {
  KnowledgeBase kb = kb_of(R"((implies (some (inv r) A) B)
(instance a A)
(related a b r)
)");
  KnowledgeBase goals;
  goals.add(inst("b", atom("B")));
  Ctx ctx;
  auto cl = build_closure(kb, goals);
  TypeSet T = type_elimination(cl, kb, ctx);
  CHECK(alc_entails(kb, inst("b", atom("B")), T, ctx));
  CHECK(!alc_entails(kb, inst("a", atom("B")), T, ctx));
}

TEST_CASE("alc consistency finds assignments and respects edges") {
  KnowledgeBase kb = kb_of(R"((implies (and A B) bot)
(implies (some r B) A)
(instance a A)
(instance b B)
(related a b r)
)");
  Ctx ctx;
  auto cl = build_closure(kb, {});
  TypeSet T = type_elimination(cl, kb, ctx);
  auto wit = alc_consistent(kb, T, ctx);
  REQUIRE(wit.has_value());
  auto a_idx = cl->index_of(atom("A"));
  CHECK(T.member(wit->at("a"), *a_idx));

  KnowledgeBase bad = kb;
  bad.add(ConceptAssertion{"b", atom("A")});
  CHECK(!alc_consistent(bad, T, ctx).has_value());
}

TEST_CASE("empty kb is consistent in both engines") {
  KnowledgeBase kb;
  CHECK(el_consistent(kb));
  Ctx ctx;
  auto cl = build_closure(kb, {});
  TypeSet T = type_elimination(cl, kb, ctx);
  auto wit = alc_consistent(kb, T, ctx);
  REQUIRE(wit.has_value());
  CHECK(wit->empty());
}

TEST_CASE("check_hypothesis evaluates the three conditions") {
  AbductionProblem p = parse_problem(R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
(concept B)
(role r)
)");
  Ctx ctx;

  KnowledgeBase good = kb_of("(instance f B)\n(related a f r)\n");
  auto rep = check_hypothesis(p, good, ctx);
  CHECK(rep.a1_consistent);
  CHECK(rep.a2_entails);
  CHECK(rep.a3_in_signature);
  CHECK(rep.passed());

  KnowledgeBase off_signature = kb_of("(instance a A)\n");
  rep = check_hypothesis(p, off_signature, ctx);
  CHECK(rep.a1_consistent);
  CHECK(rep.a2_entails);
  CHECK(!rep.a3_in_signature);
  CHECK(rep.a3_offenders == std::set<std::string>{"A"});
  CHECK(!rep.passed());

  KnowledgeBase weak = kb_of("(instance a B)\n");
  rep = check_hypothesis(p, weak, ctx);
  CHECK(rep.a1_consistent);
  CHECK(!rep.a2_entails);
  REQUIRE(rep.a2_missing.size() == 1);
  CHECK(!rep.passed());

  KnowledgeBase tbox;
  tbox.add(CI{atom("B"), atom("A")});
  CHECK_THROWS_AS(check_hypothesis(p, tbox, ctx), input_error);
}

TEST_CASE("check_hypothesis flags inconsistency under disjointness") {
  AbductionProblem p = parse_problem(R"(:kb
(implies (some r B) A)
(implies (and A B) bot)
:observation
(instance a A)
:sigma
(concept A)
(concept B)
(role r)
)");
  Ctx ctx;
  KnowledgeBase clash = kb_of("(instance a A)\n(instance a B)\n");
  auto rep = check_hypothesis(p, clash, ctx);
  CHECK(!rep.a1_consistent);
  CHECK(rep.a2_entails);  // vacuously
  CHECK(!rep.passed());
}

TEST_CASE("check_hypothesis enforces the size bound when present") {
  AbductionProblem p = parse_problem(R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
(concept B)
(role r)
:bound 4
)");
  Ctx ctx;
  KnowledgeBase h = kb_of("(instance f B)\n(related a f r)\n");  // size 5
  auto rep = check_hypothesis(p, h, ctx);
  CHECK(rep.a1_consistent);
  CHECK(rep.a2_entails);
  CHECK(rep.a3_in_signature);
  REQUIRE(rep.size_within_bound.has_value());
  CHECK(!*rep.size_within_bound);
  CHECK(!rep.passed());
}

TEST_CASE("check_hypothesis on an alc problem reports a witness") {
  AbductionProblem p = parse_problem(R"(:kb
(implies top (or A B))
(implies B bot)
:observation
(instance a A)
:sigma
(concept A)
:dialect ALC
)");
  Ctx ctx;
  KnowledgeBase h = kb_of("(instance a A)\n");
  auto rep = check_hypothesis(p, h, ctx);
  CHECK(rep.passed());
  REQUIRE(rep.a1_witness.has_value());
  CHECK(rep.a1_witness->count("a") == 1);
  std::string json = to_json(rep);
  CHECK(json.find("\"a1_consistent\": true") != std::string::npos);
  CHECK(json.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("budget exhaustion raises resource_error") {
  Budget tiny;
  tiny.max_nodes = 2;
  Ctx ctx(tiny);
  KnowledgeBase kb = kb_of(R"((implies top (or A B))
(instance a top)
(instance b top)
(instance c top)
(related a b r)
(related b c r)
)");
  auto cl = build_closure(kb, {});
  TypeSet T = type_elimination(cl, kb, ctx);
  CHECK_THROWS_AS(alc_consistent(kb, T, ctx), resource_error);
}
