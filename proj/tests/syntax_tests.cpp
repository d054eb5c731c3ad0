#include "abd/syntax.hpp"
#include "doctest.h"

using namespace abd;

namespace {

ConceptPtr A() { return atom("A"); }
ConceptPtr B() { return atom("B"); }

}  // namespace

TEST_CASE("bit_length") {
  CHECK(bit_length(0) == 1);
  CHECK(bit_length(1) == 1);
  CHECK(bit_length(2) == 2);
  CHECK(bit_length(3) == 2);
  CHECK(bit_length(4) == 3);
  CHECK(bit_length(255) == 8);
  CHECK(bit_length(256) == 9);
}

TEST_CASE("size metric") {
  CHECK(size_of(top()) == 1);
  CHECK(size_of(bot()) == 1);
  CHECK(size_of(A()) == 1);
  CHECK(size_of(negation(A())) == 2);
  CHECK(size_of(exists(Role("r"), A())) == 3);
  CHECK(size_of(exists(Role("r", true), A())) == 4);  // inverse role counts 2
  CHECK(size_of(forall(Role("r"), A())) == 3);
  CHECK(size_of(conj({A(), B()})) == 3);
  CHECK(size_of(disj({A(), B(), atom("C")})) == 5);  // arity-1 operators
  CHECK(size_of(exists(Role("r"), conj({A(), B()}))) == 5);
  CHECK(size_of(at_most(0, Role("r"), A())) == 4);
  CHECK(size_of(at_most(2, Role("r"), A())) == 5);

  CHECK(size_of(Axiom(ConceptAssertion{"a", A()})) == 2);
  CHECK(size_of(Axiom(RoleAssertion{"r", "a", "b"})) == 3);
  CHECK(size_of(Axiom(CI{exists(Role("r"), B()), A()})) == 5);

  KnowledgeBase kb;
  kb.add(ConceptAssertion{"a", A()});
  kb.add(RoleAssertion{"r", "a", "b"});
  CHECK(size_of(kb) == 5);
}

TEST_CASE("n-ary constructors collapse units") {
  CHECK(conj({})->kind == CKind::Top);
  CHECK(disj({})->kind == CKind::Bot);
  CHECK(equal(conj({A()}), A()));
  CHECK(equal(disj({B()}), B()));
}

TEST_CASE("canonical order: size, then kind, then components") {
  CHECK(compare(top(), bot()) < 0);
  CHECK(compare(bot(), A()) < 0);
  CHECK(compare(A(), B()) < 0);
  CHECK(compare(B(), negation(A())) < 0);              // size 1 < 2
  CHECK(compare(negation(A()), exists(Role("r"), A())) < 0);
  CHECK(compare(exists(Role("r"), A()), conj({A(), B()})) < 0);  // both size 3: Exists < And
  CHECK(compare(conj({A(), B()}), disj({A(), B()})) < 0);        // And < Or
  CHECK(compare(A(), A()) == 0);
  CHECK(equal(conj({A(), B()}), conj({A(), B()})));
  CHECK(!equal(conj({A(), B()}), conj({B(), A()})));  // argument order matters
}

TEST_CASE("desugar rewrites or and forall through negation") {
  auto d = desugar(disj({A(), B()}));
  // not (and (not A) (not B))
  REQUIRE(d->kind == CKind::Not);
  REQUIRE(d->args[0]->kind == CKind::And);
  CHECK(d->args[0]->args[0]->kind == CKind::Not);
  CHECK(equal(d->args[0]->args[0]->args[0], A()));

  auto f = desugar(forall(Role("r"), A()));
  REQUIRE(f->kind == CKind::Not);
  REQUIRE(f->args[0]->kind == CKind::Exists);
  CHECK(f->args[0]->args[0]->kind == CKind::Not);

  CHECK(equal(desugar(negation(negation(A()))), A()));
  // double negation introduced by the rewrite collapses too
  CHECK(equal(desugar(forall(Role("r"), negation(A()))),
              negation(exists(Role("r"), A()))));
}

TEST_CASE("dialect detection") {
  KnowledgeBase el;
  el.add(CI{exists(Role("r"), B()), A()});
  CHECK(detect_dialect(el, {}) == Dialect::EL);

  KnowledgeBase elbot = el;
  elbot.add(CI{conj({A(), B()}), bot()});
  CHECK(detect_dialect(elbot, {}) == Dialect::ELbot);

  KnowledgeBase alc = el;
  alc.add(CI{top(), disj({A(), B()})});
  CHECK(detect_dialect(alc, {}) == Dialect::ALC);

  KnowledgeBase alci = el;
  alci.add(CI{exists(Role("r", true), A()), B()});
  CHECK(detect_dialect(alci, {}) == Dialect::ALCI);

  KnowledgeBase alcq;
  alcq.add(CI{A(), at_most(1, Role("r"), B())});
  CHECK_THROWS_AS(detect_dialect(alcq, {}), input_error);
}

TEST_CASE("signature and individuals") {
  KnowledgeBase kb;
  kb.add(CI{exists(Role("r"), B()), A()});
  kb.add(ConceptAssertion{"a", A()});
  kb.add(RoleAssertion{"s", "a", "b"});
  auto sig = signature_of(kb);
  CHECK(sig.concepts == std::set<std::string>{"A", "B"});
  CHECK(sig.roles == std::set<std::string>{"r", "s"});
  CHECK(individuals_of(kb) == std::set<std::string>{"a", "b"});
}

TEST_CASE("subconcepts are surface terms including the host") {
  auto c = exists(Role("r"), conj({A(), B()}));
  auto subs = subconcepts_of(c);
  CHECK(subs.size() == 4);  // A, B, A and B, exists
  CHECK(subs.count(A()) == 1);
  CHECK(subs.count(conj({A(), B()})) == 1);
  CHECK(subs.count(c) == 1);
}

TEST_CASE("text rendering round-trips structure") {
  CHECK(to_text(exists(Role("r"), conj({A(), B()}))) == "(some r (and A B))");
  CHECK(to_text(forall(Role("r", true), A())) == "(all (inv r) A)");
  CHECK(to_text(Axiom(CI{A(), B()})) == "(implies A B)");
  CHECK(to_text(Axiom(ConceptAssertion{"a", negation(A())})) ==
        "(instance a (not A))");
  CHECK(to_text(Axiom(RoleAssertion{"r", "a", "b"})) == "(related a b r)");
  CHECK(to_text(at_most(2, Role("r"), A())) == "(at-most 2 r A)");
  CHECK(to_text(top()) == "top");
  CHECK(to_text(bot()) == "bot");
}
