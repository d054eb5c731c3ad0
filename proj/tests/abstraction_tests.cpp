#include "abd/abstraction.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "abd/parser.hpp"
#include "abd/semantics.hpp"
#include "abd/typecore.hpp"
#include "abstraction_fixtures.hpp"
#include "doctest.h"

using namespace abd;
using namespace abdtest;

namespace {

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

const AbsFixture& fixture(const std::string& name) {
  static const std::vector<AbsFixture> all = abstraction_fixtures();
  for (const auto& f : all)
    if (f.name == name) return f;
  throw std::logic_error("no fixture named " + name);
}

// Hypothesis text for a corpus fixture.
std::string extracted(const std::string& name) {
  const AbsFixture& f = fixture(name);
  AbsContext c = make_abs_context(f.problem);
  return to_text(abstraction_to_abox(f.build(c.T, c.p.sigma), c.T, c.p.sigma));
}

FiniteInterpretation interp(
    std::size_t m, const std::map<std::string, std::size_t>& inds,
    const std::map<std::string, std::vector<std::size_t>>& concepts,
    const std::map<std::string, std::vector<std::pair<std::size_t,
                                                      std::size_t>>>& roles) {
  FiniteInterpretation I;
  I.domain_size = m;
  I.individuals = inds;
  for (const auto& [name, elems] : concepts) {
    Bits b(m);
    for (std::size_t e : elems) b.set(e);
    I.concept_ext[name] = b;
  }
  for (const auto& [name, pairs] : roles) {
    std::vector<Bits> rows(m, Bits(m));
    for (const auto& [from, to] : pairs) rows[from].set(to);
    I.role_ext[name] = rows;
  }
  return I;
}

}  // namespace

TEST_CASE("abstraction JSON round trip is lossless and deterministic") {
  InterpretationAbstraction a;
  a.nodes = {"v0", "v1", "w"};
  a.labels["v0"] = {0, 2};
  a.labels["v1"] = {2};
  a.labels["w"] = {1};
  a.anchors["a"] = "v0";
  a.anchors["b"] = "v1";
  a.edges = {{"v0", 2, "r", "v1"}, {"v0", 2, "r", "w"}};
  a.open = {"w"};

  const std::string text = abstraction_to_json(a);
  CHECK(text == abstraction_to_json(a));
  InterpretationAbstraction back = abstraction_from_json(text);
  CHECK(back.nodes == a.nodes);
  CHECK(back.labels == a.labels);
  CHECK(back.anchors == a.anchors);
  CHECK(back.edges == a.edges);
  CHECK(back.open == a.open);
}

TEST_CASE("abstraction JSON rejects malformed documents") {
  CHECK_THROWS_AS(abstraction_from_json("[]"), input_error);
  CHECK_THROWS_AS(abstraction_from_json("{\"labels\":{}}"), input_error);
  CHECK_THROWS_AS(
      abstraction_from_json(R"({"nodes":["v"],"labels":{"v":[0]},
        "anchors":{},"edges":[["v",0,"r"]],"open":[]})"),
      input_error);
  // anchor onto an unknown node
  CHECK_THROWS_AS(
      abstraction_from_json(R"({"nodes":["v"],"labels":{"v":[0]},
        "anchors":{"a":"zz"},"edges":[],"open":[]})"),
      input_error);
  // duplicate node names
  CHECK_THROWS_AS(
      abstraction_from_json(R"({"nodes":["v","v"],"labels":{"v":[0]},
        "anchors":{},"edges":[],"open":[]})"),
      input_error);
}

TEST_CASE("structural conformance accepts and rejects the right shapes") {
  AbsContext c = make_abs_context(
      ":kb\n(implies B A)\n:observation\n(instance a A)\n"
      ":sigma\n(concept A)\n(concept B)\n(role r)\n:dialect ALC\n");
  const std::size_t t1 = tidx(c.T, {atom("A")});
  const std::size_t t2 = tidx(c.T, {atom("A"), atom("B")});

  SUBCASE("internal self-loop with an edge per label type is conform") {
    InterpretationAbstraction a;
    a.nodes = {"v0"};
    a.labels["v0"] = {t1, t2};
    a.anchors["a"] = "v0";
    a.edges = {{"v0", t1, "r", "v0"}, {"v0", t2, "r", "v0"},
               {"v0", t1, "r", "v0"}};  // duplicates are tolerated
    CHECK(check_alc_conform(a).empty());
  }
  SUBCASE("a lone edge between two internal nodes is conform") {
    InterpretationAbstraction a;
    a.nodes = {"v0", "v1"};
    a.labels["v0"] = {t2};
    a.labels["v1"] = {t2};
    a.anchors["a"] = "v0";
    a.anchors["b"] = "v1";
    a.edges = {{"v0", t2, "r", "v1"}};
    CHECK(check_alc_conform(a).empty());
  }
  SUBCASE("a cycle among outgoing nodes is flagged") {
    InterpretationAbstraction a;
    a.nodes = {"v0", "w1", "w2"};
    a.labels["v0"] = {t1};
    a.labels["w1"] = {t1};
    a.labels["w2"] = {t1};
    a.anchors["a"] = "v0";
    a.edges = {{"w1", t1, "r", "w2"}, {"w2", t1, "r", "w1"}};
    CHECK(has_rule(check_alc_conform(a), "outgoing-cycle"));
  }
  SUBCASE("an internal source must cover the whole target label") {
    InterpretationAbstraction a;
    a.nodes = {"v0", "v1"};
    a.labels["v0"] = {t2};
    a.labels["v1"] = {t1, t2};
    a.anchors["a"] = "v0";
    a.anchors["b"] = "v1";
    a.edges = {{"v0", t2, "r", "v1"}};
    auto vs = check_alc_conform(a);
    CHECK(has_rule(vs, "edge-label-closure"));
    CHECK(!has_rule(vs, "outgoing-witness"));
  }
  SUBCASE("an outgoing source entering an internal node needs a witness") {
    InterpretationAbstraction a;
    a.nodes = {"v0", "w", "w2"};
    a.labels["v0"] = {t1};
    a.labels["w"] = {t1};
    a.labels["w2"] = {t1};
    a.anchors["a"] = "v0";
    a.edges = {{"w", t1, "r", "v0"}};
    CHECK(has_rule(check_alc_conform(a), "outgoing-witness"));
    // a parallel edge to an outgoing target settles it
    a.edges.push_back({"w", t1, "r", "w2"});
    CHECK(check_alc_conform(a).empty());
  }
  SUBCASE("dangling references are input errors, not violations") {
    InterpretationAbstraction a;
    a.nodes = {"v0"};
    a.labels["v0"] = {t1};
    a.anchors["a"] = "v0";
    a.edges = {{"v0", t1, "r", "nowhere"}};
    CHECK_THROWS_AS(check_alc_conform(a), input_error);
  }
}

TEST_CASE("signature completeness requires closure under equal types") {
  // background: (some r B) implies A, A and B disjoint; abducibles {B, r}.
  // Types with the same B-membership fall into one class.
  AbsContext c = make_abs_context(
      ":kb\n(implies (some r B) A)\n(implies (and A B) bot)\n"
      ":observation\n(instance a A)\n"
      ":sigma\n(concept B)\n(role r)\n:dialect ALC\n");
  const std::size_t t0 = tidx(c.T, {});
  const std::size_t t1 = tidx(c.T, {atom("A")});
  const std::size_t t2 = tidx(c.T, {atom("B")});
  const std::size_t t3 = tidx(c.T, {atom("A"), exists(Role("r"), atom("B"))});
  REQUIRE(sigma_class_of(c.T, c.p.sigma, t3) ==
          std::set<std::size_t>{t0, t1, t3});

  InterpretationAbstraction a;
  a.nodes = {"v0"};
  a.labels["v0"] = {t3};
  a.anchors["a"] = "v0";
  CHECK(has_rule(check_sigma_complete(a, c.T, c.p.sigma),
                 "label-signature-closure"));

  a.labels["v0"] = {t0, t1, t3};
  CHECK(check_sigma_complete(a, c.T, c.p.sigma).empty());

  // edges must also be closed: only the t3 slot reaches w
  a.nodes = {"v0", "w"};
  a.labels["w"] = {t2};
  a.edges = {{"v0", t3, "r", "w"}, {"v0", t2, "r", "w"}};
  auto vs = check_sigma_complete(a, c.T, c.p.sigma);
  CHECK(has_rule(vs, "edge-signature-closure"));
  CHECK(!has_rule(vs, "label-signature-closure"));
  a.edges.push_back({"v0", t0, "r", "w"});
  a.edges.push_back({"v0", t1, "r", "w"});
  CHECK(check_sigma_complete(a, c.T, c.p.sigma).empty());

  // type indices outside the type set are input errors
  a.labels["w"] = {c.T.count()};
  CHECK_THROWS_AS(check_sigma_complete(a, c.T, c.p.sigma), input_error);
}

TEST_CASE("abstracts finds witnesses exactly when the conditions hold") {
  SUBCASE("the all-types open abstraction matches every background model") {
    const AbsFixture& f = fixture("all-types-open");
    AbsContext c = make_abs_context(f.problem);
    auto a = f.build(c.T, c.p.sigma);

    auto I = interp(2, {{"a", 0}}, {{"A", {0}}, {"B", {1}}}, {{"r", {}}});
    auto w = abstracts(a, I, c.T, c.p.sigma);
    REQUIRE(w.has_value());
    CHECK(w->at(0) == "v0");

    // a realizes no admissible type (A and B are disjoint in K)
    auto bad = interp(1, {{"a", 0}}, {{"A", {0}}, {"B", {0}}}, {{"r", {}}});
    CHECK(!abstracts(a, bad, c.T, c.p.sigma).has_value());
  }
  SUBCASE("label membership is required") {
    const AbsFixture& f = fixture("single-named-atom");
    AbsContext c = make_abs_context(f.problem);
    auto a = f.build(c.T, c.p.sigma);
    CHECK(!abstracts(a, interp(1, {{"a", 0}}, {{"B", {}}}, {}), c.T, c.p.sigma)
               .has_value());
    auto w = abstracts(a, interp(1, {{"a", 0}}, {{"B", {0}}}, {}), c.T,
                       c.p.sigma);
    REQUIRE(w.has_value());
    CHECK(w->at(0) == "v0");
  }
  SUBCASE("the canonical model of a type assignment is matched") {
    AbsContext c = make_abs_context(
        ":kb\n(implies (some r B) A)\n:observation\n(instance a A)\n"
        ":sigma\n(concept B)\n(role r)\n:dialect ALC\n");
    const std::size_t t =
        tidx(c.T, {atom("A"), exists(Role("r"), atom("B"))});
    FiniteInterpretation M = model_from_assignment({{"a", t}}, c.T);
    REQUIRE(is_model(M, c.p.kb));

    InterpretationAbstraction a;
    a.nodes = {"va"};
    a.labels["va"] = sigma_class_of(c.T, c.p.sigma, t);
    a.anchors["a"] = "va";
    a.open = {"va"};
    auto w = abstracts(a, M, c.T, c.p.sigma);
    REQUIRE(w.has_value());
    CHECK(w->at(M.individuals.at("a")) == "va");
  }
  SUBCASE("closed nodes admit exactly the listed successors") {
    const AbsFixture& f = fixture("two-named-role");
    AbsContext c = make_abs_context(f.problem);
    auto a = f.build(c.T, c.p.sigma);
    auto AB = [&](std::size_t m) {
      std::vector<std::size_t> all;
      for (std::size_t e = 0; e < m; ++e) all.push_back(e);
      return std::map<std::string, std::vector<std::size_t>>{{"A", all},
                                                             {"B", all}};
    };
    std::map<std::string, std::size_t> ab = {{"a", 0}, {"b", 1}};

    // the listed edge, present: matched with the pinned assignment
    auto ok = abstracts(a, interp(2, ab, AB(2), {{"r", {{0, 1}}}}), c.T,
                        c.p.sigma);
    REQUIRE(ok.has_value());
    CHECK(ok->at(0) == "v0");
    CHECK(ok->at(1) == "v1");
    // the listed edge, absent: the admitted successor is mandatory
    CHECK(!abstracts(a, interp(2, ab, AB(2), {{"r", {}}}), c.T, c.p.sigma)
               .has_value());
    // the target node lists no successors of its own
    CHECK(!abstracts(a, interp(2, ab, AB(2), {{"r", {{0, 1}, {1, 0}}}}), c.T,
                     c.p.sigma)
               .has_value());
    // surplus successors may share the target node...
    CHECK(abstracts(a, interp(3, ab, AB(3), {{"r", {{0, 1}, {0, 2}}}}), c.T,
                    c.p.sigma)
              .has_value());
    // ...but then carry its constraints too
    CHECK(!abstracts(a,
                     interp(3, ab, AB(3), {{"r", {{0, 1}, {0, 2}, {2, 1}}}}),
                     c.T, c.p.sigma)
               .has_value());
  }
  SUBCASE("a missing anchored individual is an input error") {
    const AbsFixture& f = fixture("single-named-atom");
    AbsContext c = make_abs_context(f.problem);
    auto a = f.build(c.T, c.p.sigma);
    auto I = interp(1, {}, {{"B", {0}}}, {});
    CHECK_THROWS_AS(abstracts(a, I, c.T, c.p.sigma), input_error);
  }
}

TEST_CASE("extraction renders the expected hypotheses") {
  CHECK(extracted("single-named-atom") == "(instance a B)\n");
  CHECK(extracted("named-negative-literal") == "(instance a (not B))\n");
  CHECK(extracted("label-disjunction") == "(instance a (or (not B) B))\n");
  CHECK(extracted("two-named-role") ==
        "(instance a (and A B (all r (and A B (not (some r top))))))\n"
        "(instance b (and A B (not (some r top))))\n"
        "(related a b r)\n");
  CHECK(extracted("forbidden-role") ==
        "(instance a (and A (not B) (not (some r top))))\n");
  // abducible names outside the background vocabulary contribute no literals,
  // but abducible roles still get their universal restriction
  CHECK(extracted("foreign-signature-names") ==
        "(instance a (and A B (not (some s top))))\n");
  CHECK(extracted("exists-child-closed").find("(some r ") !=
        std::string::npos);
  CHECK(extracted("self-loop-shadowed").find("(related a a r)") !=
        std::string::npos);
  CHECK(extracted("anchored-witness").find("(related a b r)") !=
        std::string::npos);
  CHECK(extracted("mixed-anchors").find("(related a b r)") !=
        std::string::npos);
  // deterministic output
  CHECK(extracted("outgoing-chain") == extracted("outgoing-chain"));
}

TEST_CASE("extraction refuses abstractions that fail the checks") {
  AbsContext c = make_abs_context(
      ":kb\n(implies (some r B) A)\n(implies (and A B) bot)\n"
      ":observation\n(instance a A)\n"
      ":sigma\n(concept B)\n(role r)\n:dialect ALC\n");
  InterpretationAbstraction a;
  a.nodes = {"v0"};
  a.labels["v0"] = {tidx(c.T, {atom("A"), exists(Role("r"), atom("B"))})};
  a.anchors["a"] = "v0";
  CHECK_THROWS_AS(abstraction_to_abox(a, c.T, c.p.sigma), input_error);
}

TEST_CASE("extracted ABox models are the matched background models") {
  // the full corpus over small domains; the acceptance run widens the bound
  for (const auto& f : abstraction_fixtures()) {
    CAPTURE(f.name);
    auto failure = check_extraction_equivalence(f, 2);
    CHECK_MESSAGE(!failure.has_value(), failure.value_or(""));
  }
  for (const std::string name :
       {"single-named-atom", "label-disjunction", "two-named-role",
        "exists-child-closed", "self-loop-shadowed"}) {
    auto failure = check_extraction_equivalence(fixture(name), 3);
    CHECK_MESSAGE(!failure.has_value(), failure.value_or(""));
  }
}

TEST_CASE("systematic edge-free abstractions all satisfy the equivalence") {
  const std::string problem =
      ":kb\n(implies (and A B) bot)\n:observation\n(instance a A)\n"
      ":sigma\n(concept A)\n(concept B)\n(role r)\n:dialect ALC\n";
  AbsContext c = make_abs_context(problem);
  const std::size_t n = c.T.count();
  REQUIRE(n == 3);

  std::size_t checked = 0;
  for (std::uint64_t lv = 1; lv < (std::uint64_t{1} << n); ++lv)
    for (int v_open = 0; v_open < 2; ++v_open)
      for (std::uint64_t lw = 0; lw < (std::uint64_t{1} << n); ++lw)
        for (int w_open = 0; w_open < 2; ++w_open) {
          if (lw == 0 && w_open) continue;  // no second node at all
          auto build = [=](const TypeSet&, const Signature&) {
            InterpretationAbstraction a;
            a.nodes = {"v0"};
            for (std::size_t t = 0; t < n; ++t)
              if (lv >> t & 1) a.labels["v0"].insert(t);
            a.anchors["a"] = "v0";
            if (v_open) a.open.insert("v0");
            if (lw != 0) {
              a.nodes.push_back("w");
              for (std::size_t t = 0; t < n; ++t)
                if (lw >> t & 1) a.labels["w"].insert(t);
              if (w_open) a.open.insert("w");
            }
            return a;
          };
          auto failure = check_extraction_equivalence(
              {"edge-free-candidate", problem, build}, 2);
          CHECK_MESSAGE(!failure.has_value(), failure.value_or(""));
          ++checked;
        }
  CHECK(checked == 14 * 15);
}
