#include "abd/minsize.hpp"

#include <optional>

#include "doctest.h"

#include "abd/parser.hpp"
#include "abd/reasoner.hpp"

using namespace abd;

namespace {

const char* kFixEl = R"(:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma
(concept B)
(role r)
)";

const char* kFixBot = R"(:kb
(implies (some r B) A)
(implies (and A B) bot)
:observation
(instance a A)
:sigma
(concept B)
(role r)
)";

// exhaustive minimum over all pool subsets, ignoring budgets
std::optional<std::uint64_t> brute_min_size(const AbductionProblem& p,
                                            const std::vector<Axiom>& pool) {
  REQUIRE(pool.size() <= 12);
  std::optional<std::uint64_t> best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pool.size()); ++mask) {
    KnowledgeBase h;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if ((mask >> i) & 1) h.add(pool[i]);
    std::uint64_t sz = size_of(h);
    if (best && sz >= *best) continue;
    Ctx ctx;
    auto rep = check_hypothesis(p, h, ctx);
    if (rep.a1_consistent && rep.a2_entails && rep.a3_in_signature) best = sz;
  }
  return best;
}

}  // namespace

TEST_CASE("candidate pool lists signature atoms in a stable order") {
  SearchConfig existing;
  auto p = parse_problem(kFixEl);
  auto pool = candidate_pool(p, existing);
  REQUIRE(pool.size() == 2);
  CHECK(equal(pool[0], Axiom{ConceptAssertion{"a", atom("B")}}));
  CHECK(equal(pool[1], Axiom{RoleAssertion{"r", "a", "a"}}));

  SUBCASE("empty signature gives an empty pool") {
    auto q = parse_problem(R"(:kb
(implies (and A B) bot)
:observation
(instance a top)
:sigma
)");
    CHECK(candidate_pool(q, existing).empty());
  }

  SUBCASE("a fresh pool adds atoms over the new individuals") {
    SearchConfig cfg;
    cfg.pool = SearchConfig::Pool::WithFreshPool;
    cfg.fresh_count = 1;
    auto b = parse_problem(kFixBot);
    auto pl = candidate_pool(b, cfg);
    KnowledgeBase as_kb;
    for (const auto& ax : pl) as_kb.add(ax);
    CHECK(pl.size() == 6);
    CHECK(as_kb.contains(ConceptAssertion{"_b1", atom("B")}));
    CHECK(as_kb.contains(RoleAssertion{"r", "a", "_b1"}));
    CHECK(as_kb.contains(RoleAssertion{"r", "_b1", "a"}));
    CHECK(as_kb.contains(RoleAssertion{"r", "_b1", "_b1"}));
  }

  SUBCASE("non-flat modes are refused") {
    auto q = parse_problem(kFixEl);
    q.mode = Mode::Complex;
    CHECK_THROWS_AS(candidate_pool(q, existing), input_error);
  }
}

TEST_CASE("size-minimal search on the disjointness example") {
  auto p = parse_problem(kFixBot);
  SearchConfig cfg;
  cfg.pool = SearchConfig::Pool::WithFreshPool;
  cfg.fresh_count = 1;

  SUBCASE("bound 5 finds the fresh successor pair") {
    p.size_bound = 5;
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    REQUIRE(res.outcome == Outcome::Found);
    CHECK(res.size == 5);
    REQUIRE(res.hypothesis.has_value());
    CHECK(res.hypothesis->axioms.size() == 2);
    CHECK(res.hypothesis->contains(ConceptAssertion{"_b1", atom("B")}));
    CHECK(res.hypothesis->contains(RoleAssertion{"r", "a", "_b1"}));
    CHECK(size_of(*res.hypothesis) == res.size);
    auto rep = check_hypothesis(p, *res.hypothesis, ctx);
    CHECK(rep.passed());
  }

  SUBCASE("bound 4 is exhausted without an answer") {
    p.size_bound = 4;
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    CHECK(res.outcome == Outcome::None);
    CHECK_FALSE(res.hypothesis.has_value());
  }

  SUBCASE("no bound means pure minimization") {
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    REQUIRE(res.outcome == Outcome::Found);
    CHECK(res.size == 5);
  }

  SUBCASE("a tiny node budget reports unknown rather than none") {
    p.size_bound = 5;
    cfg.node_budget = 3;
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    CHECK(res.outcome == Outcome::Unknown);
    CHECK_FALSE(res.hypothesis.has_value());
  }
}

TEST_CASE("search minimum matches the brute-force minimum on small pools") {
  struct Fixture {
    const char* text;
    std::size_t fresh;
  };
  const Fixture fixtures[] = {
      {kFixBot, 1},
      {kFixEl, 1},
      {R"(:kb
(implies B A)
(implies C A)
:observation
(instance a A)
:sigma
(concept B)
(concept C)
)",
       0},
      {R"(:kb
(implies B A)
(implies (and A B) bot)
:observation
(instance a A)
:sigma
(concept B)
:dialect ELbot
)",
       1},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.text);
    auto p = parse_problem(f.text);
    SearchConfig cfg;
    if (f.fresh > 0) {
      cfg.pool = SearchConfig::Pool::WithFreshPool;
      cfg.fresh_count = f.fresh;
    }
    auto pool = candidate_pool(p, cfg);
    auto expected = brute_min_size(p, pool);
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    if (expected) {
      REQUIRE(res.outcome == Outcome::Found);
      CHECK(res.size == *expected);
    } else {
      CHECK(res.outcome == Outcome::None);
    }
  }
}

TEST_CASE("equal-size winners are tie-broken by pool order") {
  auto p = parse_problem(R"(:kb
(implies B A)
(implies C A)
:observation
(instance a A)
:sigma
(concept B)
(concept C)
)");
  SearchConfig cfg;
  Ctx ctx;
  auto res = min_abduce(p, cfg, ctx);
  REQUIRE(res.outcome == Outcome::Found);
  CHECK(res.size == 2);
  REQUIRE(res.hypothesis.has_value());
  CHECK(res.hypothesis->axioms.size() == 1);
  CHECK(res.hypothesis->contains(ConceptAssertion{"a", atom("B")}));
}

TEST_CASE("fresh individuals are taken in sequence") {
  auto p = parse_problem(kFixBot);
  SearchConfig cfg;
  cfg.pool = SearchConfig::Pool::WithFreshPool;
  cfg.fresh_count = 2;
  Ctx ctx;
  auto res = min_abduce(p, cfg, ctx);
  REQUIRE(res.outcome == Outcome::Found);
  CHECK(res.size == 5);
  CHECK(res.hypothesis->contains(ConceptAssertion{"_b1", atom("B")}));
  CHECK_FALSE(res.hypothesis->contains(ConceptAssertion{"_b2", atom("B")}));
}

TEST_CASE("minimal search stays deterministic") {
  for (int round = 0; round < 2; ++round) {
    auto p = parse_problem(kFixBot);
    SearchConfig cfg;
    cfg.pool = SearchConfig::Pool::WithFreshPool;
    cfg.fresh_count = 2;
    Ctx ctx;
    auto res = min_abduce(p, cfg, ctx);
    REQUIRE(res.outcome == Outcome::Found);
    CHECK(to_text(*res.hypothesis) ==
          "(instance _b1 B)\n(related a _b1 r)\n");
  }
}
