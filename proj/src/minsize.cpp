#include "abd/minsize.hpp"

#include <algorithm>
#include <functional>

#include "abd/flat_abduce.hpp"
#include "abd/reasoner.hpp"
#include "abd/typecore.hpp"

namespace abd {

namespace {

bool still_consistent(const AbductionProblem& p, const KnowledgeBase& h,
                      Ctx& ctx) {
  KnowledgeBase kh = merged(p.kb, h);
  if (p.dialect <= Dialect::ELbot) return el_consistent(kh);
  ClosurePtr cl = build_closure(kh, p.observation);
  TypeSet T = type_elimination(cl, kh, ctx);
  return alc_consistent(kh, T, ctx).has_value();
}

// fresh individuals are interchangeable: accept a subset only when it uses
// them in sequence f1, f2, ...
bool fresh_prefix_ok(const KnowledgeBase& h,
                     const std::vector<std::string>& fresh) {
  std::set<std::string> used;
  for (const auto& ax : h.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax))
      used.insert(ca->individual);
    else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      used.insert(ra->from);
      used.insert(ra->to);
    }
  }
  bool gap = false;
  for (const auto& f : fresh) {
    if (used.count(f)) {
      if (gap) return false;
    } else {
      gap = true;
    }
  }
  return true;
}

struct Search {
  const AbductionProblem& problem;
  const std::vector<Axiom>& pool;
  const std::vector<std::string>& fresh;
  Ctx& ctx;
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> suffix;  // total size of pool[i..]
  std::vector<std::size_t> pick;
  bool prune_a1;

  Search(const AbductionProblem& p, const std::vector<Axiom>& pl,
         const std::vector<std::string>& fr, Ctx& c)
      : problem(p), pool(pl), fresh(fr), ctx(c) {
    for (const auto& ax : pool) sizes.push_back(size_of(ax));
    suffix.assign(pool.size() + 1, 0);
    for (std::size_t i = pool.size(); i-- > 0;)
      suffix[i] = suffix[i + 1] + sizes[i];
    prune_a1 = problem.dialect != Dialect::EL;
  }

  KnowledgeBase picked() const {
    KnowledgeBase h;
    for (std::size_t i : pick) h.add(pool[i]);
    return h;
  }

  // subsets of total size exactly `target`, indices ascending
  bool dfs(std::size_t start, std::uint64_t target,
           std::optional<KnowledgeBase>& out) {
    ctx.add_node();
    if (target == 0) {
      KnowledgeBase h = picked();
      if (!fresh_prefix_ok(h, fresh)) return false;
      auto rep = check_hypothesis(problem, h, ctx);
      if (rep.a1_consistent && rep.a2_entails && rep.a3_in_signature) {
        out = h;
        return true;
      }
      return false;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      if (sizes[i] > target) continue;
      if (suffix[i] < target) return false;  // the tail cannot reach it
      pick.push_back(i);
      bool viable = true;
      if (prune_a1 && !still_consistent(problem, picked(), ctx))
        viable = false;
      if (viable && dfs(i + 1, target - sizes[i], out)) return true;
      pick.pop_back();
    }
    return false;
  }
};

}  // namespace

std::vector<Axiom> candidate_pool(const AbductionProblem& problem,
                                  const SearchConfig& cfg) {
  if (problem.mode != Mode::Flat)
    throw input_error("size-restricted search requires mode flat");
  std::set<std::string> ind_set =
      individuals_of(merged(problem.kb, problem.observation));
  std::vector<std::string> nodes(ind_set.begin(), ind_set.end());
  if (cfg.pool == SearchConfig::Pool::WithFreshPool) {
    FreshNamer namer(ind_set);
    for (std::size_t i = 1; i <= cfg.fresh_count; ++i)
      nodes.push_back(namer.sequential(i));
  }
  std::vector<Axiom> pool;
  for (const auto& n : nodes)
    for (const auto& c : problem.sigma.concepts)
      pool.push_back(ConceptAssertion{n, atom(c)});
  for (const auto& r : problem.sigma.roles)
    for (const auto& x : nodes)
      for (const auto& y : nodes) pool.push_back(RoleAssertion{r, x, y});
  return pool;
}

MinResult min_abduce(const AbductionProblem& problem, const SearchConfig& cfg,
                     Ctx& ctx) {
  std::vector<Axiom> pool = candidate_pool(problem, cfg);

  std::set<std::string> ind_set =
      individuals_of(merged(problem.kb, problem.observation));
  std::vector<std::string> fresh;
  if (cfg.pool == SearchConfig::Pool::WithFreshPool) {
    FreshNamer namer(ind_set);
    for (std::size_t i = 1; i <= cfg.fresh_count; ++i)
      fresh.push_back(namer.sequential(i));
  }

  std::optional<Ctx> local;
  Ctx* run = &ctx;
  if (cfg.node_budget != 0 || cfg.wall_seconds != 0.0) {
    Budget b = ctx.budget();
    if (cfg.node_budget != 0) b.max_nodes = cfg.node_budget;
    if (cfg.wall_seconds != 0.0) b.wall_seconds = cfg.wall_seconds;
    local.emplace(b);
    run = &*local;
  }

  std::uint64_t total = 0;
  for (const auto& ax : pool) total += size_of(ax);
  std::uint64_t bound = problem.size_bound ? *problem.size_bound : total;
  bound = std::min(bound, total);

  MinResult result;
  try {
    Search search(problem, pool, fresh, *run);
    for (std::uint64_t target = 0; target <= bound; ++target) {
      std::optional<KnowledgeBase> out;
      if (search.dfs(0, target, out)) {
        result.outcome = Outcome::Found;
        result.hypothesis = std::move(out);
        result.size = target;
        break;
      }
    }
  } catch (const resource_error&) {
    result.outcome = Outcome::Unknown;
  }
  if (local) {
    ctx.stats.types_built += local->stats.types_built;
    ctx.stats.selectors_tried += local->stats.selectors_tried;
    ctx.stats.search_nodes += local->stats.search_nodes;
  }
  return result;
}

}  // namespace abd
