#include "abd/flat_abduce.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

#include "abd/parser.hpp"
#include "abd/reasoner.hpp"
#include "type_graph.hpp"

namespace abd {

FreshNamer::FreshNamer(const std::set<std::string>& taken) : prefix_("_b") {
  auto clashes = [&] {
    for (const auto& n : taken)
      if (n.rfind(prefix_, 0) == 0) return true;
    return false;
  };
  while (clashes()) prefix_ += "_";
}

std::string FreshNamer::per_type(std::size_t t) const {
  return prefix_ + "t" + std::to_string(t);
}

std::string FreshNamer::chain(const std::string& ind, std::size_t t,
                              std::size_t level) const {
  // the length prefix keeps the scheme injective whatever ind contains
  return prefix_ + "c" + std::to_string(ind.size()) + "_" + ind + "_" +
         std::to_string(t) + "_" + std::to_string(level);
}

std::string FreshNamer::sequential(std::size_t i) const {
  return prefix_ + std::to_string(i);
}

KnowledgeBase trivial_hypothesis(const AbductionProblem& problem) {
  std::set<std::string> inds =
      individuals_of(merged(problem.kb, problem.observation));
  KnowledgeBase h;
  for (const auto& a : inds)
    for (const auto& c : problem.sigma.concepts)
      h.add(ConceptAssertion{a, atom(c)});
  for (const auto& r : problem.sigma.roles)
    for (const auto& a : inds)
      for (const auto& b : inds) h.add(RoleAssertion{r, a, b});
  return h;
}

bool selector_compatible(const Selector& s, const KnowledgeBase& kb,
                         const TypeSet& T) {
  auto type_of = [&](const std::string& name) {
    auto it = s.find(name);
    if (it == s.end()) throw input_error("selector is not total: " + name);
    return it->second;
  };
  for (const auto& ax : kb.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      auto idx = T.closure->index_of(desugar(ca->c));
      if (!idx) throw input_error("asserted concept outside the closure");
      if (!T.member(type_of(ca->individual), *idx)) return false;
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      if (!T.succ_permits(type_of(ra->from), Role(ra->role), type_of(ra->to)))
        return false;
    }
  }
  return true;
}

namespace {

// H_s over the original individuals plus b_t for each listed type: the
// Sigma-atoms of each node's type, then every succ-permitted Sigma-role edge.
KnowledgeBase assemble_hypothesis(const Selector& s, const TypeSet& T,
                                  const Signature& sigma,
                                  const std::vector<std::size_t>& fresh_types) {
  std::set<std::string> taken;
  for (const auto& [name, t] : s) taken.insert(name);
  FreshNamer namer(taken);

  std::vector<std::pair<std::string, std::size_t>> nodes;
  for (const auto& [name, t] : s) nodes.push_back({name, t});
  for (std::size_t t : fresh_types) nodes.push_back({namer.per_type(t), t});

  const Closure& cl = *T.closure;
  KnowledgeBase h;
  for (const auto& [name, t] : nodes)
    for (std::size_t idx : cl.free_bits) {
      const ConceptPtr& c = cl.concepts[idx];
      if (c->kind == CKind::Atom && sigma.has_concept(c->name) &&
          T.member(t, idx))
        h.add(ConceptAssertion{name, c});
    }
  for (const auto& r : sigma.roles) {
    Role role(r);
    for (const auto& [from, ft] : nodes)
      for (const auto& [to, tt] : nodes)
        if (T.succ_permits(ft, role, tt)) h.add(RoleAssertion{r, from, to});
  }
  return h;
}

std::vector<std::size_t> all_types(const TypeSet& T) {
  std::vector<std::size_t> out(T.count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

// Lexicographic product walk over per-individual candidate type lists.
// yield returns true to stop at the current combination.
bool odometer(const std::vector<std::vector<std::size_t>>& domains, Ctx& ctx,
              const std::function<bool(const std::vector<std::size_t>&)>& yield) {
  for (const auto& d : domains)
    if (d.empty()) return false;
  std::vector<std::size_t> pos(domains.size(), 0);
  std::vector<std::size_t> combo(domains.size());
  while (true) {
    ctx.add_node();
    ctx.stats.selectors_tried += 1;
    for (std::size_t i = 0; i < domains.size(); ++i)
      combo[i] = domains[i][pos[i]];
    if (yield(combo)) return true;
    std::size_t i = domains.size();
    while (i > 0) {
      --i;
      if (++pos[i] < domains[i].size()) break;
      pos[i] = 0;
      if (i == 0) return false;
    }
    if (domains.empty()) return false;
  }
}

}  // namespace

KnowledgeBase build_selector_hypothesis(const Selector& s, const TypeSet& T,
                                        const Signature& sigma) {
  return assemble_hypothesis(s, T, sigma, all_types(T));
}

KnowledgeBase reachable_selector_hypothesis(const Selector& s, const TypeSet& T,
                                            const Signature& sigma) {
  return assemble_hypothesis(s, T, sigma, reachable_types(s, T, sigma));
}

std::optional<KnowledgeBase> flat_abduce(const AbductionProblem& problem,
                                         Ctx& ctx) {
  if (problem.mode != Mode::Flat)
    throw input_error("flat_abduce requires mode flat");

  if (problem.dialect == Dialect::EL) {
    KnowledgeBase h = trivial_hypothesis(problem);
    auto rep = check_hypothesis(problem, h, ctx);
    if (rep.a2_entails) return h;
    return std::nullopt;
  }

  ClosurePtr cl = build_closure(problem.kb, problem.observation);
  TypeSet T = type_elimination(cl, problem.kb, ctx);
  if (T.count() == 0) return std::nullopt;  // K itself is inconsistent

  std::set<std::string> ind_set =
      individuals_of(merged(problem.kb, problem.observation));
  std::vector<std::string> inds(ind_set.begin(), ind_set.end());

  auto verified = [&](const Selector& s,
                      const KnowledgeBase& h) -> std::optional<KnowledgeBase> {
    auto rep = check_hypothesis(problem, h, ctx);
    if (!(rep.a1_consistent && rep.a2_entails && rep.a3_in_signature))
      throw std::logic_error(
          "internal: selector hypothesis failed verification");
    (void)s;
    return h;
  };

  if (problem.dialect == Dialect::ELbot &&
      !kb_has_assertions(problem.kb)) {
    CompiledTBox tb(*cl, problem.kb);
    std::vector<Bits> V = vertex_tables(*cl, tb, ctx);
    std::vector<Bits> S = saturate_type_graph(T, tb, V, problem.sigma, ctx);

    // per-individual concept goals and cross-individual role goals
    std::map<std::string, std::vector<std::size_t>> concept_goals;
    std::vector<std::tuple<std::size_t, std::size_t, Role>> role_goals;
    std::map<std::string, std::size_t> ind_pos;
    for (std::size_t i = 0; i < inds.size(); ++i) ind_pos[inds[i]] = i;
    for (const auto& ax : problem.observation.axioms) {
      if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
        auto idx = cl->index_of(desugar(ca->c));
        if (!idx) throw input_error("observation concept outside the closure");
        concept_goals[ca->individual].push_back(*idx);
      } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        if (problem.kb.contains(ax)) continue;
        if (!problem.sigma.has_role(ra->role)) return std::nullopt;
        role_goals.push_back(
            {ind_pos.at(ra->from), ind_pos.at(ra->to), Role(ra->role)});
      }
    }

    std::vector<std::vector<std::size_t>> domains(inds.size());
    for (std::size_t i = 0; i < inds.size(); ++i) {
      const auto& goals = concept_goals[inds[i]];
      for (std::size_t t = 0; t < T.count(); ++t) {
        bool ok = true;
        for (std::size_t g : goals) ok = ok && S[t].test(g);
        if (ok) domains[i].push_back(t);
      }
    }

    std::optional<KnowledgeBase> found;
    odometer(domains, ctx, [&](const std::vector<std::size_t>& combo) {
      for (const auto& [from, to, role] : role_goals)
        if (!T.succ_permits(combo[from], role, combo[to])) return false;
      Selector s;
      for (std::size_t i = 0; i < inds.size(); ++i) s[inds[i]] = combo[i];
      found = verified(s, reachable_selector_hypothesis(s, T, problem.sigma));
      return true;
    });
    return found;
  }

  // generic selector enumeration
  std::vector<std::vector<std::size_t>> domains(inds.size(), all_types(T));
  std::optional<KnowledgeBase> found;
  odometer(domains, ctx, [&](const std::vector<std::size_t>& combo) {
    Selector s;
    for (std::size_t i = 0; i < inds.size(); ++i) s[inds[i]] = combo[i];
    if (!selector_compatible(s, problem.kb, T)) return false;
    KnowledgeBase h = problem.dialect == Dialect::ELbot
                          ? reachable_selector_hypothesis(s, T, problem.sigma)
                          : build_selector_hypothesis(s, T, problem.sigma);
    auto rep = check_hypothesis(problem, h, ctx);
    if (!(rep.a1_consistent && rep.a2_entails && rep.a3_in_signature))
      return false;
    found = h;
    return true;
  });
  return found;
}

KnowledgeBase quotient_by_types(const KnowledgeBase& h0,
                                const AbductionProblem& problem, Ctx& ctx) {
  for (const auto& ax : h0.axioms)
    if (std::holds_alternative<CI>(ax))
      throw input_error("hypothesis must be an ABox");
  KnowledgeBase kh = merged(problem.kb, h0);
  ClosurePtr cl = build_closure(kh, problem.observation);
  TypeSet T = type_elimination(cl, kh, ctx);
  auto assignment = alc_consistent(kh, T, ctx);
  if (!assignment)
    throw input_error("hypothesis is inconsistent with the background kb");

  std::set<std::string> known =
      individuals_of(merged(problem.kb, problem.observation));
  std::set<std::string> taken = known;
  for (const auto& [name, t] : *assignment) taken.insert(name);
  FreshNamer namer(taken);

  auto rename = [&](const std::string& name) {
    if (known.count(name)) return name;
    return namer.per_type(assignment->at(name));
  };

  std::vector<Axiom> rewritten;
  for (const auto& ax : h0.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax))
      rewritten.push_back(ConceptAssertion{rename(ca->individual), ca->c});
    else if (const auto* ra = std::get_if<RoleAssertion>(&ax))
      rewritten.push_back(
          RoleAssertion{ra->role, rename(ra->from), rename(ra->to)});
  }
  std::sort(rewritten.begin(), rewritten.end(),
            [](const Axiom& a, const Axiom& b) { return compare(a, b) < 0; });
  rewritten.erase(std::unique(rewritten.begin(), rewritten.end(),
                              [](const Axiom& a, const Axiom& b) {
                                return equal(a, b);
                              }),
                  rewritten.end());
  KnowledgeBase out;
  for (auto& ax : rewritten) out.add(std::move(ax));
  return out;
}

}  // namespace abd
