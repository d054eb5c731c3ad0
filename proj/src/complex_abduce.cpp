#include "abd/complex_abduce.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <stdexcept>
#include <tuple>

#include "abd/reasoner.hpp"
#include "type_graph.hpp"

namespace abd {

namespace {

void expand_assertion(const std::string& node, const ConceptPtr& c,
                      RootedFlatABox& out, FreshNamer& namer,
                      std::size_t& next_fresh,
                      std::deque<ConceptAssertion>& queue) {
  switch (c->kind) {
    case CKind::Top:
    case CKind::Bot:
    case CKind::Atom:
      out.abox.add(ConceptAssertion{node, c});
      break;
    case CKind::And:
      for (const auto& arg : c->args)
        expand_assertion(node, arg, out, namer, next_fresh, queue);
      break;
    case CKind::Exists: {
      std::string child = namer.sequential(++next_fresh);
      // a parent fresh name is always registered before its children
      auto it = out.root.find(node);
      out.abox.add(RoleAssertion{c->role.name, node, child});
      out.root[child] = it != out.root.end() ? it->second : node;
      queue.push_back(ConceptAssertion{child, c->args[0]});
      break;
    }
    default:
      throw input_error("flatten requires an EL-bot ABox");
  }
}

}  // namespace

RootedFlatABox flatten(const KnowledgeBase& abox) {
  if (!abox.is_abox()) throw input_error("flatten requires an ABox");
  if (detect_dialect(abox, KnowledgeBase{}) > Dialect::ELbot)
    throw input_error("flatten requires an EL-bot ABox");

  RootedFlatABox out;
  FreshNamer namer(individuals_of(abox));
  std::size_t next_fresh = 0;
  std::deque<ConceptAssertion> queue;

  for (const auto& ax : abox.axioms) {
    if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      out.abox.add(*ra);
    } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      expand_assertion(ca->individual, ca->c, out, namer, next_fresh, queue);
    }
  }
  while (!queue.empty()) {
    ConceptAssertion next = queue.front();
    queue.pop_front();
    expand_assertion(next.individual, next.c, out, namer, next_fresh, queue);
  }
  return out;
}

KnowledgeBase rollup(const RootedFlatABox& r) {
  std::set<std::string> fresh;
  for (const auto& [name, root] : r.root) fresh.insert(name);

  std::map<std::string, std::vector<std::string>> fresh_children;
  std::map<std::string, std::size_t> unresolved;  // fresh successors left
  std::set<std::string> has_incoming;
  for (const auto& name : fresh) unresolved[name] = 0;
  for (const auto& ax : r.abox.axioms) {
    const auto* ra = std::get_if<RoleAssertion>(&ax);
    if (!ra) continue;
    if (fresh.count(ra->to)) has_incoming.insert(ra->to);
    if (!fresh.count(ra->from)) continue;
    if (!fresh.count(ra->to))
      throw input_error("fresh individual points back at an original");
    unresolved[ra->from] += 1;
  }
  for (const auto& name : fresh)
    if (!has_incoming.count(name))
      throw input_error("fresh individual without an incoming edge");

  // fold leaves first; every fresh concept is a conjunction of the node's
  // asserted concepts and one existential per outgoing edge, in input order
  std::map<std::string, ConceptPtr> folded;
  std::vector<std::string> ready;
  for (const auto& [name, left] : unresolved)
    if (left == 0) ready.push_back(name);
  while (!ready.empty()) {
    std::string b = ready.back();
    ready.pop_back();
    std::vector<ConceptPtr> parts;
    for (const auto& ax : r.abox.axioms) {
      if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
        if (ca->individual == b) parts.push_back(ca->c);
      } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        if (ra->from == b) parts.push_back(exists(Role(ra->role), folded.at(ra->to)));
      }
    }
    folded[b] = conj(parts);
    for (const auto& ax : r.abox.axioms) {
      const auto* ra = std::get_if<RoleAssertion>(&ax);
      if (!ra || ra->to != b || !fresh.count(ra->from)) continue;
      if (--unresolved[ra->from] == 0) ready.push_back(ra->from);
    }
  }
  if (folded.size() != fresh.size())
    throw input_error("cycle among fresh individuals");

  KnowledgeBase out;
  for (const auto& ax : r.abox.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      if (!fresh.count(ca->individual)) out.add(*ca);
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      if (fresh.count(ra->from)) continue;
      if (fresh.count(ra->to))
        out.add(ConceptAssertion{ra->from,
                                 exists(Role(ra->role), folded.at(ra->to))});
      else
        out.add(*ra);
    }
  }
  return out;
}

namespace {

// levels ≥ 0; level 0 is just the original individuals. Fresh levels carry
// only the types forward-reachable from the selected ones: derivations at
// the originals flow backward along role edges, so unreachable per-type
// individuals could never contribute and only bloat the chain.
RootedFlatABox build_chain(const Selector& s, const TypeSet& T,
                           const Signature& sigma, std::size_t levels) {
  const Closure& cl = *T.closure;
  std::vector<std::size_t> pool = reachable_types(s, T, sigma);
  std::set<std::string> taken;
  for (const auto& [name, t] : s) taken.insert(name);
  FreshNamer namer(taken);

  auto node_name = [&](const std::string& a, std::size_t t, std::size_t k) {
    return k == 0 ? a : namer.chain(a, t, k);
  };
  auto sigma_atoms = [&](std::size_t t) {
    std::vector<ConceptPtr> out;
    for (std::size_t idx : cl.free_bits) {
      const ConceptPtr& c = cl.concepts[idx];
      if (c->kind == CKind::Atom && sigma.has_concept(c->name) &&
          T.member(t, idx))
        out.push_back(c);
    }
    return out;
  };

  RootedFlatABox out;
  for (const auto& [a, t] : s)
    for (const auto& c : sigma_atoms(t))
      out.abox.add(ConceptAssertion{a, c});
  for (const auto& rl : sigma.roles) {
    Role role(rl);
    for (const auto& [a, ta] : s)
      for (const auto& [b, tb] : s)
        if (T.succ_permits(ta, role, tb)) out.abox.add(RoleAssertion{rl, a, b});
  }

  for (std::size_t k = 1; k <= levels; ++k) {
    for (const auto& [a, ta] : s) {
      for (const auto& rl : sigma.roles) {
        Role role(rl);
        if (k == 1) {
          for (std::size_t tt : pool)
            if (T.succ_permits(ta, role, tt))
              out.abox.add(RoleAssertion{rl, a, node_name(a, tt, 1)});
        } else {
          for (std::size_t tf : pool)
            for (std::size_t tt : pool)
              if (T.succ_permits(tf, role, tt))
                out.abox.add(RoleAssertion{rl, node_name(a, tf, k - 1),
                                           node_name(a, tt, k)});
        }
      }
    }
    for (const auto& [a, ta] : s)
      for (std::size_t t : pool) {
        out.root[node_name(a, t, k)] = a;
        for (const auto& c : sigma_atoms(t))
          out.abox.add(ConceptAssertion{node_name(a, t, k), c});
      }
  }

  // fresh names that ended up in no assertion are not part of the ABox
  std::set<std::string> mentioned = individuals_of(out.abox);
  for (auto it = out.root.begin(); it != out.root.end();)
    it = mentioned.count(it->first) ? std::next(it) : out.root.erase(it);
  return out;
}

bool chain_entails(const AbductionProblem& problem, const KnowledgeBase& abox,
                   Ctx& ctx) {
  KnowledgeBase kb = merged(problem.kb, abox);
  ElSaturation sat(kb, problem.observation.axioms, ctx);
  if (!sat.consistent()) return false;
  for (const auto& goal : problem.observation.axioms)
    if (!sat.holds(goal)) return false;
  return true;
}

}  // namespace

RootedFlatABox chain_hypothesis(const Selector& s, const TypeSet& T,
                                const Signature& sigma, std::size_t L) {
  if (L == 0) throw input_error("chain length must be at least 1");
  return build_chain(s, T, sigma, L);
}

std::optional<KnowledgeBase> complex_abduce_elbot(
    const AbductionProblem& problem, std::optional<std::size_t> chain_length,
    Ctx& ctx) {
  if (problem.dialect > Dialect::ELbot)
    throw input_error("complex abduction is implemented for EL-bot only");
  if (problem.mode == Mode::Flat)
    throw input_error("complex abduction requires a complex mode");

  ClosurePtr cl = build_closure(problem.kb, problem.observation);
  TypeSet T = type_elimination(cl, problem.kb, ctx);
  if (T.count() == 0) return std::nullopt;

  std::size_t L = chain_length ? *chain_length : T.count();
  if (L == 0) L = 1;

  std::set<std::string> ind_set =
      individuals_of(merged(problem.kb, problem.observation));
  std::vector<std::string> inds(ind_set.begin(), ind_set.end());

  // Type-graph screening, valid for assertion-free backgrounds: from the
  // once-per-problem saturation S of the quotient graph, compute what each
  // original individual could derive in a chain of unbounded depth. A
  // selector that misses a goal here misses it at every finite depth too, so
  // the materialized depth probes run only for selectors that pass.
  const bool screened = !kb_has_assertions(problem.kb);
  std::optional<CompiledTBox> tb;
  std::vector<Bits> V, S, seed;
  std::vector<std::vector<std::size_t>> concept_goals(inds.size());
  std::vector<std::tuple<std::size_t, std::size_t, Role>> role_goals;
  if (screened) {
    tb.emplace(*cl, problem.kb);
    V = vertex_tables(*cl, *tb, ctx);
    S = saturate_type_graph(T, *tb, V, problem.sigma, ctx);

    // seed[t]: Sigma-atoms of t plus every existential already witnessed by
    // a permitted level-one successor type, closed under the TBox
    seed.assign(T.count(), Bits(cl->size()));
    for (std::size_t t = 0; t < T.count(); ++t) {
      Bits& d = seed[t];
      d.set(0);
      for (std::size_t idx : cl->free_bits) {
        const ConceptPtr& c = cl->concepts[idx];
        if (c->kind == CKind::Atom && problem.sigma.has_concept(c->name) &&
            T.member(t, idx))
          d.set(idx);
      }
      for (const auto& e : tb->exists_entries) {
        if (d.test(e.entry) || e.role.inverted ||
            !problem.sigma.has_role(e.role.name))
          continue;
        const Bits& succ = T.succ_candidates(t, e.role);
        for (std::size_t u = succ.find_first(); u != Bits::npos;
             u = succ.find_next(u))
          if (S[u].test(e.inner)) {
            d.set(e.entry);
            break;
          }
      }
      tb->close(*cl, d);
    }

    std::map<std::string, std::size_t> ind_pos;
    for (std::size_t i = 0; i < inds.size(); ++i) ind_pos[inds[i]] = i;
    for (const auto& ax : problem.observation.axioms) {
      if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
        auto idx = cl->index_of(desugar(ca->c));
        if (!idx) throw input_error("observation concept outside the closure");
        concept_goals[ind_pos.at(ca->individual)].push_back(*idx);
      } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        // chains only ever assert Sigma-role edges, and the background holds
        // no assertions, so a foreign role goal is out of reach entirely
        if (!problem.sigma.has_role(ra->role)) return std::nullopt;
        role_goals.push_back(
            {ind_pos.at(ra->from), ind_pos.at(ra->to), Role(ra->role)});
      }
    }
  }

  auto screen_passes = [&](const std::vector<std::size_t>& combo) {
    for (const auto& [from, to, role] : role_goals)
      if (!T.succ_permits(combo[from], role, combo[to])) return false;
    std::vector<Bits> D;
    D.reserve(inds.size());
    for (std::size_t i = 0; i < inds.size(); ++i) D.push_back(seed[combo[i]]);
    bool changed = true;
    while (changed) {
      changed = false;
      ctx.tick();
      for (std::size_t i = 0; i < inds.size(); ++i) {
        bool touched = false;
        // anonymous witnesses of derived existentials
        for (const auto& e : tb->exists_entries) {
          if (!D[i].test(e.entry)) continue;
          const Bits& inner = V[e.inner];
          for (const auto& e2 : tb->exists_entries)
            if (e2.role == e.role && inner.test(e2.inner) &&
                !D[i].test(e2.entry)) {
              D[i].set(e2.entry);
              touched = true;
            }
        }
        // level-zero edges to the other originals
        for (std::size_t j = 0; j < inds.size(); ++j)
          for (const auto& e : tb->exists_entries) {
            if (D[i].test(e.entry) || e.role.inverted ||
                !problem.sigma.has_role(e.role.name))
              continue;
            if (T.succ_permits(combo[i], e.role, combo[j]) &&
                D[j].test(e.inner)) {
              D[i].set(e.entry);
              touched = true;
            }
          }
        if (touched) {
          tb->close(*cl, D[i]);
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i < inds.size(); ++i)
      for (std::size_t g : concept_goals[i])
        if (!D[i].test(g)) return false;
    return true;
  };

  // smallest chain depth whose hypothesis entails the observation, or none
  auto minimal_depth = [&](const Selector& s) -> std::optional<std::size_t> {
    std::size_t lo = 0, probe = 0;
    std::optional<std::size_t> hi;
    while (true) {
      ctx.tick();
      if (chain_entails(problem, build_chain(s, T, problem.sigma, probe).abox,
                        ctx)) {
        hi = probe;
        break;
      }
      if (probe >= L) return std::nullopt;
      lo = probe + 1;
      probe = std::min(L, probe == 0 ? std::size_t{1} : probe * 2);
    }
    while (lo < *hi) {
      std::size_t mid = lo + (*hi - lo) / 2;
      if (chain_entails(problem, build_chain(s, T, problem.sigma, mid).abox,
                        ctx))
        hi = mid;
      else
        lo = mid + 1;
    }
    return hi;
  };

  auto finish = [&](const Selector& s,
                    std::size_t depth) -> KnowledgeBase {
    RootedFlatABox chain = build_chain(s, T, problem.sigma, depth);
    const auto& axs = chain.abox.axioms;
    std::vector<char> active(axs.size(), 1);
    auto entails_without = [&](std::size_t skip) {
      KnowledgeBase kb = problem.kb;
      for (std::size_t i = 0; i < axs.size(); ++i)
        if (active[i] && i != skip) kb.add(axs[i]);
      ElSaturation sat(kb, problem.observation.axioms, ctx);
      if (!sat.consistent()) return false;
      for (const auto& goal : problem.observation.axioms)
        if (!sat.holds(goal)) return false;
      return true;
    };

    // drop whole fresh individuals first, newest first, then single assertions
    std::vector<std::string> fresh_order;
    for (const auto& ax : axs)
      if (const auto* ra = std::get_if<RoleAssertion>(&ax))
        if (chain.root.count(ra->to) &&
            (fresh_order.empty() || fresh_order.back() != ra->to) &&
            std::find(fresh_order.begin(), fresh_order.end(), ra->to) ==
                fresh_order.end())
          fresh_order.push_back(ra->to);
    for (std::size_t fi = fresh_order.size(); fi-- > 0;) {
      ctx.add_node();
      const std::string& b = fresh_order[fi];
      std::vector<std::size_t> touched;
      for (std::size_t i = 0; i < axs.size(); ++i) {
        if (!active[i]) continue;
        bool hit = false;
        if (const auto* ca = std::get_if<ConceptAssertion>(&axs[i]))
          hit = ca->individual == b;
        else if (const auto* ra = std::get_if<RoleAssertion>(&axs[i]))
          hit = ra->from == b || ra->to == b;
        if (hit) {
          active[i] = 0;
          touched.push_back(i);
        }
      }
      if (touched.empty()) continue;
      if (!entails_without(axs.size()))
        for (std::size_t i : touched) active[i] = 1;
    }
    for (std::size_t i = axs.size(); i-- > 0;) {
      if (!active[i]) continue;
      ctx.add_node();
      if (entails_without(i)) active[i] = 0;
    }

    // remove anything no longer reachable from an original individual
    std::set<std::string> reach = ind_set;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < axs.size(); ++i) {
        if (!active[i]) continue;
        const auto* ra = std::get_if<RoleAssertion>(&axs[i]);
        if (ra && reach.count(ra->from) && !reach.count(ra->to)) {
          reach.insert(ra->to);
          grew = true;
        }
      }
    }
    RootedFlatABox pruned;
    for (std::size_t i = 0; i < axs.size(); ++i) {
      if (!active[i]) continue;
      bool keep = true;
      if (const auto* ca = std::get_if<ConceptAssertion>(&axs[i]))
        keep = reach.count(ca->individual) > 0;
      else if (const auto* ra = std::get_if<RoleAssertion>(&axs[i]))
        keep = reach.count(ra->from) > 0 && reach.count(ra->to) > 0;
      if (keep) pruned.abox.add(axs[i]);
    }
    std::set<std::string> left = individuals_of(pruned.abox);
    for (const auto& [name, root] : chain.root)
      if (left.count(name)) pruned.root[name] = root;

    KnowledgeBase h = rollup(pruned);
    auto rep = check_hypothesis(problem, h, ctx);
    if (!(rep.a1_consistent && rep.a2_entails && rep.a3_in_signature))
      throw std::logic_error("internal: rolled-up hypothesis fails checks");
    return h;
  };

  std::vector<std::size_t> pos(inds.size(), 0);
  while (true) {
    ctx.add_node();
    ctx.stats.selectors_tried += 1;
    Selector s;
    for (std::size_t i = 0; i < inds.size(); ++i) s[inds[i]] = pos[i];
    if (selector_compatible(s, problem.kb, T) &&
        (!screened || screen_passes(pos))) {
      auto depth = minimal_depth(s);
      if (depth) return finish(s, *depth);
    }
    std::size_t i = inds.size();
    bool advanced = false;
    while (i > 0) {
      --i;
      if (++pos[i] < T.count()) {
        advanced = true;
        break;
      }
      pos[i] = 0;
    }
    if (!advanced) return std::nullopt;
  }
}

}  // namespace abd
