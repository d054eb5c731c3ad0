#include "abd/reasoner.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace abd {

namespace {

KnowledgeBase axioms_as_kb(const std::vector<Axiom>& axioms) {
  KnowledgeBase kb;
  for (const auto& ax : axioms) kb.add(ax);
  return kb;
}

}  // namespace

ElSaturation::ElSaturation(const KnowledgeBase& kb,
                           const std::vector<Axiom>& goals, Ctx& ctx)
    : ctx_(&ctx) {
  KnowledgeBase goal_kb = axioms_as_kb(goals);
  if (detect_dialect(kb, goal_kb) > Dialect::ELbot)
    throw input_error("input outside EL-bot for the EL engine");
  kb_ = desugar(kb);

  std::vector<ConceptPtr> extra;
  for (const auto& ax : goals)
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax))
      extra.push_back(ca->c);
  cl_ = build_closure(kb, goal_kb, extra);
  bot_idx_ = cl_->index_of(bot());

  for (std::size_t i = 0; i < cl_->size(); ++i) {
    const ConceptPtr& c = cl_->concepts[i];
    if (c->kind == CKind::And) and_entries_.push_back(i);
    if (c->kind == CKind::Exists) {
      if (c->role.inverted)
        throw input_error("inverse role in the EL engine");
      exists_entries_.push_back(i);
      role_ids_.emplace(c->role.name, role_ids_.size());
    }
  }
  for (const auto& ax : kb_.axioms) {
    if (const auto* ci = std::get_if<CI>(&ax)) {
      auto l = cl_->index_of(ci->lhs), r = cl_->index_of(ci->rhs);
      if (!l || !r) throw input_error("concept inclusion outside the closure");
      cis_.push_back({*l, *r});
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      role_ids_.emplace(ra->role, role_ids_.size());
    }
  }
  vertex_of_.assign(cl_->size(), -1);

  std::set<std::string> names = individuals_of(kb_);
  for (const auto& n : individuals_of(goal_kb)) names.insert(n);
  for (const auto& n : names) node_of_individual(n);

  for (const auto& ax : kb_.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      auto idx = cl_->index_of(ca->c);
      if (!idx) throw input_error("asserted concept outside the closure");
      add_fact(ind_index_.at(ca->individual), *idx);
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      add_edge(ind_index_.at(ra->from), role_ids_.at(ra->role),
               ind_index_.at(ra->to));
    }
  }
  run();
}

std::size_t ElSaturation::node_of_individual(const std::string& name) {
  auto it = ind_index_.find(name);
  if (it != ind_index_.end()) return it->second;
  std::size_t node = S_.size();
  ind_index_.emplace(name, node);
  S_.emplace_back(cl_->size());
  S_.back().set(0);  // top
  fwd_.emplace_back();
  rev_.emplace_back();
  queued_.push_back(0);
  enqueue(node);
  return node;
}

std::size_t ElSaturation::vertex_of_concept(std::size_t concept_idx) {
  if (vertex_of_[concept_idx] >= 0)
    return static_cast<std::size_t>(vertex_of_[concept_idx]);
  ctx_->add_node();
  std::size_t node = S_.size();
  vertex_of_[concept_idx] = static_cast<int>(node);
  S_.emplace_back(cl_->size());
  S_.back().set(0);
  fwd_.emplace_back();
  rev_.emplace_back();
  queued_.push_back(0);
  add_fact(node, concept_idx);
  return node;
}

void ElSaturation::enqueue(std::size_t node) {
  if (!queued_[node]) {
    queued_[node] = 1;
    queue_.push_back(node);
  }
}

void ElSaturation::add_fact(std::size_t node, std::size_t concept_idx) {
  if (S_[node].test(concept_idx)) return;
  S_[node].set(concept_idx);
  if (bot_idx_ && concept_idx == *bot_idx_ && node < ind_index_.size())
    consistent_ = false;
  enqueue(node);
  for (const auto& [rid, pred] : rev_[node]) {
    (void)rid;
    enqueue(pred);
  }
}

void ElSaturation::add_edge(std::size_t from, std::size_t role_id,
                            std::size_t to) {
  if (fwd_[from].insert({role_id, to}).second) {
    rev_[to].insert({role_id, from});
    enqueue(from);
  }
}

void ElSaturation::scan(std::size_t node) {
  ctx_->tick();
  // S_ may reallocate when a witness vertex is created, so index afresh.
  for (const auto& [l, r] : cis_)
    if (S_[node].test(l)) add_fact(node, r);
  for (std::size_t idx : and_entries_) {
    const auto& kids = cl_->children[idx];
    if (S_[node].test(idx)) {
      for (std::size_t k : kids) add_fact(node, k);
    } else {
      bool all = true;
      for (std::size_t k : kids)
        if (!S_[node].test(k)) {
          all = false;
          break;
        }
      if (all) add_fact(node, idx);
    }
  }
  for (std::size_t e : exists_entries_) {
    std::size_t inner = cl_->children[e][0];
    std::size_t rid = role_ids_.at(cl_->concepts[e]->role.name);
    if (S_[node].test(e)) add_edge(node, rid, vertex_of_concept(inner));
    for (const auto& [erid, w] : fwd_[node])
      if (erid == rid && S_[w].test(inner)) add_fact(node, e);
  }
  if (bot_idx_)
    for (const auto& [rid, w] : fwd_[node]) {
      (void)rid;
      if (S_[w].test(*bot_idx_)) add_fact(node, *bot_idx_);
    }
}

void ElSaturation::run() {
  while (!queue_.empty() && consistent_) {
    std::size_t node = queue_.front();
    queue_.pop_front();
    queued_[node] = 0;
    scan(node);
  }
}

bool ElSaturation::holds(const Axiom& goal) const {
  if (!consistent_) return true;
  if (const auto* ca = std::get_if<ConceptAssertion>(&goal)) {
    auto it = ind_index_.find(ca->individual);
    if (it == ind_index_.end())
      throw input_error("goal individual was not registered");
    auto idx = cl_->index_of(desugar(ca->c));
    if (!idx) throw input_error("goal concept outside the closure");
    return S_[it->second].test(*idx);
  }
  return kb_.contains(goal);
}

const Bits* ElSaturation::derived(const std::string& individual) const {
  auto it = ind_index_.find(individual);
  return it == ind_index_.end() ? nullptr : &S_[it->second];
}

bool el_consistent(const KnowledgeBase& kb) {
  Ctx ctx;
  return ElSaturation(kb, {}, ctx).consistent();
}

bool el_entails(const KnowledgeBase& kb, const Axiom& goal) {
  Ctx ctx;
  return ElSaturation(kb, {goal}, ctx).holds(goal);
}

namespace {

// Shared core of alc_consistent / alc_entails: find the first compatible
// type assignment, optionally with one concept forbidden at one individual.
std::optional<TypeAssignment> alc_find(const KnowledgeBase& kb,
                                       const TypeSet& T, Ctx& ctx,
                                       const std::optional<std::string>& forbid_ind,
                                       std::size_t forbid_idx) {
  ClosurePtr cl = T.closure;
  KnowledgeBase dkb = desugar(kb);
  std::set<std::string> name_set = individuals_of(dkb);
  if (forbid_ind) name_set.insert(*forbid_ind);

  std::map<std::string, std::size_t> degree;
  for (const auto& ax : dkb.axioms)
    if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      ++degree[ra->from];
      ++degree[ra->to];
    }
  std::vector<std::string> names(name_set.begin(), name_set.end());
  std::stable_sort(names.begin(), names.end(),
                   [&](const std::string& a, const std::string& b) {
                     return degree[a] > degree[b];
                   });
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < names.size(); ++i) pos[names[i]] = i;

  std::map<std::size_t, Bits> columns;
  auto column = [&](std::size_t cidx) -> const Bits& {
    auto it = columns.find(cidx);
    if (it == columns.end()) {
      Bits col(T.count());
      for (std::size_t t = 0; t < T.count(); ++t)
        if (T.member(t, cidx)) col.set(t);
      it = columns.emplace(cidx, std::move(col)).first;
    }
    return it->second;
  };

  std::vector<Bits> dom(names.size(), Bits(T.count()));
  for (auto& d : dom) d.set();
  std::vector<std::vector<std::pair<std::size_t, Role>>> out_e(names.size()),
      in_e(names.size());
  for (const auto& ax : dkb.axioms) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      auto idx = cl->index_of(ca->c);
      if (!idx) throw input_error("asserted concept outside the closure");
      dom[pos.at(ca->individual)] &= column(*idx);
    } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
      out_e[pos.at(ra->from)].push_back({pos.at(ra->to), Role(ra->role)});
      in_e[pos.at(ra->to)].push_back({pos.at(ra->from), Role(ra->role)});
    }
  }
  if (forbid_ind) dom[pos.at(*forbid_ind)] -= column(forbid_idx);

  if (names.empty())
    return T.count() ? std::optional<TypeAssignment>(TypeAssignment{})
                     : std::nullopt;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> assign(names.size(), kNone);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == names.size()) return true;
    for (std::size_t t = dom[i].find_first(); t != Bits::npos;
         t = dom[i].find_next(t)) {
      ctx.add_node();
      bool ok = true;
      for (const auto& [j, r] : out_e[i])
        if (assign[j] != kNone && !T.succ_permits(t, r, assign[j])) {
          ok = false;
          break;
        }
      if (ok)
        for (const auto& [j, r] : in_e[i])
          if (assign[j] != kNone && !T.succ_permits(assign[j], r, t)) {
            ok = false;
            break;
          }
      if (!ok) continue;
      assign[i] = t;
      if (go(i + 1)) return true;
      assign[i] = kNone;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  TypeAssignment out;
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = assign[i];
  return out;
}

}  // namespace

std::optional<TypeAssignment> alc_consistent(const KnowledgeBase& kb,
                                             const TypeSet& T, Ctx& ctx) {
  return alc_find(kb, T, ctx, std::nullopt, 0);
}

bool alc_entails(const KnowledgeBase& kb, const Axiom& goal, const TypeSet& T,
                 Ctx& ctx) {
  if (const auto* ca = std::get_if<ConceptAssertion>(&goal)) {
    auto idx = T.closure->index_of(desugar(ca->c));
    if (!idx) throw input_error("goal concept outside the closure");
    return !alc_find(kb, T, ctx, ca->individual, *idx).has_value();
  }
  if (std::get_if<CI>(&goal))
    throw input_error("entailment goals must be assertions");
  return kb.contains(goal) || !alc_consistent(kb, T, ctx).has_value();
}

VerificationReport check_hypothesis(const AbductionProblem& problem,
                                    const KnowledgeBase& h, Ctx& ctx) {
  for (const auto& ax : h.axioms)
    if (std::get_if<CI>(&ax))
      throw input_error("hypothesis must be an ABox");
  if (detect_dialect(h, KnowledgeBase{}) > problem.dialect)
    throw input_error("hypothesis dialect exceeds the problem dialect");

  VerificationReport rep;
  Signature sh = signature_of(h);
  for (const auto& c : sh.concepts)
    if (!problem.sigma.has_concept(c)) rep.a3_offenders.insert(c);
  for (const auto& r : sh.roles)
    if (!problem.sigma.has_role(r)) rep.a3_offenders.insert(r);
  rep.a3_in_signature = rep.a3_offenders.empty();

  KnowledgeBase kh = merged(problem.kb, h);
  if (problem.dialect <= Dialect::ELbot) {
    ElSaturation sat(kh, problem.observation.axioms, ctx);
    rep.a1_consistent = sat.consistent();
    for (const auto& ax : problem.observation.axioms)
      if (!sat.holds(ax)) rep.a2_missing.push_back(ax);
  } else {
    ClosurePtr cl = build_closure(kh, problem.observation);
    TypeSet T = type_elimination(cl, kh, ctx);
    auto wit = alc_consistent(kh, T, ctx);
    rep.a1_consistent = wit.has_value();
    if (wit) {
      std::map<std::string, std::vector<std::string>> named;
      for (const auto& [ind, t] : *wit) {
        std::vector<std::string> members;
        const Bits& ty = T.types[t];
        for (std::size_t i = ty.find_first(); i != Bits::npos;
             i = ty.find_next(i))
          members.push_back(to_text(cl->concepts[i]));
        named[ind] = std::move(members);
      }
      rep.a1_witness = std::move(named);
    }
    for (const auto& ax : problem.observation.axioms)
      if (!alc_entails(kh, ax, T, ctx)) rep.a2_missing.push_back(ax);
  }
  rep.a2_entails = rep.a2_missing.empty();
  if (problem.size_bound)
    rep.size_within_bound = size_of(h) <= *problem.size_bound;
  return rep;
}

std::string to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["a1_consistent"] = r.a1_consistent;
  j["a2_entails"] = r.a2_entails;
  j["a3_in_signature"] = r.a3_in_signature;
  nlohmann::ordered_json missing = nlohmann::ordered_json::array();
  for (const auto& ax : r.a2_missing) missing.push_back(to_text(ax));
  j["a2_missing"] = missing;
  if (r.a1_witness) {
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto& [ind, members] : *r.a1_witness) w[ind] = members;
    j["a1_witness"] = w;
  } else {
    j["a1_witness"] = nullptr;
  }
  j["a3_offenders"] =
      std::vector<std::string>(r.a3_offenders.begin(), r.a3_offenders.end());
  if (r.size_within_bound)
    j["size_within_bound"] = *r.size_within_bound;
  else
    j["size_within_bound"] = nullptr;
  j["passed"] = r.passed();
  return j.dump(2);
}

}  // namespace abd
