#include "abd/semantics.hpp"

#include <map>

namespace abd {

namespace {

const std::vector<Bits>* rows_of(const FiniteInterpretation& I,
                                 const std::string& role) {
  auto it = I.role_ext.find(role);
  return it == I.role_ext.end() ? nullptr : &it->second;
}

Bits eval_rec(const FiniteInterpretation& I, const ConceptPtr& c,
              std::map<const Concept*, Bits>& memo) {
  auto hit = memo.find(c.get());
  if (hit != memo.end()) return hit->second;
  const std::size_t n = I.domain_size;
  Bits out(n);
  switch (c->kind) {
    case CKind::Top:
      out.set();
      break;
    case CKind::Bot:
      break;
    case CKind::Atom: {
      auto it = I.concept_ext.find(c->name);
      if (it != I.concept_ext.end()) out = it->second;
      break;
    }
    case CKind::Not:
      out = ~eval_rec(I, c->args[0], memo);
      break;
    case CKind::And: {
      out.set();
      for (const auto& a : c->args) out &= eval_rec(I, a, memo);
      break;
    }
    case CKind::Or: {
      for (const auto& a : c->args) out |= eval_rec(I, a, memo);
      break;
    }
    case CKind::Exists: {
      Bits targets = eval_rec(I, c->args[0], memo);
      const auto* rows = rows_of(I, c->role.name);
      if (rows) {
        if (!c->role.inverted) {
          for (std::size_t d = 0; d < n; ++d)
            if (((*rows)[d] & targets).any()) out.set(d);
        } else {
          for (std::size_t e = targets.find_first(); e != Bits::npos;
               e = targets.find_next(e))
            out |= (*rows)[e];
        }
      }
      break;
    }
    case CKind::Forall: {
      Bits targets = eval_rec(I, c->args[0], memo);
      out.set();
      const auto* rows = rows_of(I, c->role.name);
      if (rows) {
        if (!c->role.inverted) {
          for (std::size_t d = 0; d < n; ++d)
            if (((*rows)[d] & ~targets).any()) out.reset(d);
        } else {
          Bits non_targets = ~targets;
          for (std::size_t e = non_targets.find_first(); e != Bits::npos;
               e = non_targets.find_next(e))
            out -= (*rows)[e];
        }
      }
      break;
    }
    case CKind::AtMost: {
      Bits targets = eval_rec(I, c->args[0], memo);
      const auto* rows = rows_of(I, c->role.name);
      for (std::size_t d = 0; d < n; ++d) {
        std::size_t count = 0;
        if (rows) {
          if (!c->role.inverted) {
            count = ((*rows)[d] & targets).count();
          } else {
            for (std::size_t e = targets.find_first(); e != Bits::npos;
                 e = targets.find_next(e))
              if ((*rows)[e].test(d)) ++count;
          }
        }
        if (count <= c->number) out.set(d);
      }
      break;
    }
  }
  memo.emplace(c.get(), out);
  return out;
}

}  // namespace

Bits eval_concept(const FiniteInterpretation& I, const ConceptPtr& c) {
  std::map<const Concept*, Bits> memo;
  return eval_rec(I, c, memo);
}

bool is_model(const FiniteInterpretation& I, const KnowledgeBase& kb) {
  std::map<const Concept*, Bits> memo;
  auto element = [&](const std::string& name) {
    auto it = I.individuals.find(name);
    if (it == I.individuals.end())
      throw input_error("individual '" + name +
                        "' has no element in the interpretation");
    return it->second;
  };
  for (const auto& ax : kb.axioms) {
    if (const auto* ci = std::get_if<CI>(&ax)) {
      if ((eval_rec(I, ci->lhs, memo) & ~eval_rec(I, ci->rhs, memo)).any())
        return false;
    } else if (const auto* ca = std::get_if<ConceptAssertion>(&ax)) {
      if (!eval_rec(I, ca->c, memo).test(element(ca->individual)))
        return false;
    } else {
      const auto& ra = std::get<RoleAssertion>(ax);
      if (!I.has_edge(ra.role, element(ra.from), element(ra.to)))
        return false;
    }
  }
  return true;
}

FiniteInterpretation model_from_assignment(
    const TypeAssignment& assignment, const TypeSet& T,
    const std::set<std::string>& extra_roles) {
  FiniteInterpretation I;
  I.domain_size = assignment.size() + T.count();
  std::vector<std::size_t> type_of(I.domain_size);
  std::size_t d = 0;
  for (const auto& [name, t] : assignment) {
    if (t >= T.count())
      throw input_error("assignment references a type outside the type set");
    I.individuals[name] = d;
    type_of[d++] = t;
  }
  for (std::size_t t = 0; t < T.count(); ++t) type_of[d++] = t;

  const Closure& cl = *T.closure;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (cl.concepts[i]->kind != CKind::Atom) continue;
    Bits ext(I.domain_size);
    for (std::size_t e = 0; e < I.domain_size; ++e)
      if (T.member(type_of[e], i)) ext.set(e);
    I.concept_ext[cl.concepts[i]->name] = std::move(ext);
  }

  std::set<std::string> role_names = extra_roles;
  for (const auto& rt : T.role_tables) role_names.insert(rt.role.name);
  for (const auto& name : role_names) {
    Role r{name, false};
    std::vector<Bits> rows(I.domain_size, Bits(I.domain_size));
    for (std::size_t from = 0; from < I.domain_size; ++from)
      for (std::size_t to = 0; to < I.domain_size; ++to)
        if (T.succ_permits(type_of[from], r, type_of[to]))
          rows[from].set(to);
    I.role_ext[name] = std::move(rows);
  }
  return I;
}

}  // namespace abd
