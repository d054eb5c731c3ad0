#include "type_graph.hpp"

#include <variant>

#include "abd/parser.hpp"

namespace abd {

CompiledTBox::CompiledTBox(const Closure& cl, const KnowledgeBase& kb) {
  bot_idx = cl.index_of(bot());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (cl.concepts[i]->kind == CKind::And) and_entries.push_back(i);
    if (cl.concepts[i]->kind == CKind::Exists)
      exists_entries.push_back({i, cl.children[i][0], cl.concepts[i]->role});
  }
  for (const auto& ax : desugar(kb).axioms)
    if (const auto* ci = std::get_if<CI>(&ax)) {
      auto l = cl.index_of(ci->lhs), r = cl.index_of(ci->rhs);
      if (!l || !r)
        throw input_error("concept inclusion outside the closure");
      cis.push_back({*l, *r});
    }
}

void CompiledTBox::close(const Closure& cl, Bits& s) const {
  bool any = true;
  while (any) {
    any = false;
    for (const auto& [l, r] : cis)
      if (s.test(l) && !s.test(r)) {
        s.set(r);
        any = true;
      }
    for (std::size_t idx : and_entries) {
      const auto& kids = cl.children[idx];
      if (s.test(idx)) {
        for (std::size_t k : kids)
          if (!s.test(k)) {
            s.set(k);
            any = true;
          }
      } else {
        bool all = true;
        for (std::size_t k : kids) all = all && s.test(k);
        if (all) {
          s.set(idx);
          any = true;
        }
      }
    }
  }
}

std::vector<Bits> vertex_tables(const Closure& cl, const CompiledTBox& tb,
                                Ctx& ctx) {
  std::vector<Bits> V(cl.size(), Bits(cl.size()));
  for (std::size_t i = 0; i < cl.size(); ++i) {
    V[i].set(0);
    V[i].set(i);
    tb.close(cl, V[i]);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    ctx.tick();
    for (std::size_t i = 0; i < cl.size(); ++i) {
      bool touched = false;
      for (const auto& e : tb.exists_entries) {
        if (!V[i].test(e.entry)) continue;
        const Bits& inner = V[e.inner];
        if (tb.bot_idx && inner.test(*tb.bot_idx) &&
            !V[i].test(*tb.bot_idx)) {
          V[i].set(*tb.bot_idx);
          touched = true;
        }
        for (const auto& e2 : tb.exists_entries)
          if (e2.role == e.role && inner.test(e2.inner) &&
              !V[i].test(e2.entry)) {
            V[i].set(e2.entry);
            touched = true;
          }
      }
      if (touched) {
        tb.close(cl, V[i]);
        changed = true;
      }
    }
  }
  return V;
}

std::vector<Bits> saturate_type_graph(const TypeSet& T,
                                      const CompiledTBox& tb,
                                      const std::vector<Bits>& V,
                                      const Signature& sigma, Ctx& ctx) {
  const Closure& cl = *T.closure;
  std::vector<Bits> S(T.count(), Bits(cl.size()));
  for (std::size_t t = 0; t < T.count(); ++t) {
    S[t].set(0);
    for (std::size_t idx : cl.free_bits)
      if (cl.concepts[idx]->kind == CKind::Atom &&
          sigma.has_concept(cl.concepts[idx]->name) && T.member(t, idx))
        S[t].set(idx);
    tb.close(cl, S[t]);
  }

  std::vector<char> dirty(T.count(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    ctx.tick();
    // witness vertices of derived existentials
    for (std::size_t t = 0; t < T.count(); ++t) {
      bool touched = false;
      for (const auto& e : tb.exists_entries) {
        if (!S[t].test(e.entry)) continue;
        const Bits& inner = V[e.inner];
        for (const auto& e2 : tb.exists_entries)
          if (e2.role == e.role && inner.test(e2.inner) &&
              !S[t].test(e2.entry)) {
            S[t].set(e2.entry);
            touched = true;
          }
      }
      if (touched) {
        tb.close(cl, S[t]);
        changed = true;
      }
    }
    // existentials witnessed by successor individuals b_t'
    for (const auto& rt : T.role_tables) {
      if (rt.role.inverted || !sigma.has_role(rt.role.name)) continue;
      const std::size_t bits = rt.exists_indices.size();
      std::vector<std::size_t> hits;  // (t, entry) pairs, flattened
      if (bits <= 16) {
        // superset-sum table: f[m] = some t' with inner in S[t'] and
        // pattern(t') within m; query at ex(t)
        Bits f(std::size_t{1} << bits);
        for (std::size_t j = 0; j < bits; ++j) {
          f.reset();
          for (std::size_t u = 0; u < T.count(); ++u)
            if (S[u].test(rt.inner_indices[j])) f.set(rt.pat[u]);
          for (std::size_t b = 0; b < bits; ++b)
            for (std::size_t m = 0; m < f.size(); ++m)
              if (((m >> b) & 1) && f.test(m ^ (std::size_t{1} << b)))
                f.set(m);
          for (std::size_t t = 0; t < T.count(); ++t)
            if (!S[t].test(rt.exists_indices[j]) && f.test(rt.ex[t])) {
              hits.push_back(t);
              hits.push_back(rt.exists_indices[j]);
            }
          ctx.tick();
        }
      } else {
        for (std::size_t t = 0; t < T.count(); ++t) {
          ctx.tick();
          for (std::size_t j = 0; j < bits; ++j) {
            if (S[t].test(rt.exists_indices[j])) continue;
            for (std::size_t u = 0; u < T.count(); ++u)
              if ((rt.pat[u] & ~rt.ex[t]) == 0 &&
                  S[u].test(rt.inner_indices[j])) {
                hits.push_back(t);
                hits.push_back(rt.exists_indices[j]);
                break;
              }
          }
        }
      }
      for (std::size_t i = 0; i < hits.size(); i += 2) {
        S[hits[i]].set(hits[i + 1]);
        dirty[hits[i]] = 1;
        changed = true;
      }
    }
    for (std::size_t t = 0; t < T.count(); ++t)
      if (dirty[t]) {
        tb.close(cl, S[t]);
        dirty[t] = 0;
      }
  }
  return S;
}

std::vector<std::size_t> reachable_types(const Selector& s, const TypeSet& T,
                                         const Signature& sigma) {
  Bits reach(T.count());
  std::vector<std::size_t> work;
  for (const auto& [name, t] : s)
    if (!reach.test(t)) {
      reach.set(t);
      work.push_back(t);
    }
  while (!work.empty()) {
    std::size_t t = work.back();
    work.pop_back();
    for (const auto& rt : T.role_tables) {
      if (rt.role.inverted || !sigma.has_role(rt.role.name)) continue;
      const Bits& succ = T.succ_candidates(t, rt.role);
      for (std::size_t u = succ.find_first(); u != Bits::npos;
           u = succ.find_next(u))
        if (!reach.test(u)) {
          reach.set(u);
          work.push_back(u);
        }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t t = reach.find_first(); t != Bits::npos;
       t = reach.find_next(t))
    out.push_back(t);
  return out;
}

bool kb_has_assertions(const KnowledgeBase& kb) {
  for (const auto& ax : kb.axioms)
    if (!std::holds_alternative<CI>(ax)) return true;
  return false;
}

}  // namespace abd
