#include "abd/typecore.hpp"

#include <algorithm>
#include <string>

namespace abd {

std::optional<std::size_t> Closure::index_of(const ConceptPtr& c) const {
  auto it = std::lower_bound(concepts.begin(), concepts.end(), c, ConceptLess{});
  if (it == concepts.end() || !equal(*it, c)) return std::nullopt;
  return (std::size_t)(it - concepts.begin());
}

ClosurePtr build_closure(const KnowledgeBase& kb, const KnowledgeBase& obs,
                         const std::vector<ConceptPtr>& extra) {
  ConceptSet set;
  auto add_all = [&set](const ConceptSet& s) { set.insert(s.begin(), s.end()); };
  add_all(subconcepts_of(desugar(kb)));
  add_all(subconcepts_of(desugar(obs)));
  for (const auto& c : extra) add_all(subconcepts_of(desugar(c)));
  set.insert(top());

  auto cl = std::make_shared<Closure>();
  cl->concepts.assign(set.begin(), set.end());
  cl->free_bit_of.assign(cl->concepts.size(), -1);
  cl->children.resize(cl->concepts.size());
  for (std::size_t i = 0; i < cl->concepts.size(); ++i) {
    const auto& c = cl->concepts[i];
    if (c->kind == CKind::Atom || c->kind == CKind::Exists) {
      cl->free_bit_of[i] = (int)cl->free_bits.size();
      cl->free_bits.push_back(i);
    }
    for (const auto& a : c->args) {
      auto idx = cl->index_of(a);
      // closed under sub-terms by construction
      cl->children[i].push_back(*idx);
    }
  }
  return cl;
}

void eval_members(const Closure& cl, std::uint64_t mask, std::vector<char>& out) {
  out.resize(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    const auto& c = cl.concepts[i];
    switch (c->kind) {
      case CKind::Top:
        out[i] = 1;
        break;
      case CKind::Bot:
        out[i] = 0;
        break;
      case CKind::Atom:
      case CKind::Exists:
        out[i] = (char)((mask >> cl.free_bit_of[i]) & 1);
        break;
      case CKind::Not:
        out[i] = !out[cl.children[i][0]];
        break;
      case CKind::And: {
        char v = 1;
        for (auto ch : cl.children[i]) v &= out[ch];
        out[i] = v;
        break;
      }
      default:
        throw input_error("closure contains a non-core concept: " +
                          to_text(c));
    }
  }
}

int TypeSet::role_table_index(const Role& r) const {
  for (std::size_t i = 0; i < role_tables.size(); ++i)
    if (role_tables[i].role == r) return (int)i;
  return -1;
}

std::optional<std::size_t> TypeSet::index_of_mask(std::uint64_t mask) const {
  auto it = std::lower_bound(masks.begin(), masks.end(), mask);
  if (it == masks.end() || *it != mask) return std::nullopt;
  return (std::size_t)(it - masks.begin());
}

bool TypeSet::succ_permits(std::size_t t, const Role& r, std::size_t succ) const {
  int fwd = role_table_index(r);
  if (fwd >= 0) {
    const auto& rt = role_tables[fwd];
    if (rt.pat[succ] & ~rt.ex[t]) return false;
  }
  int bwd = role_table_index(r.inverse());
  if (bwd >= 0) {
    const auto& rt = role_tables[bwd];
    if (rt.pat[t] & ~rt.ex[succ]) return false;
  }
  return true;
}

const Bits& TypeSet::succ_candidates(std::size_t t, const Role& r) const {
  auto key = std::make_pair(t, r);
  auto it = succ_cache_.find(key);
  if (it != succ_cache_.end()) return it->second;
  Bits out(count());
  for (std::size_t s = 0; s < count(); ++s)
    if (succ_permits(t, r, s)) out.set(s);
  return succ_cache_.emplace(std::move(key), std::move(out)).first->second;
}

namespace {

struct CompiledCI {
  std::size_t lhs, rhs;
};

std::vector<CompiledCI> compile_cis(const Closure& cl, const KnowledgeBase& kb) {
  std::vector<CompiledCI> out;
  for (const auto& ax : kb.axioms) {
    const auto* ci = std::get_if<CI>(&ax);
    if (!ci) continue;
    auto l = cl.index_of(desugar(ci->lhs));
    auto r = cl.index_of(desugar(ci->rhs));
    if (!l || !r)
      throw input_error("concept inclusion outside the closure: " +
                        to_text(ax));
    out.push_back({*l, *r});
  }
  return out;
}

}  // namespace

TypeSet type_elimination(ClosurePtr closure, const KnowledgeBase& kb, Ctx& ctx) {
  const Closure& cl = *closure;
  const unsigned k = (unsigned)cl.free_bits.size();
  ctx.check_type_space(k);
  const std::uint64_t space = std::uint64_t{1} << k;
  const auto cis = compile_cis(cl, kb);

  // Distinct existential role tokens, in closure order.
  std::vector<Role> roles;
  for (auto idx : cl.free_bits) {
    const auto& c = cl.concepts[idx];
    if (c->kind != CKind::Exists) continue;
    if (std::find(roles.begin(), roles.end(), c->role) == roles.end())
      roles.push_back(c->role);
  }
  struct RoleInfo {
    std::vector<std::size_t> exists_indices, inner_indices;
    std::vector<unsigned> global_bit;  // free bit of each exists entry
  };
  std::vector<RoleInfo> info(roles.size());
  for (std::size_t rho = 0; rho < roles.size(); ++rho) {
    for (auto idx : cl.free_bits) {
      const auto& c = cl.concepts[idx];
      if (c->kind != CKind::Exists || !(c->role == roles[rho])) continue;
      info[rho].exists_indices.push_back(idx);
      info[rho].inner_indices.push_back(cl.children[idx][0]);
      info[rho].global_bit.push_back((unsigned)cl.free_bit_of[idx]);
    }
  }

  // Birth: keep the masks whose derived membership respects every CI.
  // Bot and top coherence are structural, so conditions 1-4 all hold here.
  std::vector<std::uint64_t> cand;
  std::vector<std::vector<std::uint64_t>> ex(roles.size()), pat(roles.size());
  {
    std::vector<char> member;
    for (std::uint64_t mask = 0; mask < space; ++mask) {
      ctx.tick();
      eval_members(cl, mask, member);
      bool ok = true;
      for (const auto& ci : cis) {
        if (member[ci.lhs] && !member[ci.rhs]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cand.push_back(mask);
      for (std::size_t rho = 0; rho < roles.size(); ++rho) {
        std::uint64_t e = 0, p = 0;
        const auto& ri = info[rho];
        for (std::size_t j = 0; j < ri.exists_indices.size(); ++j) {
          e |= std::uint64_t{(mask >> ri.global_bit[j]) & 1} << j;
          p |= std::uint64_t{(unsigned char)member[ri.inner_indices[j]]} << j;
        }
        ex[rho].push_back(e);
        pat[rho].push_back(p);
      }
    }
  }
  ctx.stats.types_built += cand.size();

  // Fixpoint for the witness condition. A type t keeps an existential entry
  // e_j = some R. C only if a live t' has C (bit j of pat) and is a legal
  // R-successor of t. Without an inverse table the check is a subset-sum
  // lookup; with one the witness depends on both sides and we scan.
  const std::size_t n = cand.size();
  std::vector<char> alive(n, 1);
  std::vector<int> inverse_of(roles.size(), -1);
  for (std::size_t rho = 0; rho < roles.size(); ++rho) {
    for (std::size_t tau = 0; tau < roles.size(); ++tau)
      if (roles[tau] == roles[rho].inverse()) inverse_of[rho] = (int)tau;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    ctx.check_time();

    // Subset-sum tables, rebuilt against the current live set.
    std::vector<std::vector<Bits>> sos(roles.size());
    std::vector<char> use_sos(roles.size(), 0);
    for (std::size_t rho = 0; rho < roles.size(); ++rho) {
      const std::size_t bits = info[rho].exists_indices.size();
      if (inverse_of[rho] >= 0 || bits > 22 ||
          (std::uint64_t{1} << bits) > 4 * n + 64)
        continue;
      use_sos[rho] = 1;
      sos[rho].assign(bits, Bits(std::size_t{1} << bits));
      for (std::size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        std::uint64_t p = pat[rho][i];
        for (std::size_t j = 0; j < bits; ++j)
          if ((p >> j) & 1) sos[rho][j].set(p);
      }
      for (std::size_t j = 0; j < bits; ++j) {
        Bits& f = sos[rho][j];
        for (std::size_t b = 0; b < bits; ++b) {
          // f[m] |= f[m without bit b], done block-wise via shifted or
          for (std::size_t m = 0; m < f.size(); ++m)
            if (!f.test(m) && (m >> b & 1) && f.test(m ^ (std::size_t{1} << b)))
              f.set(m);
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      ctx.tick();
      bool ok = true;
      for (std::size_t rho = 0; rho < roles.size() && ok; ++rho) {
        std::uint64_t need = ex[rho][i];
        if (!need) continue;
        for (std::size_t j = 0; j < info[rho].exists_indices.size() && ok; ++j) {
          if (!((need >> j) & 1)) continue;
          bool witness = false;
          if (use_sos[rho]) {
            witness = sos[rho][j].test(ex[rho][i]);
          } else {
            const int tau = inverse_of[rho];
            for (std::size_t w = 0; w < n; ++w) {
              if (!alive[w]) continue;
              if (!((pat[rho][w] >> j) & 1)) continue;
              if (pat[rho][w] & ~ex[rho][i]) continue;
              if (tau >= 0 && (pat[(std::size_t)tau][i] & ~ex[(std::size_t)tau][w]))
                continue;
              witness = true;
              break;
            }
          }
          if (!witness) ok = false;
        }
      }
      if (!ok) {
        alive[i] = 0;
        changed = true;
      }
    }
  }

  TypeSet T;
  T.closure = closure;
  std::vector<char> member;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) keep.push_back(i);
  T.types.reserve(keep.size());
  T.masks.reserve(keep.size());
  for (auto i : keep) {
    eval_members(cl, cand[i], member);
    Bits b(cl.size());
    for (std::size_t c = 0; c < cl.size(); ++c)
      if (member[c]) b.set(c);
    T.types.push_back(std::move(b));
    T.masks.push_back(cand[i]);
  }
  T.role_tables.resize(roles.size());
  for (std::size_t rho = 0; rho < roles.size(); ++rho) {
    auto& rt = T.role_tables[rho];
    rt.role = roles[rho];
    rt.exists_indices = info[rho].exists_indices;
    rt.inner_indices = info[rho].inner_indices;
    rt.ex.reserve(keep.size());
    rt.pat.reserve(keep.size());
    for (auto i : keep) {
      rt.ex.push_back(ex[rho][i]);
      rt.pat.push_back(pat[rho][i]);
    }
  }
  return T;
}

std::string dump_types_json(const TypeSet& T) {
  std::string out = "{\"types\":[";
  for (std::size_t i = 0; i < T.count(); ++i) {
    if (i) out += ',';
    out += '[';
    bool first = true;
    for (std::size_t c = 0; c < T.closure->size(); ++c) {
      if (!T.types[i].test(c)) continue;
      if (!first) out += ',';
      first = false;
      out += '"';
      out += to_text(T.closure->concepts[c]);
      out += '"';
    }
    out += ']';
  }
  out += "]}";
  return out;
}

}  // namespace abd
