#include "abd/abstraction.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abd/common.hpp"

namespace abd {

namespace {

using EdgeKey = std::tuple<std::string, std::size_t, std::string, std::string>;

EdgeKey key_of(const AbstractionEdge& e) {
  return {e.from, e.type, e.role, e.to};
}

// Nodes must be unique and every reference must hit one of them.
void validate_references(const InterpretationAbstraction& a) {
  std::set<std::string> seen;
  for (const auto& v : a.nodes)
    if (!seen.insert(v).second)
      throw input_error("duplicate abstraction node '" + v + "'");
  auto need = [&](const std::string& v, const char* where) {
    if (!seen.count(v))
      throw input_error(std::string("unknown abstraction node '") + v +
                        "' in " + where);
  };
  for (const auto& [v, ts] : a.labels) need(v, "labels");
  for (const auto& [ind, v] : a.anchors) need(v, "anchors");
  for (const auto& e : a.edges) {
    need(e.from, "edges");
    need(e.to, "edges");
  }
  for (const auto& v : a.open) need(v, "open");
}

void validate_type_bounds(const InterpretationAbstraction& a,
                          const TypeSet& T) {
  auto need = [&](std::size_t t, const char* where) {
    if (t >= T.count())
      throw input_error("type index " + std::to_string(t) + " in " + where +
                        " is out of range (only " + std::to_string(T.count()) +
                        " admissible types)");
  };
  for (const auto& [v, ts] : a.labels)
    for (std::size_t t : ts) need(t, "labels");
  for (const auto& e : a.edges) need(e.type, "edges");
}

std::set<std::string> outgoing_nodes(const InterpretationAbstraction& a) {
  std::set<std::string> out(a.nodes.begin(), a.nodes.end());
  for (const auto& [ind, v] : a.anchors) out.erase(v);
  return out;
}

// Anchors of one node, in individual order.
std::vector<std::string> anchors_of(const InterpretationAbstraction& a,
                                    const std::string& v) {
  std::vector<std::string> res;
  for (const auto& [ind, node] : a.anchors)
    if (node == v) res.push_back(ind);
  return res;
}

void push_violation(std::vector<Violation>& out,
                    std::set<std::pair<std::string, std::string>>& dedup,
                    std::string rule, std::string detail) {
  if (dedup.insert({rule, detail}).second)
    out.push_back({std::move(rule), std::move(detail)});
}

// Closure index of every signature concept name that occurs in the closure;
// names outside it never hold in a type.
std::vector<std::pair<std::string, std::size_t>> sigma_atom_indices(
    const TypeSet& T, const Signature& sigma) {
  std::vector<std::pair<std::string, std::size_t>> res;
  for (const auto& name : sigma.concepts)
    if (auto idx = T.closure->index_of(atom(name))) res.push_back({name, *idx});
  return res;
}

// Types grouped by which signature concept names they contain; two types in
// one group are indistinguishable over sigma.
std::vector<std::vector<std::size_t>> sigma_equal_types(
    const TypeSet& T, const Signature& sigma) {
  auto atoms = sigma_atom_indices(T, sigma);
  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  std::vector<std::vector<std::size_t>> by_type(T.count());
  for (std::size_t t = 0; t < T.count(); ++t) {
    std::uint64_t proj = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j)
      if (T.member(t, atoms[j].second)) proj |= std::uint64_t{1} << j;
    groups[proj].push_back(t);
  }
  for (const auto& [proj, ts] : groups)
    for (std::size_t t : ts) by_type[t] = ts;
  return by_type;
}

// Type index realized by each domain element, if its membership pattern over
// the closure is one of the admissible types.
std::vector<std::optional<std::size_t>> element_types(
    const FiniteInterpretation& I, const TypeSet& T) {
  const Closure& cl = *T.closure;
  std::vector<std::uint64_t> mask(I.domain_size, 0);
  for (std::size_t j = 0; j < cl.free_bits.size(); ++j) {
    Bits ext = eval_concept(I, cl.concepts[cl.free_bits[j]]);
    for (std::size_t d = 0; d < I.domain_size; ++d)
      if (ext.test(d)) mask[d] |= std::uint64_t{1} << j;
  }
  std::vector<std::optional<std::size_t>> res(I.domain_size);
  for (std::size_t d = 0; d < I.domain_size; ++d)
    res[d] = T.index_of_mask(mask[d]);
  return res;
}

}  // namespace

bool InterpretationAbstraction::has_node(const std::string& v) const {
  return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool InterpretationAbstraction::is_internal(const std::string& v) const {
  for (const auto& [ind, node] : anchors)
    if (node == v) return true;
  return false;
}

bool InterpretationAbstraction::has_edge(const std::string& from,
                                         std::size_t type,
                                         const std::string& role,
                                         const std::string& to) const {
  for (const auto& e : edges)
    if (e.from == from && e.type == type && e.role == role && e.to == to)
      return true;
  return false;
}

const std::set<std::size_t>& InterpretationAbstraction::label(
    const std::string& v) const {
  static const std::set<std::size_t> kEmpty;
  auto it = labels.find(v);
  return it == labels.end() ? kEmpty : it->second;
}

std::vector<Violation> check_alc_conform(const InterpretationAbstraction& a) {
  validate_references(a);
  std::vector<Violation> out;
  std::set<std::pair<std::string, std::string>> dedup;
  const std::set<std::string> outgoing = outgoing_nodes(a);

  // No cycle along edges that stay within the outgoing nodes. Colors: 0 new,
  // 1 on the current path, 2 finished.
  {
    std::map<std::string, int> color;
    std::vector<std::string> path;
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
      color[v] = 1;
      path.push_back(v);
      for (const auto& e : a.edges) {
        if (e.from != v || !outgoing.count(e.to)) continue;
        if (color[e.to] == 1) {
          auto at = std::find(path.begin(), path.end(), e.to);
          std::string text;
          for (auto it = at; it != path.end(); ++it) text += *it + " -> ";
          push_violation(out, dedup, "outgoing-cycle",
                         "cycle among outgoing nodes: " + text + e.to);
          return true;
        }
        if (color[e.to] == 0 && dfs(e.to)) return true;
      }
      path.pop_back();
      color[v] = 2;
      return false;
    };
    for (const auto& v : a.nodes)
      if (outgoing.count(v) && color[v] == 0 && dfs(v)) break;
  }

  // Edges leaving an internal node must exist for every label type of their
  // target, so the connection is independent of the type realized there.
  for (const auto& v : a.nodes) {
    if (outgoing.count(v)) continue;
    std::set<std::pair<std::string, std::string>> targets;
    for (const auto& e : a.edges)
      if (e.from == v) targets.insert({e.role, e.to});
    for (const auto& [role, to] : targets)
      for (std::size_t t : a.label(to))
        if (!a.has_edge(v, t, role, to))
          push_violation(out, dedup, "edge-label-closure",
                         "internal node '" + v + "' reaches '" + to +
                             "' via role '" + role +
                             "' but not for its label type " +
                             std::to_string(t));
  }

  // Every edge from an outgoing source into an internal target needs a
  // parallel edge (same source, type and role) into some outgoing target;
  // edges between internal nodes are anchored on both ends and exempt.
  for (const auto& e : a.edges) {
    if (outgoing.count(e.to) || !outgoing.count(e.from)) continue;
    bool witnessed = false;
    for (const auto& w : a.edges)
      if (w.from == e.from && w.type == e.type && w.role == e.role &&
          outgoing.count(w.to)) {
        witnessed = true;
        break;
      }
    if (!witnessed)
      push_violation(out, dedup, "outgoing-witness",
                     "edge <" + e.from + ", " + std::to_string(e.type) + ", " +
                         e.role + ", " + e.to +
                         "> has no parallel edge to an outgoing node");
  }
  return out;
}

std::vector<Violation> check_sigma_complete(const InterpretationAbstraction& a,
                                            const TypeSet& T,
                                            const Signature& sigma) {
  validate_references(a);
  validate_type_bounds(a, T);
  std::vector<Violation> out;
  std::set<std::pair<std::string, std::string>> dedup;
  const auto equal_types = sigma_equal_types(T, sigma);

  for (const auto& v : a.nodes) {
    const auto& lab = a.label(v);
    for (std::size_t t1 : lab)
      for (std::size_t t2 : equal_types[t1])
        if (!lab.count(t2))
          push_violation(out, dedup, "label-signature-closure",
                         "node '" + v + "' carries type " + std::to_string(t1) +
                             " but not signature-equal type " +
                             std::to_string(t2));
  }
  for (const auto& e : a.edges)
    for (std::size_t t2 : equal_types[e.type])
      if (!a.has_edge(e.from, t2, e.role, e.to))
        push_violation(out, dedup, "edge-signature-closure",
                       "edge <" + e.from + ", " + std::to_string(e.type) +
                           ", " + e.role + ", " + e.to +
                           "> misses signature-equal type " +
                           std::to_string(t2));
  return out;
}

std::optional<AbstractionWitness> abstracts(const InterpretationAbstraction& a,
                                            const FiniteInterpretation& I,
                                            const TypeSet& T,
                                            const Signature& sigma) {
  validate_references(a);
  validate_type_bounds(a, T);

  const std::size_t n_nodes = a.nodes.size();
  const std::size_t kExcluded = n_nodes;
  std::map<std::string, std::size_t> node_index;
  for (std::size_t i = 0; i < n_nodes; ++i) node_index[a.nodes[i]] = i;

  const auto types = element_types(I, T);
  std::set<EdgeKey> edge_set;
  for (const auto& e : a.edges) edge_set.insert(key_of(e));

  // Elements a mapped node may host: the element must realize a label type.
  std::vector<std::vector<char>> eligible(I.domain_size,
                                          std::vector<char>(n_nodes, 0));
  for (std::size_t d = 0; d < I.domain_size; ++d)
    for (std::size_t i = 0; i < n_nodes; ++i)
      eligible[d][i] = types[d] && a.label(a.nodes[i]).count(*types[d]);

  // Anchored individuals are pinned to their nodes.
  std::vector<std::optional<std::size_t>> pin(I.domain_size);
  for (const auto& [ind, v] : a.anchors) {
    auto it = I.individuals.find(ind);
    if (it == I.individuals.end())
      throw input_error("interpretation does not interpret the anchored "
                        "individual '" +
                        ind + "'");
    std::size_t want = node_index.at(v);
    if (pin[it->second] && *pin[it->second] != want) return std::nullopt;
    pin[it->second] = want;
  }

  std::vector<std::size_t> assign(I.domain_size, kExcluded);
  auto consistent = [&]() {
    for (std::size_t d = 0; d < I.domain_size; ++d) {
      if (assign[d] == kExcluded) continue;
      const std::string& v = a.nodes[assign[d]];
      if (a.open.count(v)) continue;
      for (const auto& r : sigma.roles) {
        for (std::size_t e = 0; e < I.domain_size; ++e) {
          bool in_interp = I.has_edge(r, d, e);
          bool in_abstraction =
              assign[e] != kExcluded &&
              edge_set.count({v, *types[d], r, a.nodes[assign[e]]});
          if (in_interp != in_abstraction) return false;
        }
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t d) {
    if (d == I.domain_size) return consistent();
    if (pin[d]) {
      if (!eligible[d][*pin[d]]) return false;
      assign[d] = *pin[d];
      return search(d + 1);
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
      if (!eligible[d][i]) continue;
      assign[d] = i;
      if (search(d + 1)) return true;
    }
    assign[d] = kExcluded;
    return search(d + 1);
  };

  if (!search(0)) return std::nullopt;
  AbstractionWitness h;
  for (std::size_t d = 0; d < I.domain_size; ++d)
    if (assign[d] != kExcluded) h[d] = a.nodes[assign[d]];
  return h;
}

KnowledgeBase abstraction_to_abox(const InterpretationAbstraction& a,
                                  const TypeSet& T, const Signature& sigma) {
  for (const auto& v : check_alc_conform(a))
    throw input_error("abstraction cannot be rendered as an ABox (" + v.rule +
                      ": " + v.detail + ")");
  for (const auto& v : check_sigma_complete(a, T, sigma))
    throw input_error("abstraction cannot be rendered as an ABox (" + v.rule +
                      ": " + v.detail + ")");

  const std::set<std::string> outgoing = outgoing_nodes(a);
  const auto atoms = sigma_atom_indices(T, sigma);

  // Universal restrictions must keep constraining successors along the
  // longest edge chain, so every node — including a terminal one pinning
  // down its (absent) successors — still contributes its own restriction at
  // nesting level one or deeper. Any simple chain visits at most |V| nodes,
  // and unrolling further than necessary only repeats already-implied
  // constraints.
  const std::size_t depth = std::max<std::size_t>(1, a.nodes.size());

  // Positive then negative literals over sigma's concept names, as one type
  // sees them. Names outside the closure are never members.
  // Only signature atoms the closure tracks appear as literals: a name no
  // type can mention is invisible to the node labels, so asserting it either
  // way would constrain models the abstraction does not distinguish.
  auto literal_parts = [&](std::size_t t) {
    std::vector<ConceptPtr> parts;
    std::set<std::string> present;
    for (const auto& [name, idx] : atoms)
      if (T.member(t, idx)) present.insert(name);
    for (const auto& [name, idx] : atoms)
      if (present.count(name)) parts.push_back(atom(name));
    for (const auto& [name, idx] : atoms)
      if (!present.count(name)) parts.push_back(negation(atom(name)));
    return parts;
  };

  std::map<std::pair<std::string, std::size_t>, ConceptPtr> memo;
  std::function<ConceptPtr(const std::string&, std::size_t)> build =
      [&](const std::string& v, std::size_t i) -> ConceptPtr {
    auto key = std::make_pair(v, i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<ConceptPtr> disjuncts;
    for (std::size_t t : a.label(v)) {
      std::vector<ConceptPtr> parts = literal_parts(t);
      if (i > 0 && !a.open.count(v)) {
        // One existential per admitted outgoing successor...
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& e : a.edges)
          if (e.from == v && e.type == t && outgoing.count(e.to) &&
              seen.insert({e.role, e.to}).second)
            parts.push_back(exists(Role(e.role), build(e.to, depth)));
        // ... and per role a universal restriction admitting only the listed
        // successors; with none listed, the role is forbidden outright.
        for (const auto& r : sigma.roles) {
          std::vector<ConceptPtr> succ;
          std::set<std::string> seen_to;
          for (const auto& e : a.edges)
            if (e.from == v && e.type == t && e.role == r &&
                seen_to.insert(e.to).second)
              succ.push_back(build(e.to, i - 1));
          if (succ.empty())
            parts.push_back(negation(exists(Role(r), top())));
          else
            parts.push_back(forall(Role(r), disj(std::move(succ))));
        }
      }
      disjuncts.push_back(conj(std::move(parts)));
    }
    ConceptPtr c = disj(std::move(disjuncts));
    memo[key] = c;
    return c;
  };

  KnowledgeBase h;
  for (const auto& v : a.nodes) {
    if (outgoing.count(v)) continue;
    ConceptPtr c = build(v, depth);
    for (const auto& ind : anchors_of(a, v))
      h.add(ConceptAssertion{ind, c});
  }
  std::set<std::tuple<std::string, std::string, std::string>> emitted;
  for (const auto& e : a.edges) {
    if (outgoing.count(e.from) || outgoing.count(e.to)) continue;
    for (const auto& x : anchors_of(a, e.from))
      for (const auto& y : anchors_of(a, e.to))
        if (emitted.insert({x, e.role, y}).second)
          h.add(RoleAssertion{e.role, x, y});
  }
  return h;
}

std::string abstraction_to_json(const InterpretationAbstraction& a) {
  nlohmann::ordered_json j;
  j["nodes"] = a.nodes;
  j["labels"] = nlohmann::ordered_json::object();
  for (const auto& [v, ts] : a.labels)
    j["labels"][v] = std::vector<std::size_t>(ts.begin(), ts.end());
  j["anchors"] = nlohmann::ordered_json::object();
  for (const auto& [ind, v] : a.anchors) j["anchors"][ind] = v;
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : a.edges)
    j["edges"].push_back({e.from, e.type, e.role, e.to});
  j["open"] = std::vector<std::string>(a.open.begin(), a.open.end());
  return j.dump(2);
}

InterpretationAbstraction abstraction_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("invalid abstraction JSON: ") + e.what());
  }
  auto fail = [](const std::string& what) -> InterpretationAbstraction {
    throw input_error("invalid abstraction JSON: " + what);
  };
  if (!j.is_object()) return fail("top level must be an object");
  if (!j.contains("nodes") || !j["nodes"].is_array())
    return fail("field 'nodes' must be an array of node names");

  InterpretationAbstraction a;
  for (const auto& v : j["nodes"]) {
    if (!v.is_string()) return fail("node names must be strings");
    a.nodes.push_back(v.get<std::string>());
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_object())
      return fail("field 'labels' must map nodes to type-index arrays");
    for (const auto& [v, ts] : j["labels"].items()) {
      if (!ts.is_array())
        return fail("label of node '" + v + "' must be an array");
      for (const auto& t : ts) {
        if (!t.is_number_unsigned())
          return fail("label entries of node '" + v +
                      "' must be non-negative type indices");
        a.labels[v].insert(t.get<std::size_t>());
      }
    }
  }
  if (j.contains("anchors")) {
    if (!j["anchors"].is_object())
      return fail("field 'anchors' must map individuals to nodes");
    for (const auto& [ind, v] : j["anchors"].items()) {
      if (!v.is_string()) return fail("anchor targets must be node names");
      a.anchors[ind] = v.get<std::string>();
    }
  }
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) return fail("field 'edges' must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_string() ||
          !e[1].is_number_unsigned() || !e[2].is_string() || !e[3].is_string())
        return fail("edges must be [from, type-index, role, to] quadruples");
      a.edges.push_back({e[0].get<std::string>(), e[1].get<std::size_t>(),
                         e[2].get<std::string>(), e[3].get<std::string>()});
    }
  }
  if (j.contains("open")) {
    if (!j["open"].is_array())
      return fail("field 'open' must be an array of node names");
    for (const auto& v : j["open"]) {
      if (!v.is_string()) return fail("open entries must be node names");
      a.open.insert(v.get<std::string>());
    }
  }
  validate_references(a);
  return a;
}

}  // namespace abd
