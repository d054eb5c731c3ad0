#include "abd/generators.hpp"

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "abd/common.hpp"

namespace abd {

namespace {

// X3 / Xb3 style names: the positive and the complementary bit concept of
// one counter position.
ConceptPtr bit_atom(const std::string& family, bool positive, unsigned i) {
  return atom((positive ? family : family + "b") + std::to_string(i));
}

// The premise of an increment step at position i: the bit at i followed by
// all positive bits below it, highest first. Collapses to the lone bit at
// i = 1.
std::vector<ConceptPtr> carry_chain(const std::string& family,
                                    bool top_positive, unsigned i) {
  std::vector<ConceptPtr> parts{bit_atom(family, top_positive, i)};
  for (unsigned k = i; k-- > 1;) parts.push_back(bit_atom(family, true, k));
  return parts;
}

std::vector<ConceptPtr> all_bits(const std::string& family, bool positive,
                                 unsigned n) {
  std::vector<ConceptPtr> parts;
  parts.reserve(n);
  for (unsigned i = 1; i <= n; ++i)
    parts.push_back(bit_atom(family, positive, i));
  return parts;
}

// The four step schemas of the n-bit counter: a predecessor reading value v
// at its successors derives the bits of v + 1. Positions up to the lowest
// zero bit flip (first two schemas), higher positions carry over unchanged
// (last two). wrap turns the successor constraint into the premise, e.g.
// one existential restriction per stepping role.
template <typename Wrap>
void add_counter_steps(KnowledgeBase& kb, const std::string& family,
                       unsigned n, Wrap wrap) {
  for (unsigned i = 1; i <= n; ++i)
    kb.add(CI{wrap(conj(carry_chain(family, false, i))),
              bit_atom(family, true, i)});
  for (unsigned i = 1; i <= n; ++i)
    kb.add(CI{wrap(conj(carry_chain(family, true, i))),
              bit_atom(family, false, i)});
  for (unsigned i = 2; i <= n; ++i)
    for (unsigned j = 1; j < i; ++j)
      kb.add(
          CI{wrap(conj({bit_atom(family, false, i), bit_atom(family, false, j)})),
             bit_atom(family, false, i)});
  for (unsigned i = 2; i <= n; ++i)
    for (unsigned j = 1; j < i; ++j)
      kb.add(
          CI{wrap(conj({bit_atom(family, true, i), bit_atom(family, false, j)})),
             bit_atom(family, true, i)});
}

void add_counter_disjointness(KnowledgeBase& kb, const std::string& family,
                              unsigned n) {
  for (unsigned i = 1; i <= n; ++i)
    kb.add(CI{conj({bit_atom(family, true, i), bit_atom(family, false, i)}),
              bot()});
}

}  // namespace

AbductionProblem gen_exp_counter(unsigned n) {
  if (n < 1) throw input_error("the counter family needs n >= 1");
  const Role r("r");
  AbductionProblem p;
  p.kb.add(CI{atom("B"), conj(all_bits("X", false, n))});
  add_counter_steps(p.kb, "X", n,
                    [&](ConceptPtr inner) { return exists(r, std::move(inner)); });
  add_counter_disjointness(p.kb, "X", n);
  p.kb.add(CI{conj(all_bits("X", true, n)), atom("A")});
  p.observation.add(ConceptAssertion{"a", atom("A")});
  p.sigma.concepts = {"B"};
  p.sigma.roles = {"r"};
  p.mode = Mode::Flat;
  p.dialect = Dialect::ELbot;
  return p;
}

AbductionProblem gen_double_counter(unsigned n) {
  if (n < 1) throw input_error("the counter family needs n >= 1");
  const Role r("r"), s("s");
  AbductionProblem p;
  p.kb.add(CI{atom("B"), conj(all_bits("X", false, n))});
  add_counter_steps(p.kb, "X", n, [&](ConceptPtr inner) {
    return conj({exists(r, inner), exists(s, inner)});
  });
  add_counter_disjointness(p.kb, "X", n);
  p.kb.add(CI{conj(all_bits("X", true, n)), atom("A")});
  p.observation.add(ConceptAssertion{"a", atom("A")});
  p.sigma.concepts = {"B"};
  p.sigma.roles = {"r", "s"};
  p.mode = Mode::ComplexNoFresh;
  p.dialect = Dialect::ELbot;
  return p;
}

AbductionProblem gen_cnf(const std::vector<std::vector<int>>& clauses) {
  if (clauses.empty()) throw input_error("a CNF needs at least one clause");
  unsigned m = 0;
  for (const auto& clause : clauses) {
    if (clause.empty()) throw input_error("CNF clauses must be non-empty");
    for (int lit : clause) {
      if (lit == 0) throw input_error("CNF literals are non-zero integers");
      unsigned v = (unsigned)std::abs(lit);
      if (v > m) m = v;
    }
  }
  auto var_ind = [](unsigned v) { return "p" + std::to_string(v); };
  auto clause_ind = [](std::size_t j) { return "c" + std::to_string(j + 1); };

  AbductionProblem p;
  p.kb.add(CI{atom("True"), atom("P")});
  p.kb.add(CI{atom("False"), atom("P")});
  p.kb.add(CI{exists(Role("r"), atom("True")), atom("C")});
  p.kb.add(CI{exists(Role("s"), atom("False")), atom("C")});
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    std::set<unsigned> pos;
    for (int lit : clauses[j])
      if (lit > 0) pos.insert((unsigned)lit);
    for (unsigned v : pos) p.kb.add(RoleAssertion{"r", clause_ind(j), var_ind(v)});
  }
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    std::set<unsigned> neg;
    for (int lit : clauses[j])
      if (lit < 0) neg.insert((unsigned)-lit);
    for (unsigned v : neg) p.kb.add(RoleAssertion{"s", clause_ind(j), var_ind(v)});
  }
  for (unsigned v = 1; v <= m; ++v)
    p.observation.add(ConceptAssertion{var_ind(v), atom("P")});
  for (std::size_t j = 0; j < clauses.size(); ++j)
    p.observation.add(ConceptAssertion{clause_ind(j), atom("C")});
  p.sigma.concepts = {"True", "False"};
  p.size_bound = 2 * std::uint64_t{m};
  p.mode = Mode::Flat;
  p.dialect = Dialect::EL;
  return p;
}

namespace {

void validate_tiling_instance(const TilingInstance& t,
                              std::set<std::string>& tile_set) {
  if (t.n < 1) throw input_error("the tiling grid needs n >= 1");
  if (t.n > 28) throw input_error("tiling grids beyond 2^28 per side overflow the size bound");
  if (t.tiles.empty()) throw input_error("a tiling instance needs at least one tile type");
  tile_set = std::set<std::string>(t.tiles.begin(), t.tiles.end());
  if (tile_set.size() != t.tiles.size())
    throw input_error("tile type names must be unique");
  if (!tile_set.count(t.final_tile))
    throw input_error("final tile '" + t.final_tile + "' is not a tile type");
  for (const auto& s : t.initial)
    if (!tile_set.count(s))
      throw input_error("initial tile '" + s + "' is not a tile type");
  if (t.initial.size() > (std::uint64_t{1} << t.n))
    throw input_error("the initial sequence is longer than the first row");
  for (const auto& [u, v] : t.horizontal)
    if (!tile_set.count(u) || !tile_set.count(v))
      throw input_error("horizontal condition mentions an unknown tile");
  for (const auto& [u, v] : t.vertical)
    if (!tile_set.count(u) || !tile_set.count(v))
      throw input_error("vertical condition mentions an unknown tile");
}

ConceptPtr tile_concept(const std::string& tile) { return atom("A" + tile); }

}  // namespace

std::pair<AbductionProblem, std::uint64_t> gen_tiling(const TilingInstance& t) {
  std::set<std::string> tile_set;
  validate_tiling_instance(t, tile_set);
  const unsigned n = t.n;
  const std::uint64_t side = std::uint64_t{1} << n;
  const std::uint64_t cells = side * side;
  const std::uint64_t m = t.initial.size();
  const Role x("x"), y("y");

  AbductionProblem p;

  // A Start-marked tile resets both coordinate counters to zero.
  {
    std::vector<ConceptPtr> zeros = all_bits("X", false, n);
    auto yz = all_bits("Y", false, n);
    zeros.insert(zeros.end(), yz.begin(), yz.end());
    const ConceptPtr rhs = conj(std::move(zeros));
    for (const auto& tile : t.tiles)
      p.kb.add(CI{conj({atom("Start"), tile_concept(tile)}), rhs});
  }

  // Both counters at their maximum, covered and carrying the final tile.
  {
    std::vector<ConceptPtr> parts = all_bits("X", true, n);
    auto ymax = all_bits("Y", true, n);
    parts.insert(parts.end(), ymax.begin(), ymax.end());
    parts.push_back(atom("B"));
    parts.push_back(tile_concept(t.final_tile));
    p.kb.add(CI{conj(std::move(parts)), atom("End")});
  }

  add_counter_disjointness(p.kb, "X", n);
  add_counter_disjointness(p.kb, "Y", n);

  // The X counter steps along x-predecessors, Y along y-predecessors.
  add_counter_steps(p.kb, "X", n,
                    [&](ConceptPtr c) { return exists(x, std::move(c)); });
  add_counter_steps(p.kb, "Y", n,
                    [&](ConceptPtr c) { return exists(y, std::move(c)); });

  // Moving in one direction keeps the other coordinate unchanged.
  for (unsigned i = 1; i <= n; ++i) {
    p.kb.add(CI{exists(y, bit_atom("X", true, i)), bit_atom("X", true, i)});
    p.kb.add(CI{exists(y, bit_atom("X", false, i)), bit_atom("X", false, i)});
  }
  for (unsigned i = 1; i <= n; ++i) {
    p.kb.add(CI{exists(x, bit_atom("Y", true, i)), bit_atom("Y", true, i)});
    p.kb.add(CI{exists(x, bit_atom("Y", false, i)), bit_atom("Y", false, i)});
  }

  // Adjacent tiles outside the allowed pairs clash.
  for (const auto& u : t.tiles)
    for (const auto& v : t.tiles)
      if (!t.horizontal.count({u, v}))
        p.kb.add(CI{conj({exists(x, tile_concept(u)), tile_concept(v)}), bot()});
  for (const auto& u : t.tiles)
    for (const auto& v : t.tiles)
      if (!t.vertical.count({u, v}))
        p.kb.add(CI{conj({exists(y, tile_concept(u)), tile_concept(v)}), bot()});

  // The initial sequence runs along the first row, fed from the Start cell
  // through x-predecessors.
  auto init_name = [](std::uint64_t i) { return atom("I" + std::to_string(i)); };
  if (m >= 1) p.kb.add(CI{atom("Start"), init_name(1)});
  for (std::uint64_t i = 1; i + 1 <= m; ++i)
    p.kb.add(CI{exists(x, init_name(i)), init_name(i + 1)});
  for (std::uint64_t i = 1; i <= m; ++i)
    p.kb.add(CI{init_name(i), tile_concept(t.initial[i - 1])});

  // B spreads from the Start cell to every cell whose known neighbours are
  // covered; a zero coordinate waives the successor in that direction.
  p.kb.add(CI{atom("Start"), atom("B")});
  for (const auto& tile : t.tiles) {
    std::vector<ConceptPtr> lhs = all_bits("X", false, n);
    lhs.push_back(exists(y, conj({tile_concept(tile), atom("B")})));
    p.kb.add(CI{conj(std::move(lhs)), atom("B")});
  }
  for (const auto& tile : t.tiles) {
    std::vector<ConceptPtr> lhs = all_bits("Y", false, n);
    lhs.push_back(exists(x, conj({tile_concept(tile), atom("B")})));
    p.kb.add(CI{conj(std::move(lhs)), atom("B")});
  }
  for (const auto& u : t.tiles)
    for (const auto& v : t.tiles)
      p.kb.add(CI{conj({exists(x, conj({tile_concept(u), atom("B")})),
                        exists(y, conj({tile_concept(v), atom("B")}))}),
                  atom("B")});

  p.observation.add(ConceptAssertion{"a", atom("End")});
  p.sigma.concepts.insert("Start");
  for (const auto& tile : t.tiles) p.sigma.concepts.insert("A" + tile);
  p.sigma.roles = {"x", "y"};
  const std::uint64_t k = 2 * (cells - m) + 6 * (cells - side) + 2;
  p.size_bound = k;
  p.mode = Mode::Flat;
  p.dialect = Dialect::ELbot;
  return {std::move(p), k};
}

KnowledgeBase tiling_to_hypothesis(const TilingInstance& t, const Tiling& f) {
  std::set<std::string> tile_set;
  validate_tiling_instance(t, tile_set);
  const std::uint64_t side = std::uint64_t{1} << t.n;
  const std::uint64_t m = t.initial.size();
  for (const auto& [cell, tile] : f) {
    if (cell.first < 1 || cell.first > side || cell.second < 1 ||
        cell.second > side)
      throw input_error("the tiling assigns cell (" +
                        std::to_string(cell.first) + ", " +
                        std::to_string(cell.second) + ") outside the grid");
    if (!tile_set.count(tile))
      throw input_error("the tiling uses unknown tile '" + tile + "'");
  }
  if (f.size() != side * side)
    throw input_error("the tiling must assign every cell of the grid");

  auto cell_ind = [&](std::uint64_t i, std::uint64_t j) -> std::string {
    if (i == side && j == side) return "a";
    return "a_" + std::to_string(i) + "_" + std::to_string(j);
  };

  KnowledgeBase h;
  for (std::uint64_t i = 1; i <= side; ++i)
    for (std::uint64_t j = 1; j <= side; ++j) {
      if (j == 1 && i <= m) continue;  // the background supplies these
      h.add(ConceptAssertion{cell_ind(i, j), tile_concept(f.at({i, j}))});
    }
  for (std::uint64_t i = 1; i + 1 <= side; ++i)
    for (std::uint64_t j = 1; j <= side; ++j)
      h.add(RoleAssertion{"x", cell_ind(i + 1, j), cell_ind(i, j)});
  for (std::uint64_t i = 1; i <= side; ++i)
    for (std::uint64_t j = 1; j + 1 <= side; ++j)
      h.add(RoleAssertion{"y", cell_ind(i, j + 1), cell_ind(i, j)});
  h.add(ConceptAssertion{cell_ind(1, 1), atom("Start")});
  return h;
}

AbductionProblem gen_alc_tripleexp(unsigned n) {
  if (n < 1) throw input_error("the triple-exponential family needs n >= 1");
  const Role r("r"), s("s");
  auto both_exists = [&](ConceptPtr c) {
    return conj({exists(r, c), exists(s, c)});
  };
  auto all_rs = [&](ConceptPtr c) { return conj({forall(r, c), forall(s, c)}); };
  auto any_rs = [&](ConceptPtr c) { return disj({exists(r, c), exists(s, c)}); };
  // a <-> b and a <-> not b, with the negations already pushed onto the atoms
  auto iff_atoms = [](const std::string& a, const std::string& b, bool same) {
    ConceptPtr first = same ? atom(b) : negation(atom(b));
    ConceptPtr second = same ? negation(atom(b)) : atom(b);
    return disj({conj({atom(a), first}), conj({negation(atom(a)), second})});
  };

  AbductionProblem p;
  // Bit-position counter X: starts at instances of B, steps when both
  // successors agree on the predecessor value.
  p.kb.add(CI{atom("B"), conj(all_bits("X", false, n))});
  add_counter_steps(p.kb, "X", n, both_exists);
  add_counter_disjointness(p.kb, "X", n);
  // Error-offset counter Y: same steps; E0 below sets its start.
  add_counter_steps(p.kb, "Y", n, both_exists);
  add_counter_disjointness(p.kb, "Y", n);

  // No hypothesis may cut r- or s-paths short.
  p.kb.add(CI{top(), conj({exists(r, top()), exists(s, top())})});
  // Bp: every r/s-path from here reaches an instance of B.
  p.kb.add(CI{all_rs(disj({atom("B"), atom("Bp")})), atom("Bp")});
  // The last 2^n elements before B spell the all-zero counter value.
  p.kb.add(CI{atom("B"), conj({atom("Init"), negation(atom("Bit"))})});
  p.kb.add(CI{all_rs(conj({atom("Init"), disj(all_bits("X", false, n))})),
              conj({atom("Init"), negation(atom("Bit"))})});
  // Flip: this bit position toggles in the step to the next counter value.
  p.kb.add(CI{conj(all_bits("X", false, n)), atom("Flip")});
  p.kb.add(CI{all_rs(conj({atom("Flip"), atom("Bit")})), atom("Flip")});
  p.kb.add(CI{conj({disj(all_bits("X", true, n)),
                    any_rs(disj({negation(atom("Flip")), negation(atom("Bit"))}))}),
              negation(atom("Flip"))});
  // Completing the top bit position on a covered element wins or errs.
  {
    std::vector<ConceptPtr> lhs = all_bits("X", true, n);
    lhs.push_back(atom("Flip"));
    lhs.push_back(atom("Bp"));
    p.kb.add(CI{conj(std::move(lhs)), disj({atom("Error"), atom("Goal")})});
  }
  // Error: somewhere below, a bit that had to flip did not. E0 stores the
  // wrong bit in NBit and starts the Y counter ...
  p.kb.add(CI{atom("Error"),
              conj({negation(atom("Init")),
                    any_rs(disj({atom("Error"), atom("E0")}))})});
  {
    std::vector<ConceptPtr> rhs = all_bits("Y", false, n);
    rhs.push_back(atom("E"));
    rhs.push_back(iff_atoms("NBit", "Bit", true));
    p.kb.add(CI{atom("E0"), conj(std::move(rhs))});
  }
  // ... which E carries down one full counter value ...
  p.kb.add(CI{conj({atom("E"), atom("NBit")}),
              any_rs(conj({atom("E"), atom("NBit")}))});
  p.kb.add(CI{conj({atom("E"), negation(atom("NBit"))}),
              any_rs(conj({atom("E"), negation(atom("NBit"))}))});
  {
    std::vector<ConceptPtr> lhs = all_bits("Y", true, n);
    lhs.push_back(atom("E"));
    p.kb.add(CI{conj(std::move(lhs)),
                disj({exists(r, atom("Ef")), exists(s, atom("Ef"))})});
  }
  // ... to the same position in the next value, where the flip failed.
  p.kb.add(CI{conj({atom("Ef"), atom("Flip")}), iff_atoms("Bit", "NBit", true)});
  p.kb.add(CI{conj({atom("Ef"), negation(atom("Flip"))}),
              iff_atoms("Bit", "NBit", false)});

  p.observation.add(ConceptAssertion{"a", atom("Goal")});
  p.sigma.concepts = {"Bit", "B"};
  p.sigma.roles = {"r", "s"};
  p.mode = Mode::ComplexNoFresh;
  p.dialect = Dialect::ALC;
  return p;
}

ConceptPtr witness_concept(unsigned n) {
  if (n < 1) throw input_error("the triple-exponential family needs n >= 1");
  if (n >= 2)
    throw input_error(
        "the witness for n >= 2 expands to an astronomically large text; "
        "refusing to build it");
  const unsigned width = 1u << n;  // bits per counter value
  const std::uint64_t values = std::uint64_t{1} << width;
  std::vector<char> pi;  // all width-bit values ascending, highest bit first
  pi.reserve((std::size_t)(values * width));
  for (std::uint64_t v = 0; v < values; ++v)
    for (unsigned b = width; b-- > 0;) pi.push_back((char)((v >> b) & 1));

  auto lit = [](char bit) -> ConceptPtr {
    return bit ? atom("Bit") : negation(atom("Bit"));
  };
  ConceptPtr c = conj({atom("B"), lit(pi[0])});
  for (std::size_t i = 1; i < pi.size(); ++i)
    c = conj({lit(pi[i]), forall(Role("r"), c), forall(Role("s"), c)});
  return c;
}

}  // namespace abd
