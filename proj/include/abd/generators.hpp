#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "abd/syntax.hpp"

namespace abd {

// Problem families whose smallest hypotheses are provably large; used as
// fixtures and stress benchmarks. Every generator is deterministic: the
// same arguments produce byte-identical problem text.

// Binary counter over concept names X1..Xn / Xb1..Xbn, incremented along
// r-successors and started at instances of B. Observation A(a), abducibles
// {B, r}: the smallest flat hypothesis is an r-chain of 2^n - 1 fresh
// individuals ending in an instance of B.
AbductionProblem gen_exp_counter(unsigned n);

// Two-role variant of the counter: every increment needs both an r- and an
// s-successor, so a hypothesis without fresh individuals must spell out a
// binary tree of double exponential size as nested concepts. Abducibles
// {B, r, s}, observation A(a), mode complex-no-fresh.
AbductionProblem gen_double_counter(unsigned n);

// CNF satisfiability as size-bounded abduction. Clauses hold non-zero
// literals: +v / -v stand for p_v / not p_v, variables numbered 1..m with
// m the largest index used. The problem has a hypothesis of size <= 2m
// (the generated bound) iff the formula is satisfiable: each variable
// needs True or False asserted, and clause individuals reach their
// satisfying literal through the background role edges.
AbductionProblem gen_cnf(const std::vector<std::vector<int>>& clauses);

// Exponential tiling instance <T, T_I, t_e, V, H, n>: tile the 2^n x 2^n
// grid so that row 1 starts with the initial sequence, cell (2^n, 2^n)
// carries the final tile, and horizontally / vertically adjacent tiles are
// allowed by H / V.
struct TilingInstance {
  std::vector<std::string> tiles;    // T: tile type names, unique
  std::vector<std::string> initial;  // T_I: prefix of row 1, |T_I| <= 2^n
  std::string final_tile;            // t_e, required at (2^n, 2^n)
  std::set<std::pair<std::string, std::string>> horizontal;  // H
  std::set<std::pair<std::string, std::string>> vertical;    // V
  unsigned n = 1;
};

// Coordinates (i, j) in [1..2^n]^2 (column, row) to tile names.
using Tiling = std::map<std::pair<std::uint64_t, std::uint64_t>, std::string>;

// Encodes the instance as an EL-bot problem over Sigma = {Start, x, y} and
// one concept name per tile, with observation End(a): hypotheses of size
// <= k are exactly the grids that solve the instance. Returns the problem
// (size bound already set to k) together with k.
std::pair<AbductionProblem, std::uint64_t> gen_tiling(const TilingInstance& t);

// The grid ABox of a concrete tiling: one tile assertion per cell except
// the initial sequence (the background KB contributes those), x- and
// y-edges from each cell to its left / lower neighbour, and Start on cell
// (1,1). Cell (2^n, 2^n) is the observation individual a. Rejects f unless
// it assigns every grid cell exactly once using known tiles.
KnowledgeBase tiling_to_hypothesis(const TilingInstance& t, const Tiling& f);

// ALC family whose smallest hypotheses are triple exponential in n: a
// 2^n-bit counter encoded along chains of Bit / not-Bit elements forces
// witnesses to describe 2^(2^n) counter values. Abducibles {Bit, B, r, s},
// observation Goal(a), mode complex-no-fresh.
AbductionProblem gen_alc_tripleexp(unsigned n);

// The intended hypothesis concept for gen_alc_tripleexp(n): nested
// universal restrictions spelling out every 2^n-bit value in ascending
// order. Refuses n >= 2, where the expanded text form is astronomically
// large.
ConceptPtr witness_concept(unsigned n);

}  // namespace abd
