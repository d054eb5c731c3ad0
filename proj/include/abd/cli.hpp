#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abd {

// Command-line front end. args holds the words after the program name, e.g.
// {"abduce", "problem.dlp", "--fresh", "2"}. Exactly one JSON run report
// (stable key order, "schema": 1) is printed to out, and the exit code names
// the outcome class:
//   0  success: hypothesis found, verification passed, artifact produced
//   1  none: provably no hypothesis under the engine's parameters, a failed
//      verification, or a non-conforming abstraction
//   2  unknown: a resource budget (wall clock, candidate types, search
//      nodes) ran out before an answer was reached
//   3  input error: unknown subcommand or flag, unreadable file, parse
//      error, or arguments violating a precondition
//
// Subcommands:
//   abduce   <problem> [--mode M] [--bound N] [--fresh N] [--chain-length L]
//   minimize <problem> [--bound N] [--fresh N]
//   verify   <problem> <hypothesis>
//   generate <family> <param> [--out FILE]
//   abstract check|extract <problem> <abstraction.json>
//
// Budgets default to 60 s wall clock, 2^20 candidate types and 10^7 search
// nodes; --wall-seconds/--max-types/--max-nodes override them, as do the
// environment variables ABD_WALL_SECONDS/ABD_MAX_TYPES/ABD_MAX_NODES (flags
// win over the environment). --jobs is validated but execution is always
// sequential; every value produces identical output. Reports are
// byte-identical across repeated runs unless --timings opts into wall-clock
// phase times.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace abd
