#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/dynamic_bitset.hpp>

namespace abd {

// Malformed input: parse errors, unsupported constructs, bad arguments.
// The CLI maps this to exit code 3.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured budget (wall clock, candidate types, search nodes) ran out.
// The CLI maps this to exit code 2; minimization catches it and reports
// "unknown" instead of "none".
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

using Bits = boost::dynamic_bitset<std::uint64_t>;

struct Budget {
  double wall_seconds = 60.0;
  std::size_t max_types = std::size_t{1} << 20;
  std::size_t max_nodes = 10'000'000;
};

struct Stats {
  std::size_t types_built = 0;
  std::size_t selectors_tried = 0;
  std::size_t search_nodes = 0;
};

// Shared by all searches of one top-level call: enforces the budget and
// accumulates engine statistics for the run report.
class Ctx {
 public:
  explicit Ctx(Budget budget = {})
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  Stats stats;

  const Budget& budget() const { return budget_; }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  // Cheap in tight loops: consults the clock once per 4096 calls.
  void tick() {
    if ((++ticks_ & 0xfff) == 0) check_time();
  }

  void check_time() const {
    if (seconds() > budget_.wall_seconds)
      throw resource_error("wall-clock budget exhausted after " +
                           std::to_string(budget_.wall_seconds) + " s");
  }

  // Counts one unit of search work (selector tried, subset visited, ...).
  void add_node() {
    if (++stats.search_nodes > budget_.max_nodes)
      throw resource_error("search-node budget exhausted (" +
                           std::to_string(budget_.max_nodes) + " nodes)");
    tick();
  }

  // free_bits candidate types would be materialized as 2^free_bits masks.
  void check_type_space(unsigned free_bits) const {
    if (free_bits >= 63 || (std::uint64_t{1} << free_bits) > budget_.max_types)
      throw resource_error(
          "candidate type space 2^" + std::to_string(free_bits) +
          " exceeds the limit of " + std::to_string(budget_.max_types) +
          " types");
  }

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint32_t ticks_ = 0;
};

}  // namespace abd
