#include "abd/cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "abd/abstraction.hpp"
#include "abd/common.hpp"
#include "abd/complex_abduce.hpp"
#include "abd/flat_abduce.hpp"
#include "abd/generators.hpp"
#include "abd/minsize.hpp"
#include "abd/parser.hpp"
#include "abd/reasoner.hpp"

namespace abd {

namespace {

using ojson = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson hypothesis_json(const KnowledgeBase& h) {
  ojson j;
  j["text"] = to_text(h);
  j["size"] = size_of(h);
  return j;
}

unsigned parse_unsigned(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    throw input_error(what + " must be a non-negative integer, got: " + s);
  }
  if (pos != s.size() || s[0] == '-')
    throw input_error(what + " must be a non-negative integer, got: " + s);
  return static_cast<unsigned>(v);
}

// DIMACS-style clause body: whitespace-separated literals, 0 ends a clause.
std::vector<std::vector<int>> parse_clause_body(const std::string& body) {
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  std::istringstream in(body);
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    long lit = 0;
    try {
      lit = std::stol(tok, &pos);
    } catch (const std::exception&) {
      throw input_error("clause body expects integers, got: " + tok);
    }
    if (pos != tok.size())
      throw input_error("clause body expects integers, got: " + tok);
    if (lit == 0) {
      clauses.push_back(current);
      current.clear();
    } else {
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!current.empty())
    throw input_error("clause body must end each clause with 0");
  if (clauses.empty()) throw input_error("clause body holds no clauses");
  return clauses;
}

TilingInstance tiling_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("tiling instance is not valid JSON: ") +
                      e.what());
  }
  if (!j.is_object())
    throw input_error("tiling instance must be a JSON object");

  auto string_list = [&](const char* field, bool required) {
    std::vector<std::string> out;
    if (!j.contains(field)) {
      if (required)
        throw input_error(std::string("tiling instance lacks \"") + field +
                          "\"");
      return out;
    }
    if (!j[field].is_array())
      throw input_error(std::string("tiling field \"") + field +
                        "\" must be an array of strings");
    for (const auto& e : j[field]) {
      if (!e.is_string())
        throw input_error(std::string("tiling field \"") + field +
                          "\" must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  };
  auto pair_set = [&](const char* field) {
    std::set<std::pair<std::string, std::string>> out;
    if (!j.contains(field)) return out;
    if (!j[field].is_array())
      throw input_error(std::string("tiling field \"") + field +
                        "\" must be an array of two-string pairs");
    for (const auto& e : j[field]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
          !e[1].is_string())
        throw input_error(std::string("tiling field \"") + field +
                          "\" must be an array of two-string pairs");
      out.insert({e[0].get<std::string>(), e[1].get<std::string>()});
    }
    return out;
  };

  TilingInstance t;
  t.tiles = string_list("tiles", true);
  t.initial = string_list("initial", true);
  if (!j.contains("final") || !j["final"].is_string())
    throw input_error("tiling instance lacks a string \"final\"");
  t.final_tile = j["final"].get<std::string>();
  t.horizontal = pair_set("horizontal");
  t.vertical = pair_set("vertical");
  if (j.contains("n")) {
    if (!j["n"].is_number_unsigned())
      throw input_error("tiling field \"n\" must be a non-negative integer");
    t.n = j["n"].get<unsigned>();
  }
  return t;
}

AbductionProblem make_family(const std::string& family,
                             const std::vector<std::string>& params) {
  auto one_param = [&](const char* what) -> const std::string& {
    if (params.size() != 1)
      throw input_error("family " + family + " takes exactly one parameter: " +
                        what);
    return params[0];
  };
  if (family == "counter")
    return gen_exp_counter(parse_unsigned(one_param("n"), "n"));
  if (family == "double-counter")
    return gen_double_counter(parse_unsigned(one_param("n"), "n"));
  if (family == "tripleexp")
    return gen_alc_tripleexp(parse_unsigned(one_param("n"), "n"));
  if (family == "cnf")
    return gen_cnf(parse_clause_body(one_param("clause body, 0-terminated")));
  if (family == "tiling")
    return gen_tiling(tiling_from_json(slurp(one_param("instance JSON file"))))
        .first;
  throw input_error("unknown family: " + family +
                    " (expected counter | double-counter | cnf | tiling | "
                    "tripleexp)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  const auto t_start = std::chrono::steady_clock::now();

  CLI::App app{"signature-based ABox abduction workbench"};
  app.name("abd");
  app.require_subcommand(1);

  double wall_seconds = 60.0;
  std::size_t max_types = std::size_t{1} << 20;
  std::size_t max_nodes = 10'000'000;
  unsigned jobs = 1;
  bool with_timings = false;
  app.add_option("--wall-seconds", wall_seconds,
                 "wall-clock budget in seconds (default 60)")
      ->envname("ABD_WALL_SECONDS")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-types", max_types,
                 "candidate type budget (default 2^20)")
      ->envname("ABD_MAX_TYPES")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-nodes", max_nodes,
                 "search node budget (default 10^7)")
      ->envname("ABD_MAX_NODES")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs,
                 "worker count; accepted for compatibility, execution is "
                 "sequential and output identical for every value")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timings", with_timings,
               "include wall-clock phase times in the report (their values "
               "naturally differ between runs)");

  std::string problem_path, hypothesis_path, abstraction_path;
  std::string mode_arg, family, out_path;
  std::vector<std::string> gen_params;
  std::uint64_t bound = 0;
  std::size_t fresh = 0, chain_length = 0;

  auto* abduce_cmd =
      app.add_subcommand("abduce", "compute a hypothesis for a problem file");
  abduce_cmd->fallthrough();
  abduce_cmd->add_option("problem", problem_path, "problem file")->required();
  auto* mode_opt = abduce_cmd->add_option(
      "--mode", mode_arg,
      "override the problem's mode: flat | complex | complex-no-fresh");
  auto* bound_opt_a = abduce_cmd->add_option(
      "--bound", bound, "override the problem's size bound");
  abduce_cmd
      ->add_option("--fresh", fresh,
                   "fresh-pool size; consumed by minimize, accepted here for "
                   "interface uniformity with no effect")
      ->check(CLI::NonNegativeNumber);
  auto* chain_opt =
      abduce_cmd
          ->add_option("--chain-length", chain_length,
                       "depth cap for the complex engine's chains (default: "
                       "number of candidate types)")
          ->check(CLI::PositiveNumber);

  auto* minimize_cmd = app.add_subcommand(
      "minimize", "find a size-minimal hypothesis for a problem file");
  minimize_cmd->fallthrough();
  minimize_cmd->add_option("problem", problem_path, "problem file")
      ->required();
  auto* bound_opt_m = minimize_cmd->add_option(
      "--bound", bound, "override the problem's size bound");
  auto* fresh_opt_m =
      minimize_cmd
          ->add_option("--fresh", fresh,
                       "allow up to N fresh individuals in the hypothesis")
          ->check(CLI::NonNegativeNumber);

  auto* verify_cmd = app.add_subcommand(
      "verify", "check a hypothesis file against a problem file");
  verify_cmd->fallthrough();
  verify_cmd->add_option("problem", problem_path, "problem file")->required();
  verify_cmd->add_option("hypothesis", hypothesis_path, "hypothesis file")
      ->required();

  auto* generate_cmd = app.add_subcommand(
      "generate", "emit a problem file from a built-in family");
  generate_cmd->fallthrough();
  generate_cmd
      ->add_option("family", family,
                   "counter | double-counter | cnf | tiling | tripleexp")
      ->required();
  generate_cmd->add_option(
      "param", gen_params,
      "n for the counter families, a 0-terminated clause body for cnf, an "
      "instance JSON file for tiling");
  generate_cmd->add_option("--out", out_path,
                           "also write the problem file to this path");

  auto* abstract_cmd = app.add_subcommand(
      "abstract", "work with interpretation abstractions");
  abstract_cmd->fallthrough();
  abstract_cmd->require_subcommand(1);
  auto* abs_check = abstract_cmd->add_subcommand(
      "check", "report conformance and signature-completeness violations");
  auto* abs_extract = abstract_cmd->add_subcommand(
      "extract", "render the abstraction as an ABox over the signature");
  for (auto* sub : {abs_check, abs_extract}) {
    sub->fallthrough();
    sub->add_option("problem", problem_path,
                    "problem file supplying the background and signature")
        ->required();
    sub->add_option("abstraction", abstraction_path, "abstraction JSON file")
        ->required();
  }

  ojson rep;
  rep["schema"] = 1;
  rep["command"] = args;

  std::string outcome = "error";
  ojson payload = ojson::object();
  std::optional<std::string> error_msg;
  Ctx* ctx_ptr = nullptr;

  auto finish = [&](int code) {
    rep["outcome"] = outcome;
    for (auto& [key, value] : payload.items()) rep[key] = value;
    if (error_msg) rep["error"] = *error_msg;
    if (with_timings) {
      ojson t;
      t["total_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        t_start)
              .count();
      rep["timings"] = t;
    } else {
      rep["timings"] = ojson::object();
    }
    ojson st;
    st["types_built"] = ctx_ptr ? ctx_ptr->stats.types_built : 0;
    st["selectors_tried"] = ctx_ptr ? ctx_ptr->stats.selectors_tried : 0;
    st["search_nodes"] = ctx_ptr ? ctx_ptr->stats.search_nodes : 0;
    rep["stats"] = st;
    out << rep.dump(2) << "\n";
    return code;
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_msg = e.what();
    return finish(3);
  }

  Ctx ctx(Budget{wall_seconds, max_types, max_nodes});
  ctx_ptr = &ctx;

  try {
    if (app.got_subcommand(abduce_cmd)) {
      AbductionProblem p = parse_problem(slurp(problem_path));
      if (mode_opt->count()) {
        auto m = mode_from_string(mode_arg);
        if (!m) throw input_error("unknown mode: " + mode_arg);
        p.mode = *m;
      }
      if (bound_opt_a->count()) p.size_bound = bound;
      payload["mode"] = to_string(p.mode);
      payload["dialect"] = to_string(p.dialect);
      std::optional<std::size_t> chain;
      if (chain_opt->count()) chain = chain_length;
      std::optional<KnowledgeBase> h = p.mode == Mode::Flat
                                           ? flat_abduce(p, ctx)
                                           : complex_abduce_elbot(p, chain, ctx);
      if (!h) {
        outcome = "none";
        return finish(1);
      }
      VerificationReport v = check_hypothesis(p, *h, ctx);
      payload["hypothesis"] = hypothesis_json(*h);
      payload["verification"] = ojson::parse(to_json(v));
      if (!v.passed()) {
        // only the size bound can fail here; a bounded hypothesis may still
        // exist, so the honest verdict is unknown rather than none
        outcome = "unknown";
        error_msg = "the hypothesis exceeds the size bound; a bounded one "
                    "may still exist (use minimize)";
        return finish(2);
      }
      outcome = "hypothesis";
      return finish(0);
    }

    if (app.got_subcommand(minimize_cmd)) {
      AbductionProblem p = parse_problem(slurp(problem_path));
      if (bound_opt_m->count()) p.size_bound = bound;
      payload["mode"] = to_string(p.mode);
      payload["dialect"] = to_string(p.dialect);
      SearchConfig cfg;
      if (fresh_opt_m->count() && fresh > 0) {
        cfg.pool = SearchConfig::Pool::WithFreshPool;
        cfg.fresh_count = fresh;
      }
      MinResult r = min_abduce(p, cfg, ctx);
      if (r.outcome == Outcome::Found) {
        VerificationReport v = check_hypothesis(p, *r.hypothesis, ctx);
        payload["hypothesis"] = hypothesis_json(*r.hypothesis);
        payload["verification"] = ojson::parse(to_json(v));
        if (!v.passed())
          throw std::logic_error(
              "internal: minimal hypothesis failed verification");
        outcome = "hypothesis";
        return finish(0);
      }
      if (r.outcome == Outcome::None) {
        outcome = "none";
        return finish(1);
      }
      outcome = "unknown";
      error_msg =
          "budget exhausted before the search space was covered";
      return finish(2);
    }

    if (app.got_subcommand(verify_cmd)) {
      AbductionProblem p = parse_problem(slurp(problem_path));
      KnowledgeBase h = parse_kb(slurp(hypothesis_path));
      if (!h.is_abox())
        throw input_error("hypothesis file must hold assertions only");
      payload["mode"] = to_string(p.mode);
      payload["dialect"] = to_string(p.dialect);
      VerificationReport v = check_hypothesis(p, h, ctx);
      payload["hypothesis"] = hypothesis_json(h);
      payload["verification"] = ojson::parse(to_json(v));
      outcome = v.passed() ? "hypothesis" : "none";
      return finish(v.passed() ? 0 : 1);
    }

    if (app.got_subcommand(generate_cmd)) {
      AbductionProblem p = make_family(family, gen_params);
      std::string text = print_problem(p);
      if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw input_error("cannot write file: " + out_path);
        f << text;
      }
      ojson pj;
      pj["text"] = text;
      payload["problem"] = pj;
      outcome = "hypothesis";
      return finish(0);
    }

    if (app.got_subcommand(abstract_cmd)) {
      AbductionProblem p = parse_problem(slurp(problem_path));
      InterpretationAbstraction a =
          abstraction_from_json(slurp(abstraction_path));
      ClosurePtr cl = build_closure(p.kb, p.observation);
      TypeSet T = type_elimination(cl, p.kb, ctx);
      if (abstract_cmd->got_subcommand(abs_check)) {
        std::vector<Violation> violations = check_alc_conform(a);
        for (auto& v : check_sigma_complete(a, T, p.sigma))
          violations.push_back(std::move(v));
        ojson arr = ojson::array();
        for (const auto& v : violations) {
          ojson vj;
          vj["rule"] = v.rule;
          vj["detail"] = v.detail;
          arr.push_back(vj);
        }
        payload["violations"] = arr;
        outcome = violations.empty() ? "hypothesis" : "none";
        return finish(violations.empty() ? 0 : 1);
      }
      KnowledgeBase h = abstraction_to_abox(a, T, p.sigma);
      payload["hypothesis"] = hypothesis_json(h);
      outcome = "hypothesis";
      return finish(0);
    }

    throw input_error("no subcommand selected");
  } catch (const resource_error& e) {
    outcome = "unknown";
    error_msg = e.what();
    return finish(2);
  } catch (const input_error& e) {
    outcome = "error";
    error_msg = e.what();
    return finish(3);
  } catch (const std::exception& e) {
    outcome = "error";
    error_msg = e.what();
    return finish(3);
  }
}

}  // namespace abd
