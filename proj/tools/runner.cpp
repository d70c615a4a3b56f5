// ============================================================================
//  runner.cpp -- CLI front-end: check / synth / bench / validate / regions
// ============================================================================

#include "runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stctl/compose.hpp"
#include "stctl/fixtures.hpp"
#include "stctl/oracle.hpp"
#include "stctl/region.hpp"
#include "stctl/strategy_engine.hpp"

namespace stctl::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SystemSpec load_model(const std::string& path) {
  SystemSpec spec = parse_model(slurp(path));
  std::vector<Diagnostic> diags = validate(spec);
  if (!diags.empty()) {
    for (const Diagnostic& d : diags)
      std::cerr << path << ": [" << d.rule << "] " << d.agent
                << (d.location.empty() ? "" : "/" + d.location) << ": "
                << d.message << "\n";
    throw std::runtime_error("model validation failed");
  }
  return spec;
}

int resolve_jobs(int flag_jobs) {
  if (flag_jobs > 0) return flag_jobs;
  if (const char* env = std::getenv("STCTL_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

Semantics parse_semantics(const std::string& s) {
  if (s == "continuous") return Semantics::Continuous;
  if (s == "discrete") return Semantics::Discrete;
  if (s == "untimed") return Semantics::Untimed;
  throw std::runtime_error("unknown semantics '" + s +
                           "' (continuous|discrete|untimed)");
}

// "A..B" or a single "V"
std::pair<int, int> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

// ---------------------------------------------------------------------------
//  Subcommand configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string model_path;
  std::string formula;
  std::string formula_file;
  std::string kind = "ir";
  bool witness = false;
  bool all = false;
  bool oracle = false;
  bool dump_model = false;
  int jobs = 0;
  double timeout_s = 0;
  // bench
  std::string bench_target;
  std::string voters = "1..3";
  int candidates = 2;
  int coalition = 1;
  // fixture
  std::string fixture_name;
  int fixture_voters = 1;
  std::string semantics = "continuous";
  std::uint64_t seed = 0;
  std::string out_path;
};

StatePtr config_formula(const RunConfig& cfg) {
  if (!cfg.formula_file.empty()) return parse_formula(slurp(cfg.formula_file));
  if (cfg.formula.empty()) throw std::runtime_error("no formula given");
  return parse_formula(cfg.formula);
}

CheckOptions config_options(const RunConfig& cfg) {
  CheckOptions opts;
  opts.kind = parse_strategy_kind(cfg.kind);
  opts.want_witness = cfg.witness || cfg.all;
  opts.jobs = resolve_jobs(cfg.jobs);
  opts.timeout_ms = static_cast<std::uint64_t>(cfg.timeout_s * 1000.0);
  return opts;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
//  Commands
// ---------------------------------------------------------------------------

int cmd_check(const RunConfig& cfg) {
  SystemSpec spec = load_model(cfg.model_path);
  StatePtr f = config_formula(cfg);
  if (cfg.dump_model) std::cout << model_to_json(compose(spec)) << "\n";
  if (cfg.oracle) {
    bool holds = oracle_check(spec, f, parse_strategy_kind(cfg.kind));
    emit({{"holds", holds}, {"oracle", true}});
    return holds ? 0 : 1;
  }
  CheckOptions opts = config_options(cfg);
  Verdict v = check_strategic(spec, f, opts);
  if (opts.kind == StrategyKind::Ir && v.witness.has_value()) {
    GlobalModel m = compose(spec);
    emit(verdict_to_json(spec, &m, v));
  } else {
    emit(verdict_to_json(spec, nullptr, v));
  }
  return v.holds ? 0 : 1;
}

int cmd_synth(const RunConfig& cfg) {
  SystemSpec spec = load_model(cfg.model_path);
  StatePtr f = config_formula(cfg);
  CheckOptions opts = config_options(cfg);
  opts.want_witness = true;

  std::vector<Strategy> found;
  if (cfg.all) {
    found = synth_all(spec, f, opts);
  } else {
    Verdict v = check_strategic(spec, f, opts);
    if (v.witness.has_value()) found.push_back(*v.witness);
  }
  nlohmann::json out = nlohmann::json::array();
  GlobalModel m = compose(spec);
  for (const Strategy& s : found) out.push_back(strategy_to_json(spec, &m, s));
  emit({{"count", found.size()}, {"strategies", std::move(out)}});
  return found.empty() ? 1 : 0;
}

int cmd_bench(const RunConfig& cfg) {
  if (cfg.bench_target != "voting")
    throw std::runtime_error("unknown bench target '" + cfg.bench_target + "'");
  auto [lo, hi] = parse_range(cfg.voters);
  if (lo < 1 || hi < lo) throw std::runtime_error("bad --voters range");
  const int k = cfg.coalition;

  std::cout << "v,c,k,holds,millis\n";
  for (int v = lo; v <= hi; ++v) {
    if (k > v) throw std::runtime_error("--coalition exceeds voter count");
    SystemSpec spec = gen_voting(v, cfg.candidates, Semantics::Continuous);
    std::vector<std::string> agents;
    for (int i = 1; i <= k; ++i) agents.push_back("voter" + std::to_string(i));
    Interval win{0, 8, true, true};
    StatePtr f = desugar(
        mk_coalition(agents, mk_ex_finally(win, mk_lift(mk_prop("v1")))));
    CheckOptions opts;
    opts.jobs = resolve_jobs(cfg.jobs);
    opts.timeout_ms =
        static_cast<std::uint64_t>((cfg.timeout_s > 0 ? cfg.timeout_s : 120) *
                                   1000.0);
    auto t0 = std::chrono::steady_clock::now();
    try {
      Verdict verdict = check_strategic(spec, f, opts);
      std::cout << v << "," << cfg.candidates << "," << k << ","
                << (verdict.holds ? "true" : "false") << ","
                << verdict.stats.millis << "\n";
    } catch (const TimeoutError&) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      std::cout << v << "," << cfg.candidates << "," << k << ",timeout," << ms
                << "\n";
    }
    std::cout.flush();
  }
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  SystemSpec spec = parse_model(slurp(cfg.model_path));
  std::vector<Diagnostic> diags = validate(spec);
  nlohmann::json out = nlohmann::json::array();
  for (const Diagnostic& d : diags)
    out.push_back({{"rule", d.rule},
                   {"agent", d.agent},
                   {"location", d.location},
                   {"message", d.message}});
  emit({{"diagnostics", std::move(out)}});
  return diags.empty() ? 0 : 1;
}

int cmd_regions(const RunConfig& cfg) {
  SystemSpec spec = load_model(cfg.model_path);
  StatePtr f = config_formula(cfg);
  GlobalModel m = compose(spec);
  RegionGraph rg = build_region_graph(m, max_constant(f), true);
  std::size_t action_edges = 0;
  for (const RegionVertex& v : rg.vertices) action_edges += v.actions.size();
  emit({{"states", m.states.size()},
        {"model_edges", m.edges.size()},
        {"region_vertices", rg.vertices.size()},
        {"region_action_edges", action_edges},
        {"clocks", m.clocks},
        {"formula_max", max_constant(f)}});
  return 0;
}

int cmd_fixture(const RunConfig& cfg) {
  SystemSpec spec;
  if (cfg.fixture_name == "voting") {
    spec = gen_voting(cfg.fixture_voters, cfg.candidates,
                      parse_semantics(cfg.semantics));
  } else if (cfg.fixture_name == "expressivity") {
    spec = gen_expressivity(parse_semantics(cfg.semantics)).M;
  } else if (cfg.fixture_name == "expressivity-prime") {
    spec = gen_expressivity(parse_semantics(cfg.semantics)).Mprime;
  } else if (cfg.fixture_name == "random") {
    RandomSystemParams p;
    p.semantics = parse_semantics(cfg.semantics);
    spec = random_system(p, cfg.seed);
  } else {
    throw std::runtime_error(
        "unknown fixture '" + cfg.fixture_name +
        "' (voting|expressivity|expressivity-prime|random)");
  }
  std::string text = spec_to_json(spec);
  if (cfg.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + cfg.out_path + "'");
    out << text << "\n";
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"explicit-state model checker for strategic timed logics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_model = [&](CLI::App* c) {
    c->add_option("-m,--model", cfg.model_path, "model file (JSON)")
        ->required();
  };
  auto add_formula = [&](CLI::App* c) {
    c->add_option("-f,--formula", cfg.formula, "formula text");
    c->add_option("-F,--formula-file", cfg.formula_file, "formula file");
  };
  auto add_engine = [&](CLI::App* c) {
    c->add_option("--kind", cfg.kind, "strategy class: ir or Ir");
    c->add_option("--jobs", cfg.jobs, "worker threads (or STCTL_JOBS)");
    c->add_option("--timeout", cfg.timeout_s, "timeout in seconds");
  };

  CLI::App* check = app.add_subcommand("check", "decide a formula");
  add_model(check);
  add_formula(check);
  add_engine(check);
  check->add_flag("--witness", cfg.witness, "report a witness strategy");
  check->add_flag("--oracle", cfg.oracle, "use the brute-force oracle");
  check->add_flag("--dump-model", cfg.dump_model, "dump the composed model");

  CLI::App* synth = app.add_subcommand("synth", "synthesize strategies");
  add_model(synth);
  add_formula(synth);
  add_engine(synth);
  synth->add_flag("--all", cfg.all, "list every successful strategy");

  CLI::App* bench = app.add_subcommand("bench", "benchmark suites");
  bench->add_option("target", cfg.bench_target, "suite name (voting)")
      ->required();
  bench->add_option("--voters", cfg.voters, "voter range A..B");
  bench->add_option("--candidates", cfg.candidates, "candidate count");
  bench->add_option("--coalition", cfg.coalition, "coalition size k");
  bench->add_option("--jobs", cfg.jobs, "worker threads (or STCTL_JOBS)");
  bench->add_option("--timeout", cfg.timeout_s, "per-instance timeout (s)");

  CLI::App* val = app.add_subcommand("validate", "validate a model file");
  add_model(val);

  CLI::App* regions = app.add_subcommand("regions", "region graph summary");
  add_model(regions);
  add_formula(regions);

  CLI::App* fixture = app.add_subcommand("fixture", "emit a built-in model");
  fixture->add_option("name", cfg.fixture_name,
                      "voting|expressivity|expressivity-prime|random")
      ->required();
  fixture->add_option("--voters", cfg.fixture_voters, "voting: voter count");
  fixture->add_option("--candidates", cfg.candidates, "voting: candidates");
  fixture->add_option("--semantics", cfg.semantics,
                      "continuous|discrete|untimed");
  fixture->add_option("--seed", cfg.seed, "random: generator seed");
  fixture->add_option("-o,--output", cfg.out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(cfg);
    if (*synth) return cmd_synth(cfg);
    if (*bench) return cmd_bench(cfg);
    if (*val) return cmd_validate(cfg);
    if (*regions) return cmd_regions(cfg);
    if (*fixture) return cmd_fixture(cfg);
  } catch (const FormulaError& e) {
    std::cerr << "formula error at " << e.line() << ":" << e.column() << ": "
              << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const TimeoutError& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return 2;
  } catch (const EngineError& e) {
    std::cerr << "engine error [" << e.code() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace stctl::cli
