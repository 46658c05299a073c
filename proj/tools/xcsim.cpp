// xcsim: batch front-end for the simulator. Subcommands:
//   run             execute a scenario config, write metrics.csv + trace.txt
//   check           parse and check an .xc source file
//   validate-trace  event-structure checks on a trace file, plus denotational
//                   agreement when the producing config is supplied

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "xc/lang.hpp"
#include "xc/oracles/oracles.hpp"
#include "xc/scenarios/scenarios.hpp"
#include "xc/sim/sim.hpp"
#include "xc/stdlib.hpp"

namespace fs = std::filesystem;

namespace {

int log_level() {
  const char* v = std::getenv("XC_LOG");
  if (!v) return 0;
  std::string s = v;
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[xcsim] " << msg << "\n";
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return true;
}

struct RunSpec {
  std::string config_path;
  std::string scenario_override;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int repeat = 1;
};

int load_config(const RunSpec& spec, xc::sim::SimConfig& cfg) {
  std::string text;
  if (!read_file(spec.config_path, text)) {
    std::cerr << "error: cannot read config file '" << spec.config_path << "'\n";
    return 2;
  }
  auto parsed = xc::sim::parse_config(text);
  if (!parsed.errors.empty()) {
    for (const auto& e : parsed.errors) std::cerr << "error: config: " << e << "\n";
    return 2;
  }
  cfg = std::move(parsed.config);
  if (spec.seed_set) cfg.seed = spec.seed;
  if (!spec.scenario_override.empty()) cfg.extra["scenario"] = spec.scenario_override;
  return 0;
}

int write_outputs(const fs::path& dir, const std::vector<xc::scenarios::TimeSeries>& series,
                  const xc::sim::Trace& trace) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::string err;
  if (!xc::scenarios::export_csv_file(series, (dir / "metrics.csv").string(), &err)) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }
  std::ofstream tf(dir / "trace.txt", std::ios::binary);
  if (!tf) {
    std::cerr << "error: cannot open " << (dir / "trace.txt") << " for writing\n";
    return 2;
  }
  xc::sim::write_trace(trace, tf);
  return 0;
}

int cmd_run(const RunSpec& spec) {
  xc::sim::SimConfig base;
  if (int rc = load_config(spec, base)) return rc;

  std::string scenario_name = base.extra_or("scenario", "");
  xc::ExprPtr custom_program;
  if (scenario_name == "custom") {
    std::string path = base.extra_or("program", "");
    std::string src;
    if (path.empty() || !read_file(path, src)) {
      std::cerr << "error: custom scenario needs a readable 'program' file, got '" << path
                << "'\n";
      return 2;
    }
    try {
      custom_program = xc::lib::compile_program(src);
    } catch (const xc::lib::CompileError& e) {
      std::cerr << e.what();
      return 1;
    }
  }

  std::vector<std::vector<xc::scenarios::TimeSeries>> all_series;
  for (int k = 0; k < spec.repeat; ++k) {
    xc::sim::SimConfig cfg = base;
    cfg.seed = base.seed + static_cast<std::uint64_t>(k);
    log_info("running scenario '" + scenario_name + "' with seed " + std::to_string(cfg.seed));

    xc::sim::Trace trace;
    std::vector<xc::scenarios::TimeSeries> series;
    try {
      if (custom_program) {
        trace = xc::sim::run(cfg, custom_program, nullptr);
      } else {
        xc::scenarios::Scenario sc = xc::scenarios::make_scenario(cfg);
        trace = xc::sim::run(cfg, sc.program, sc.sensors.get());
        series = xc::scenarios::scenario_metrics(sc.name, cfg, trace);
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const xc::lib::CompileError& e) {
      std::cerr << e.what();
      return 1;
    }
    log_info("finished: " + std::to_string(trace.events.size()) + " events");

    fs::path dir = spec.repeat == 1
                       ? fs::path(spec.out_dir)
                       : fs::path(spec.out_dir) / ("run_" + std::to_string(cfg.seed));
    if (int rc = write_outputs(dir, series, trace)) return rc;
    all_series.push_back(std::move(series));
  }

  if (spec.repeat > 1 && !all_series.front().empty()) {
    std::vector<xc::scenarios::TimeSeries> means;
    for (size_t s = 0; s < all_series.front().size(); ++s) {
      std::vector<xc::scenarios::TimeSeries> runs;
      for (auto& run_series : all_series) runs.push_back(run_series[s]);
      means.push_back(xc::scenarios::mean_series(runs));
    }
    std::string err;
    if (!xc::scenarios::export_csv_file(means, (fs::path(spec.out_dir) / "metrics_mean.csv").string(),
                                        &err)) {
      std::cerr << "error: " << err << "\n";
      return 2;
    }
  }
  return 0;
}

int cmd_check(const std::string& path) {
  std::string src;
  if (!read_file(path, src)) {
    std::cerr << "error: cannot read source file '" << path << "'\n";
    return 2;
  }
  auto lexed = xc::lang::tokenize(src);
  xc::lang::ParseResult parsed;
  if (lexed.diagnostics.empty()) parsed = xc::lang::parse(lexed.tokens);
  std::vector<xc::lang::Diagnostic> diags = lexed.diagnostics;
  for (auto& d : parsed.diagnostics) diags.push_back(d);
  if (parsed.expr)
    for (auto& d : xc::lang::check_program(parsed.expr)) diags.push_back(d);
  bool errors = false;
  for (const auto& d : diags) {
    std::cout << d.format(path) << "\n";
    errors = errors || d.severity == xc::lang::Severity::Error;
  }
  return errors ? 1 : 0;
}

int cmd_validate(const std::string& trace_path, const std::string& config_path) {
  std::ifstream f(trace_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot read trace file '" << trace_path << "'\n";
    return 2;
  }
  auto read = xc::sim::read_trace(f);
  if (!read.errors.empty()) {
    for (const auto& e : read.errors) std::cerr << "error: malformed trace: " << e << "\n";
    return 2;
  }
  auto violations = xc::sim::validate_structure(read.file);
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  if (!violations.empty()) return 1;
  std::cout << "structure: ok (" << read.file.events.size() << " events, "
            << read.file.edges.size() << " edges)\n";
  if (config_path.empty()) return 0;

  // deterministic re-run under the producing config: the in-memory trace
  // carries the sensors the denotational induction needs
  RunSpec spec;
  spec.config_path = config_path;
  xc::sim::SimConfig cfg;
  if (int rc = load_config(spec, cfg)) return rc;
  xc::sim::Trace trace;
  xc::ExprPtr program;
  try {
    xc::scenarios::Scenario sc = xc::scenarios::make_scenario(cfg);
    program = sc.program;
    trace = xc::sim::run(cfg, sc.program, sc.sensors.get());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (trace.events.size() != read.file.events.size()) {
    std::cout << "mismatch: re-run produced a different event count\n";
    return 1;
  }
  for (size_t i = 0; i < trace.events.size(); ++i) {
    bool same = trace.events[i].device == read.file.events[i].device &&
                trace.events[i].time == read.file.events[i].time &&
                xc::sim::render_summary(trace.results[i]) == read.file.summaries[i];
    if (!same) {
      std::cout << "mismatch: event " << trace.events[i].id
                << " differs from the recorded trace\n";
      return 1;
    }
  }
  if (trace.edges != read.file.edges) {
    std::cout << "mismatch: messaging relation differs from the recorded trace\n";
    return 1;
  }

  auto oracle = xc::oracles::oracle_denotational(trace, program);
  auto bad = xc::oracles::denotational_disagreements(trace, oracle);
  if (!bad.empty()) {
    std::cout << "denotational disagreement at " << bad.size() << " events (first: " << bad.front()
              << ")\n";
    return 1;
  }
  std::cout << "denotational agreement: ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XC network simulator"};
  app.require_subcommand(1);

  RunSpec spec;
  auto* run = app.add_subcommand("run", "run a scenario and write metrics + trace");
  run->add_option("--config", spec.config_path, "config file")->required();
  run->add_option("--seed", spec.seed, "seed override");
  run->add_option("--out", spec.out_dir, "output directory");
  run->add_option("--repeat", spec.repeat, "number of seeds (seed..seed+k-1)")
      ->check(CLI::PositiveNumber);
  run->add_option("--scenario", spec.scenario_override, "scenario override");

  std::string check_path;
  auto* check = app.add_subcommand("check", "parse and check an .xc file");
  check->add_option("file", check_path, "source file")->required();

  std::string trace_path, validate_config;
  auto* validate = app.add_subcommand("validate-trace", "validate a trace file");
  validate->add_option("file", trace_path, "trace file")->required();
  validate->add_option("--config", validate_config, "config that produced the trace");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    spec.seed_set = run->count("--seed") > 0;
    return cmd_run(spec);
  }
  if (check->parsed()) return cmd_check(check_path);
  if (validate->parsed()) return cmd_validate(trace_path, validate_config);
  return 0;
}
