// qrm: command-line front end for minimizing configuration sets, evaluating
// QRML models, solving video scenarios and checking constraint safety.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qrm/error.hpp"
#include "qrm/json_io.hpp"
#include "qrm/qrm_solver.hpp"
#include "qrm/qrml/model.hpp"
#include "qrm/qrml/parser.hpp"

namespace {

enum Exit { Ok = 0, Internal = 1, BadInput = 2, Unbounded = 3, Infeasible = 4, Unsafe = 5 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

int exit_code(qrm::ErrorKind kind) {
  using qrm::ErrorKind;
  switch (kind) {
    case ErrorKind::UnboundedDomain: return Unbounded;
    case ErrorKind::InfeasibleScenario:
    case ErrorKind::EmptyFrontier: return Infeasible;
    case ErrorKind::NotABijection:
    case ErrorKind::NormalizationShapeError: return Internal;
    default: return BadInput;
  }
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("qrm");
  logger->set_pattern("qrm: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("QRM_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off")
      spdlog::warn("ignoring QRM_LOG={}; use error, warn, info or debug", env);
    else
      spdlog::set_level(level);
  }
}

struct MinimizeArgs {
  std::string in;
  std::string out;
};

int cmd_minimize(const MinimizeArgs& a) {
  const auto set = qrm::json::decode_set(read_file(a.in));
  const auto min = qrm::minimize(set);
  spdlog::info("minimize: {} of {} configurations kept", min.size(), set.size());
  write_output(a.out, qrm::json::encode(min));
  return Ok;
}

struct EvaluateArgs {
  std::string model;
  std::string component;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto model = qrm::qrml::Model::from_source(read_file(a.model), a.model);
  const auto iface = model.evaluate(a.component);
  if (iface.empty()) spdlog::warn("component {} has no configurations", a.component);
  spdlog::info("evaluate: {} has {} configurations", a.component, iface.size());
  write_output(a.out, qrm::json::encode(iface.set()));
  return Ok;
}

struct SolveArgs {
  std::string scenario;
  std::string out;
  bool no_platform_symmetry = false;
  bool no_stream_symmetry = false;
  bool stats = false;
  unsigned jobs = 1;
};

int cmd_solve(const SolveArgs& a) {
  auto scenario = qrm::solver::scenario_from_json(read_file(a.scenario));
  if (a.no_platform_symmetry) scenario.platform_symmetry = false;
  if (a.no_stream_symmetry) scenario.stream_symmetry = false;
  if (scenario.stream_symmetry && !scenario.cost.symmetric())
    spdlog::info("stream symmetry disabled: the cost distinguishes streams");

  qrm::solver::SolveOptions options;
  options.jobs = a.jobs;
  const auto result = qrm::solver::solve(scenario, options);
  spdlog::info("solve-video: {} mappings, {} after symmetry, {} frontier configurations, {:.1f} ms",
               result.stats.mappings_enumerated, result.stats.mappings_after_symmetry, result.frontier.size(),
               result.stats.wall_time_ms);
  write_output(a.out, qrm::solver::result_to_json(result, a.stats));
  return Ok;
}

struct SafetyArgs {
  std::string in;
  std::string constraint;
};

int cmd_check_safety(const SafetyArgs& a) {
  const auto set = qrm::json::decode_set(read_file(a.in));
  const auto expr = qrm::qrml::parse_expression(a.constraint, "--constraint");
  const auto admit = qrm::qrml::compile_predicate(expr, set.space());
  if (const auto violation = qrm::find_safety_violation(admit, set)) {
    std::cout << "unsafe\n"
              << "  admitted: " << violation->first.to_string() << "\n"
              << "  rejected: " << violation->second.to_string() << " (dominates the admitted one)\n";
    return Unsafe;
  }
  std::cout << "safe on " << set.size() << " configurations\n";
  return Ok;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Quality and resource management interfaces"};
  app.require_subcommand(1);

  MinimizeArgs min_args;
  auto* minimize = app.add_subcommand("minimize", "Keep the Pareto-minimal configurations of a set");
  minimize->add_option("--in", min_args.in, "Configuration set JSON")->required();
  minimize->add_option("--out", min_args.out, "Output file (default: stdout)");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a QRML component to its configuration set");
  evaluate->add_option("--model", eval_args.model, "QRML model")->required();
  evaluate->add_option("--component", eval_args.component, "Component name")->required();
  evaluate->add_option("--out", eval_args.out, "Output file (default: stdout)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve-video", "Pareto frontier of stream rates for a video scenario");
  solve->add_option("--scenario", solve_args.scenario, "Scenario JSON")->required();
  solve->add_option("--out", solve_args.out, "Output file (default: stdout)");
  solve->add_flag("--no-platform-symmetry", solve_args.no_platform_symmetry, "Enumerate all platform labelings");
  solve->add_flag("--no-stream-symmetry", solve_args.no_stream_symmetry, "Treat equal streams as distinct");
  solve->add_flag("--stats", solve_args.stats, "Add mapping counts and wall time");
  solve->add_option("--jobs", solve_args.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  SafetyArgs safety_args;
  auto* safety = app.add_subcommand("check-safety", "Check that a constraint is upward closed on a sample");
  safety->add_option("--in", safety_args.in, "Configuration set JSON")->required();
  safety->add_option("--constraint", safety_args.constraint, "Condition over dimension names")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : BadInput;
  }

  try {
    if (*minimize) return cmd_minimize(min_args);
    if (*evaluate) return cmd_evaluate(eval_args);
    if (*solve) return cmd_solve(solve_args);
    if (*safety) return cmd_check_safety(safety_args);
  } catch (const qrm::Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e.kind());
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    return BadInput;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return Internal;
  }
  return Internal;
}
