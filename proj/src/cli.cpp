#include "qve/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qve/io.hpp"
#include "qve/problems.hpp"
#include "qve/solvers.hpp"
#include "qve/sweep.hpp"

namespace qve::cli {

namespace {

struct InputOptions {
  std::string input;
  std::string spec;
  std::optional<double> scalar;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
  std::vector<double> rho;
  std::optional<double> param;
};

struct RunOptions {
  std::string solver = "perron";
  std::vector<std::string> solvers;
  double tol = kDefaultEpsilon;
  long maxIters = 0;
  int repeats = 1;
  std::string wChoice = "left-perron";
  std::string output;
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("--input", in.input, "Problem JSON file");
  cmd.add_option("--spec", in.spec, "Generator spec JSON file {n, seed, param}");
  cmd.add_option("--scalar", in.scalar, "Scalar problem with B = [[beta]]");
  cmd.add_option("--n", in.n, "Family dimension");
  cmd.add_option("--seed", in.seed, "Family seed");
  cmd.add_option("--rho", in.rho, "Target rho(R) of the family member");
  cmd.add_option("--param", in.param, "Family parameter in [0, 1]");
}

void add_config_options(CLI::App& cmd, RunOptions& run) {
  cmd.add_option("--tol", run.tol, "Per-component tolerance epsilon");
  cmd.add_option("--max-iters", run.maxIters, "Iteration budget (0: default)");
  cmd.add_option("--w-choice", run.wChoice,
                 "Normalization vector: left-perron, right-perron, ones");
  cmd.add_option("--output", run.output, "Write to this file instead of stdout");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

FamilySpec family_from(const InputOptions& in) {
  if (!in.n || *in.n < 1 || *in.n > io::kMaxDimension) {
    throw Error(ErrorCode::ParseError,
                "--n must be in [1, " + std::to_string(io::kMaxDimension) + "]");
  }
  return FamilySpec{*in.n, in.seed};
}

Problem resolve_problem(const InputOptions& in) {
  const int sources = !in.input.empty() + !in.spec.empty() +
                      in.scalar.has_value() + in.n.has_value();
  if (sources != 1) {
    throw Error(ErrorCode::ParseError,
                "give exactly one of --input, --spec, --scalar, --n");
  }
  if (!in.input.empty()) return io::load_problem(in.input);
  if (!in.spec.empty()) {
    const io::GeneratorSpec spec = io::parse_generator_spec(read_file(in.spec));
    return gen_family(FamilySpec{spec.n, spec.seed}, spec.param);
  }
  if (in.scalar) return gen_scalar(*in.scalar);

  const FamilySpec family = family_from(in);
  if (in.param.has_value() == !in.rho.empty() || in.rho.size() > 1) {
    throw Error(ErrorCode::ParseError, "--n needs exactly one of --rho, --param");
  }
  const double param =
      in.param ? *in.param : find_param_for_rho(family, in.rho.front());
  return gen_family(family, param);
}

SolverConfig config_from(const RunOptions& run) {
  SolverConfig cfg;
  cfg.epsilon = run.tol;
  cfg.maxIterations = run.maxIters;
  cfg.weight = parse_weight_choice(run.wChoice);
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorCode::ParseError, "--tol must be > 0");
  if (cfg.maxIterations < 0) throw Error(ErrorCode::ParseError, "--max-iters must be >= 0");
  return cfg;
}

std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += io::format_double(v(i));
  }
  return s + "]";
}

void emit(const RunOptions& run, const std::string& text, std::ostream& out) {
  if (run.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(run.output);
  if (!file) throw Error(ErrorCode::ParseError, "cannot write " + run.output);
  file << text;
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NegativeEntry:
    case ErrorCode::StochasticityViolation:
    case ErrorCode::ParseError:
    case ErrorCode::OutOfRange:
    case ErrorCode::TargetUnreachable:
    case ErrorCode::ReducibleR:
    case ErrorCode::Reducible:
    case ErrorCode::NotNonnegative:
      return true;
    default:
      return false;
  }
}

int cmd_solve(const InputOptions& in, const RunOptions& run, std::ostream& out,
              std::ostream& err) {
  const Problem p = resolve_problem(in);
  const SolverConfig cfg = config_from(run);
  const SolverResult result = solve_by_id(p, run.solver, cfg);

  std::string text;
  text += "solver: " + run.solver + "\n";
  text += "status: " + std::string(to_string(result.status)) + "\n";
  text += "iterations: " + std::to_string(result.iterations) + "\n";
  text += "x: " + format_vector(result.x) + "\n";
  text += "y: " + format_vector(result.y) + "\n";
  text += "residual: " + io::format_double(residual(p, result.x).norm1) + "\n";
  text += "elapsed: " + io::format_double(result.elapsed) + "\n";
  emit(run, text, out);

  if (!result.converged()) {
    err << "warning: " << to_string(result.status);
    if (!result.message.empty()) err << " (" << result.message << ")";
    err << "\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_sweep(const InputOptions& in, const RunOptions& run, std::ostream& out) {
  SweepOptions options;
  options.family = family_from(in);
  options.rhoTargets = in.rho;
  options.solvers = run.solvers.empty() ? std::vector<std::string>{run.solver}
                                        : run.solvers;
  options.config = config_from(run);
  options.repeats = run.repeats;
  if (options.rhoTargets.empty()) {
    throw Error(ErrorCode::ParseError, "sweep needs at least one --rho");
  }
  emit(run, sweep_to_csv(run_sweep(options)), out);
  return kOk;
}

int cmd_analyze(const InputOptions& in, const RunOptions& run,
                std::ostream& out, std::ostream& err) {
  const Problem p = resolve_problem(in);
  const SolverConfig cfg = config_from(run);
  const AnalysisReport report = analyze(p, cfg.weight, cfg);
  emit(run, analysis_to_json(report), out);
  if (report.rates.predictedRate > 1.0 || !report.perron.converged()) {
    err << "warning: predicted rate " << report.rates.predictedRate
        << ", perron status " << to_string(report.perron.status) << "\n";
  }
  return kOk;
}

int cmd_generate(const InputOptions& in, const RunOptions& run,
                 std::ostream& out) {
  emit(run, io::problem_to_json(resolve_problem(in)), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Extinction probabilities of Markovian binary trees", "qve"};
  app.require_subcommand(1);

  InputOptions in;
  RunOptions opts;

  CLI::App* solve = app.add_subcommand("solve", "Solve one problem");
  add_input_options(*solve, in);
  add_config_options(*solve, opts);
  solve->add_option("--solver", opts.solver,
                    "natural, depth, order, thicknesses, newton, perron");

  CLI::App* sweep = app.add_subcommand("sweep", "Benchmark a family over rho(R) targets");
  add_input_options(*sweep, in);
  add_config_options(*sweep, opts);
  sweep->add_option("--solver", opts.solvers, "Solver id (repeatable)");
  sweep->add_option("--repeats", opts.repeats, "Timed runs per cell");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Predicted vs observed Perron iteration rate");
  add_input_options(*analyze_cmd, in);
  add_config_options(*analyze_cmd, opts);

  CLI::App* generate = app.add_subcommand("generate", "Write a problem as JSON");
  add_input_options(*generate, in);
  generate->add_option("--output", opts.output, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(in, opts, out, err);
    if (sweep->parsed()) return cmd_sweep(in, opts, out);
    if (analyze_cmd->parsed()) return cmd_analyze(in, opts, out, err);
    if (generate->parsed()) return cmd_generate(in, opts, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kInputError : kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qve::cli
