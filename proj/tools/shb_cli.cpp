// Command-line surface for the heavy-ball quadratic dynamics library:
// exact risk traces, Monte Carlo simulation, bound verification, the
// SGD-vs-SHB iteration race and the ridge regression experiment.
//
// Exit codes: 0 success, 1 check failure, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shb/dynamics.hpp"
#include "shb/lemma_checks.hpp"
#include "shb/libsvm.hpp"
#include "shb/problem.hpp"
#include "shb/ridge.hpp"
#include "shb/schedule.hpp"
#include "shb/serialize.hpp"
#include "shb/simulate.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20240817ull;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stoull(item));
  }
  return values;
}

std::vector<double> resolve_w0(const std::string& spec, std::size_t dim) {
  std::vector<double> values = parse_double_list(spec);
  if (values.empty())
    throw std::invalid_argument("w0 spec is empty");
  if (values.size() == 1 && dim > 1) values.assign(dim, values[0]);
  if (values.size() != dim)
    throw std::invalid_argument("w0 spec has wrong dimension");
  return values;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::cout << content;
    return;
  }
  shb::write_text_file(path, content);
}

struct ExactArgs {
  std::string problem_path, schedule_path, w0_spec = "1", out = "-";
  double beta = 0.0;
  int batch = 1;
  std::size_t stride = 1;
};

int cmd_exact(const ExactArgs& args) {
  const shb::QuadraticProblem problem =
      shb::problem_from_json_file(args.problem_path);
  const shb::Schedule schedule =
      shb::schedule_from_json_file(args.schedule_path);
  const std::vector<double> w0 = resolve_w0(args.w0_spec, problem.dim());
  const shb::RiskTrace trace = shb::exact_risk_trace(
      problem, schedule, args.beta, args.batch, w0, args.stride);
  std::ostringstream csv;
  trace.write_csv(csv);
  write_output(args.out, csv.str());
  return 0;
}

struct SimulateArgs {
  std::string problem_path, schedule_path, w0_spec = "1", out = "-";
  std::string method = "shb";
  std::string checkpoints;
  double beta = 0.0;
  int batch = 1;
  std::uint64_t seed = kDefaultSeed;
  long reps = 100;
  int threads = 1;
  bool as_json = false;
};

int cmd_simulate(const SimulateArgs& args) {
  const shb::QuadraticProblem problem =
      shb::problem_from_json_file(args.problem_path);
  shb::Schedule schedule = shb::schedule_from_json_file(args.schedule_path);
  shb::RunConfig config{problem,
                        std::move(schedule),
                        args.beta,
                        shb::NoiseModel(problem.sigma2() > 0.0
                                            ? shb::NoiseKind::AnisotropicGaussian
                                            : shb::NoiseKind::None,
                                        args.batch),
                        resolve_w0(args.w0_spec, problem.dim()),
                        args.seed,
                        args.reps,
                        {},
                        false,
                        args.threads};
  if (!args.checkpoints.empty())
    config.checkpoints = parse_index_list(args.checkpoints);
  const shb::EmpiricalRisk result =
      args.method == "sgd" ? shb::run_sgd(config) : shb::run_shb(config);
  if (args.as_json) {
    write_output(args.out, shb::empirical_risk_to_json(result));
  } else {
    std::ostringstream csv;
    result.write_csv(csv);
    write_output(args.out, csv.str());
  }
  return 0;
}

struct VerifyArgs {
  std::string check = "all";
  std::string out = "-";
  std::uint64_t seed = kDefaultSeed;
  long trials = 0;
  double rhs_scale = 1.0;
};

int cmd_verify(const VerifyArgs& args) {
  shb::SuiteOptions opts;
  opts.seed = args.seed;
  opts.trials = args.trials;
  opts.check.rhs_scale = args.rhs_scale;

  std::vector<std::string> names;
  if (args.check == "all") {
    names = shb::check_names();
  } else {
    const auto& known = shb::check_names();
    if (std::find(known.begin(), known.end(), args.check) == known.end()) {
      std::cerr << "unknown check '" << args.check << "'; valid names:";
      for (const auto& name : known) std::cerr << ' ' << name;
      std::cerr << " all\n";
      return 2;
    }
    names = {args.check};
  }

  std::vector<shb::CheckReport> reports;
  bool all_passed = true;
  for (const auto& name : names) {
    reports.push_back(shb::run_check_by_name(name, opts));
    all_passed = all_passed && reports.back().passed();
  }
  write_output(args.out, shb::check_reports_to_json(reports) + "\n");
  return all_passed ? 0 : 1;
}

struct Theorem1Args {
  double kappa = 8.0, L = 1.0, c0 = 1.0;
  std::string horizons = "8,32,128";
  std::string out = "-";
};

int cmd_theorem1(const Theorem1Args& args) {
  shb::CheckReport report;
  report.name = "theorem1";
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t T : parse_index_list(args.horizons)) {
    std::vector<shb::Schedule> schedules;
    schedules.push_back(shb::constant_schedule(2.0 / args.L, T));
    schedules.push_back(shb::constant_schedule(1.0 / args.L, T));
    schedules.push_back(shb::step_decay_schedule(1.0 / args.L, 0.1, 4, T));
    report.merge(
        shb::check_theorem1(args.kappa, args.L, args.c0, schedules));
  }
  report.name = "theorem1";
  write_output(args.out, shb::check_report_to_json(report) + "\n");
  return report.passed() ? 0 : 1;
}

struct Theorem2Args {
  double kappa = 4.0, C = 2.0, sigma2 = 1.0, gap = 1.0;
  std::size_t T = 0;  // 0 = smallest feasible
  std::size_t d = 2;
  int batch = 1;
  std::string out = "-";
};

int cmd_theorem2(const Theorem2Args& args) {
  const std::size_t T =
      args.T == 0 ? shb::min_feasible_T(args.kappa, args.C) : args.T;
  const shb::CheckReport report = shb::check_theorem2(
      args.kappa, args.C, T, args.d, args.sigma2, args.batch, args.gap);
  write_output(args.out, shb::check_report_to_json(report) + "\n");
  return report.passed() ? 0 : 1;
}

struct RaceArgs {
  double kappa = 1e4;
  double target = 1e-6;
  std::size_t horizon = 0;  // 0 = grow until both reach the target
  std::string out = "-";
};

int cmd_race(const RaceArgs& args) {
  if (!(args.kappa >= 4.0))
    throw std::invalid_argument("race: kappa must be >= 4");
  const double L = 1.0;
  const shb::QuadraticProblem problem({L, L / args.kappa}, 0.0);
  const double beta = shb::theorem_momentum(args.kappa);

  std::size_t horizon = args.horizon == 0 ? 1024 : args.horizon;
  shb::RaceResult sgd, shb_run;
  for (;;) {
    const shb::Schedule schedule = shb::constant_schedule(1.0 / L, horizon);
    sgd = shb::iterations_to_target(problem, shb::Method::Sgd, schedule, 0.0,
                                    args.target);
    shb_run = shb::iterations_to_target(problem, shb::Method::Shb, schedule,
                                        beta, args.target);
    if ((sgd.reached && shb_run.reached) || args.horizon != 0) break;
    if (horizon > (std::size_t{1} << 31))
      throw std::runtime_error("race: target unreachable within 2^31 steps");
    horizon *= 2;
  }
  std::ostringstream csv;
  csv << "kappa,t_sgd,t_shb,ratio\n";
  if (sgd.reached && shb_run.reached) {
    csv << args.kappa << ',' << sgd.iterations << ',' << shb_run.iterations
        << ','
        << static_cast<double>(sgd.iterations) /
               static_cast<double>(std::max<std::size_t>(1, shb_run.iterations))
        << '\n';
  } else {
    csv << args.kappa << ",not-reached,not-reached,nan\n";
  }
  write_output(args.out, csv.str());
  return 0;
}

struct RidgeArgs {
  std::string data_path;
  bool synthetic = false;
  std::string out_prefix = "ridge";
  std::string batches = "512,128,32,8";
  std::string seeds = "1,2,3,4,5";
  double alpha = 1e-3;
  double beta = 0.9;
  int epochs = 100;
  int features = 0;
  int threads = 1;
  std::uint64_t seed = kDefaultSeed;
};

int cmd_ridge(const RidgeArgs& args) {
  shb::SparseDataset dataset;
  if (args.synthetic) {
    dataset = shb::make_synthetic_dataset(4781, 123, 13, 14, args.seed);
  } else {
    if (args.data_path.empty())
      throw std::invalid_argument("ridge: pass --data FILE or --synthetic");
    std::ifstream in(args.data_path);
    if (!in) throw std::runtime_error("cannot open file: " + args.data_path);
    dataset = shb::parse_libsvm(in, args.features);
  }

  shb::RidgeExperimentConfig config;
  config.alpha = args.alpha;
  config.beta = args.beta;
  config.epochs = args.epochs;
  config.threads = args.threads;
  config.batch_sizes.clear();
  for (double b : parse_double_list(args.batches))
    config.batch_sizes.push_back(static_cast<int>(b));
  config.seeds = std::vector<std::uint64_t>();
  for (std::size_t s : parse_index_list(args.seeds)) config.seeds.push_back(s);

  const shb::RidgeExperimentResult result =
      shb::run_ridge_experiment(dataset, config);

  std::ofstream runs(args.out_prefix + "_runs.csv");
  if (!runs)
    throw std::runtime_error("cannot write " + args.out_prefix + "_runs.csv");
  shb::write_ridge_rows_csv(result, runs);
  std::ofstream summary(args.out_prefix + "_summary.csv");
  if (!summary)
    throw std::runtime_error("cannot write " + args.out_prefix +
                             "_summary.csv");
  shb::write_ridge_summary_csv(result, summary);
  std::cout << "f(w*) = " << result.optimum_value << "; wrote "
            << args.out_prefix << "_runs.csv and " << args.out_prefix
            << "_summary.csv\n";
  return 0;
}

struct ReportArgs {
  double kappa = 4.0, L = 1.0, C = 2.0;
  std::size_t T = 1000000;
  std::string out = "-";
};

int cmd_report(const ReportArgs& args) {
  const shb::TheoremSchedule ts =
      shb::theorem_step_decay(args.kappa, args.L, args.T, args.C);
  write_output(args.out, shb::schedule_report_to_json(ts.report) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stochastic heavy ball on quadratic objectives: exact expected-risk "
      "dynamics, Monte Carlo simulation, convergence-bound verification and "
      "the ridge regression experiment."};
  app.require_subcommand(1);

  ExactArgs exact;
  auto* exact_cmd =
      app.add_subcommand("exact", "Exact expected risk trace to CSV");
  exact_cmd->add_option("--problem", exact.problem_path, "problem JSON file")
      ->required();
  exact_cmd->add_option("--schedule", exact.schedule_path, "schedule JSON file")
      ->required();
  exact_cmd->add_option("--beta", exact.beta, "momentum in [0,1)");
  exact_cmd->add_option("--batch", exact.batch, "minibatch size M");
  exact_cmd->add_option("--w0", exact.w0_spec,
                        "initial point: value or comma list");
  exact_cmd->add_option("--out", exact.out, "output path (- for stdout)");
  exact_cmd->add_option("--stride", exact.stride, "CSV thinning stride");

  SimulateArgs sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Monte Carlo SGD/SHB replications");
  sim_cmd->add_option("--problem", sim.problem_path, "problem JSON file")
      ->required();
  sim_cmd->add_option("--schedule", sim.schedule_path, "schedule JSON file")
      ->required();
  sim_cmd->add_option("--method", sim.method, "sgd or shb")
      ->check(CLI::IsMember({"sgd", "shb"}));
  sim_cmd->add_option("--beta", sim.beta, "momentum in [0,1)");
  sim_cmd->add_option("--batch", sim.batch, "minibatch size M");
  sim_cmd->add_option("--w0", sim.w0_spec, "initial point");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--trials,--reps", sim.reps, "replication count");
  sim_cmd->add_option("--checkpoints", sim.checkpoints,
                      "comma list of iterations to record");
  sim_cmd->add_option("--threads", sim.threads, "worker cap");
  sim_cmd->add_option("--out", sim.out, "output path (- for stdout)");
  sim_cmd->add_flag("--json", sim.as_json, "emit JSON instead of CSV");

  VerifyArgs verify;
  auto* verify_cmd =
      app.add_subcommand("verify", "Run lemma/theorem property checks");
  verify_cmd->add_option("--check", verify.check,
                         "check name or 'all' (see --list in help text)");
  verify_cmd->add_option("--seed", verify.seed, "RNG seed");
  verify_cmd->add_option("--trials", verify.trials,
                         "override per-suite trial count (0 = default)");
  verify_cmd->add_option("--out", verify.out, "JSON report path (- stdout)");
  verify_cmd
      ->add_option("--rhs-scale", verify.rhs_scale,
                   "scale bound right-hand sides (failure-path test hook)")
      ->group("");  // hidden

  Theorem1Args t1;
  auto* t1_cmd = app.add_subcommand(
      "theorem1", "Worst-case SGD floor on the counterexample instance");
  t1_cmd->add_option("--kappa", t1.kappa, "condition number, >= 4");
  t1_cmd->add_option("--L", t1.L, "largest eigenvalue");
  t1_cmd->add_option("--c0", t1.c0, "initialization value");
  t1_cmd->add_option("--T", t1.horizons, "comma list of horizons");
  t1_cmd->add_option("--out", t1.out, "JSON report path");

  Theorem2Args t2;
  auto* t2_cmd = app.add_subcommand(
      "theorem2", "Convergence bound vs exact risk at the theorem schedule");
  t2_cmd->add_option("--kappa", t2.kappa, "condition number, >= 4");
  t2_cmd->add_option("--C", t2.C, "decay factor, > 1");
  t2_cmd->add_option("--T", t2.T, "horizon (0 = smallest feasible)");
  t2_cmd->add_option("--d", t2.d, "dimension");
  t2_cmd->add_option("--sigma2", t2.sigma2, "noise scale");
  t2_cmd->add_option("--batch", t2.batch, "minibatch size M");
  t2_cmd->add_option("--gap", t2.gap, "initial excess risk");
  t2_cmd->add_option("--out", t2.out, "JSON report path");

  RaceArgs race;
  auto* race_cmd =
      app.add_subcommand("race", "Iterations-to-target: SGD vs SHB");
  race_cmd->add_option("--kappa", race.kappa, "condition number, >= 4");
  race_cmd->add_option("--target", race.target, "target risk ratio in (0,1)");
  race_cmd->add_option("--horizon", race.horizon,
                       "fixed horizon (0 = grow until reached)");
  race_cmd->add_option("--out", race.out, "CSV path");

  RidgeArgs ridge;
  auto* ridge_cmd =
      app.add_subcommand("ridge", "Ridge regression grid-search experiment");
  ridge_cmd->add_option("--data", ridge.data_path, "libsvm text file");
  ridge_cmd->add_flag("--synthetic", ridge.synthetic,
                      "use the built-in synthetic dataset (no file needed)");
  ridge_cmd->add_option("--alpha", ridge.alpha, "ridge regularization");
  ridge_cmd->add_option("--batch", ridge.batches, "comma list of batch sizes");
  ridge_cmd->add_option("--epochs", ridge.epochs, "epoch count");
  ridge_cmd->add_option("--seeds", ridge.seeds, "comma list of seeds");
  ridge_cmd->add_option("--beta", ridge.beta, "heavy-ball momentum");
  ridge_cmd->add_option("--features", ridge.features,
                        "fixed feature count (0 = max index in file)");
  ridge_cmd->add_option("--threads", ridge.threads, "worker cap");
  ridge_cmd->add_option("--seed", ridge.seed, "seed for --synthetic");
  ridge_cmd->add_option("--out", ridge.out_prefix, "output CSV prefix");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand(
      "report", "Theorem schedule feasibility report as JSON");
  report_cmd->add_option("--kappa", report.kappa, "condition number, >= 4");
  report_cmd->add_option("--L", report.L, "largest eigenvalue");
  report_cmd->add_option("--T", report.T, "horizon");
  report_cmd->add_option("--C", report.C, "decay factor");
  report_cmd->add_option("--out", report.out, "JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (exact_cmd->parsed()) return cmd_exact(exact);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (t1_cmd->parsed()) return cmd_theorem1(t1);
    if (t2_cmd->parsed()) return cmd_theorem2(t2);
    if (race_cmd->parsed()) return cmd_race(race);
    if (ridge_cmd->parsed()) return cmd_ridge(ridge);
    if (report_cmd->parsed()) return cmd_report(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
