// Command-line front end: single runs, stepsize-robustness sweeps, Moreau
// stationarity traces, and the subgradient-vs-truncated divergence demo.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "aprox/harness.hpp"
#include "aprox/moreau.hpp"
#include "aprox/optimizer.hpp"
#include "aprox/serialize.hpp"

namespace {

using namespace aprox;

// Inline problem specs: kind[:key=value,...], e.g.
//   phase-retrieval:n=50,m=1000
//   matrix-completion:rows=60,cols=80,r=3,rhat=6
//   linear-regression:n=5,m=200,noise=0.1
//   exponential-demo
ProblemSpec parse_problem_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind_token = text.substr(0, colon);
  const auto kind = problem_kind_from_string(kind_token);
  if (!kind)
    throw InvalidConfigError("unknown problem kind: " + kind_token);
  ProblemSpec spec;
  spec.kind = *kind;
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item =
        rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                    : comma - pos);
    pos = comma == std::string::npos ? rest.size() : comma + 1;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InvalidConfigError("bad problem parameter: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") spec.n = std::stoi(value);
    else if (key == "m") spec.m = std::stoi(value);
    else if (key == "noise") spec.noise_sd = std::stod(value);
    else if (key == "rows") spec.rows = std::stoi(value);
    else if (key == "cols") spec.cols = std::stoi(value);
    else if (key == "r") spec.rank = std::stoi(value);
    else if (key == "rhat") spec.rank_hat = std::stoi(value);
    else throw InvalidConfigError("unknown problem parameter: " + key);
  }
  return spec;
}

ProblemInstance load_or_generate(const std::string& problem_arg,
                                 std::uint64_t master_seed) {
  if (std::filesystem::exists(problem_arg))
    return instance_from_json(load_json_file(problem_arg));
  return parse_problem_spec(problem_arg).generate(data_seed_of(master_seed));
}

unsigned threads_from_env() {
  const char* env = std::getenv("APROX_THREADS");
  if (env == nullptr) return 0;
  const long v = std::strtol(env, nullptr, 10);
  return v <= 0 ? 0 : static_cast<unsigned>(v);
}

int cmd_run(const std::string& problem_arg, const std::string& model_token,
            double alpha0, double beta, double epsilon, long budget,
            std::uint64_t seed, const std::string& init_token,
            const std::string& domain_token, const std::string& select_token,
            long snapshot_stride, const std::string& out_path) {
  const auto model = model_kind_from_string(model_token);
  if (!model) throw InvalidConfigError("unknown model: " + model_token);

  ProblemInstance inst = load_or_generate(problem_arg, seed);

  RunConfig config;
  config.model = *model;
  config.schedule = StepsizeSchedule{alpha0, beta};
  config.epsilon = epsilon;
  config.budget = budget;
  config.seed = run_seed_of(seed);
  config.snapshot_stride = snapshot_stride;

  if (init_token == "zero") config.init.kind = InitSpec::Kind::Zero;
  else if (init_token == "gaussian") config.init.kind = InitSpec::Kind::Gaussian;
  else if (init_token == "spectral") config.init.kind = InitSpec::Kind::Spectral;
  else throw InvalidConfigError("unknown init: " + init_token);

  if (select_token == "final") config.selection = SelectRule::Final;
  else if (select_token == "average")
    config.selection = SelectRule::UniformAverage;
  else if (select_token == "weighted-random")
    config.selection = SelectRule::StepsizeWeightedRandom;
  else throw InvalidConfigError("unknown selection rule: " + select_token);

  if (!domain_token.empty()) {
    if (domain_token.rfind("ball:", 0) != 0)
      throw InvalidConfigError("unknown domain: " + domain_token +
                               " (expected ball:<radius>)");
    const double radius = std::stod(domain_token.substr(5));
    // Ball centered at the initial point; pin the init so the echo is exact.
    const Vector x0 = make_init(inst, config.init, config.seed);
    config.init = InitSpec{InitSpec::Kind::Explicit, 1.0, x0};
    config.domain = Domain::ball(x0, radius);
  }

  const RunRecord record = run(inst, config);
  save_text_file(out_path, to_json(record, config).dump(2) + "\n");
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
  const SweepConfig config = sweep_config_from_json(load_json_file(config_path));
  const SweepResult result = sweep(config, threads_from_env());
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  write_results(result, out_dir + "/trials.csv", ResultFormat::Csv);
  write_results(result, out_dir + "/sweep.json", ResultFormat::Json);
  return 0;
}

int cmd_moreau_trace(const std::string& problem_path,
                     const std::string& trajectory_path, double lambda,
                     const std::string& out_path) {
  const ProblemInstance inst = instance_from_json(load_json_file(problem_path));
  const Trajectory traj =
      trajectory_from_run_json(load_json_file(trajectory_path));
  EnvelopeConfig config;
  config.lambda = lambda;
  const StationarityTrace trace = stationarity_trace(inst, traj, config);
  json out;
  out["lambda"] = lambda;
  out["iterations"] = trace.iterations;
  out["grad_norms"] = trace.grad_norms;
  out["partial_sums"] = trace.partial_sums;
  save_text_file(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_divergence_demo(double x1, const std::string& out_path) {
  const ProblemInstance inst = gen_exponential_demo();
  RunConfig config;
  config.schedule = StepsizeSchedule{1.0, 1.0};  // alpha_k = 1/k
  config.metric = Metric::DistanceToOpt;          // |x| for this instance
  config.epsilon = 0.1;
  config.budget = 1000;
  config.check_interval = 1;
  config.snapshot_stride = 1;
  config.init = InitSpec{InitSpec::Kind::Explicit, 1.0,
                         Vector::Constant(1, x1)};
  json out;
  config.model = ModelKind::Subgradient;
  out["subgradient"] = to_json(run(inst, config), config);
  config.model = ModelKind::Truncated;
  out["truncated"] = to_json(run(inst, config), config);
  save_text_file(out_path, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aprox: model-based stochastic optimization benchmark\n"
      "Seeds: --seed s derives the dataset stream and the sampling stream\n"
      "independently, matching the sweep harness's per-trial derivation."};
  app.require_subcommand(1);

  std::string problem, model, init = "gaussian", domain, select = "final";
  std::string out, config_path, trajectory;
  double alpha0 = 1.0, beta = 0.6, epsilon = 0.05, lambda = 0.0, x1 = 10.0;
  long budget = 100000, snapshot_stride = 0;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "single optimization run -> JSON");
  run_cmd->add_option("--problem", problem,
                      "inline spec (kind:key=value,...) or instance JSON path")
      ->required();
  run_cmd->add_option("--model", model,
                      "subgradient|truncated|prox-linear|full-proximal|"
                      "trunc-adagrad")
      ->required();
  run_cmd->add_option("--alpha0", alpha0, "initial stepsize");
  run_cmd->add_option("--beta", beta, "stepsize decay exponent");
  run_cmd->add_option("--epsilon", epsilon, "accuracy target");
  run_cmd->add_option("--budget", budget, "iteration budget");
  run_cmd->add_option("--seed", seed, "master seed");
  run_cmd->add_option("--init", init, "spectral|zero|gaussian");
  run_cmd->add_option("--domain", domain,
                      "ball:<radius> centered at the initial point");
  run_cmd->add_option("--select", select, "final|average|weighted-random");
  run_cmd->add_option("--snapshot-stride", snapshot_stride,
                      "store the iterate every k steps (0 = off)");
  run_cmd->add_option("--out", out, "output JSON path")->required();

  auto* sweep_cmd =
      app.add_subcommand("sweep", "stepsize-robustness sweep -> CSV + JSON");
  sweep_cmd->add_option("--config", config_path, "sweep config JSON path")
      ->required();
  sweep_cmd->add_option("--out", out, "output directory")->required();

  auto* moreau_cmd = app.add_subcommand(
      "moreau-trace", "near-stationarity trace along stored snapshots");
  moreau_cmd->add_option("--problem", problem, "instance JSON path")
      ->required();
  moreau_cmd->add_option("--trajectory", trajectory,
                         "run JSON with snapshots (see run --snapshot-stride)")
      ->required();
  moreau_cmd->add_option("--lambda", lambda, "envelope parameter")->required();
  moreau_cmd->add_option("--out", out, "output JSON path")->required();

  auto* demo_cmd = app.add_subcommand(
      "divergence-demo",
      "subgradient vs truncated on F(x) = e^x + e^-x with alpha_k = 1/k");
  demo_cmd->add_option("--x1", x1, "initial point");
  demo_cmd->add_option("--out", out, "output JSON path")->required();

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed())
      return cmd_run(problem, model, alpha0, beta, epsilon, budget, seed, init,
                     domain, select, snapshot_stride, out);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out);
    if (moreau_cmd->parsed())
      return cmd_moreau_trace(problem, trajectory, lambda, out);
    if (demo_cmd->parsed()) return cmd_divergence_demo(x1, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const aprox::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
