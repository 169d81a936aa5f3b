#pragma once

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "aprox/harness.hpp"
#include "aprox/moreau.hpp"
#include "aprox/optimizer.hpp"
#include "aprox/problems.hpp"

namespace aprox {

using json = nlohmann::json;

namespace detail {

inline json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vec_from_json(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (const auto& e : a) v[i++] = e.get<double>();
  return v;
}

// 17 significant digits, locale independent; round-trips every finite double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Infinite metrics (diverged runs) map to JSON null and back.
inline json metric_to_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}
inline double metric_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

template <typename T>
T parse_enum(const json& j, const char* what,
             std::optional<T> (*parse)(std::string_view)) {
  const auto s = j.get<std::string>();
  const auto v = parse(s);
  if (!v) throw InvalidConfigError(std::string("unknown ") + what + ": " + s);
  return *v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Problem instances

inline json to_json(const Domain& d) {
  if (d.type == Domain::Type::AllSpace) return json{{"type", "all-space"}};
  return json{{"type", "ball"},
              {"center", detail::vec_to_json(d.center)},
              {"radius", d.radius}};
}

inline Domain domain_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "all-space") return Domain::all_space();
  if (type == "ball")
    return Domain::ball(detail::vec_from_json(j.at("center")),
                        j.at("radius").get<double>());
  throw InvalidConfigError("unknown domain type: " + type);
}

inline json to_json(const ProblemInstance& inst) {
  json j;
  j["kind"] = to_string(inst.kind);
  j["dim"] = inst.dim;
  j["seed"] = inst.seed;
  j["interpolating"] = inst.interpolating;
  j["domain"] = to_json(inst.domain);
  if (inst.ground_truth) {
    const GroundTruth& gt = *inst.ground_truth;
    j["ground_truth"] = {
        {"point", detail::vec_to_json(gt.point)},
        {"symmetry", gt.symmetry == Symmetry::SignFlip ? "sign-flip" : "none"},
        {"optimal_value", gt.optimal_value}};
  }
  if (inst.kind == ProblemKind::MatrixCompletion)
    j["factors"] = {{"rows", inst.factors.rows},
                    {"cols", inst.factors.cols},
                    {"rank_hat", inst.factors.rank_hat}};
  json samples = json::array();
  for (const Sample& s : inst.samples) {
    switch (inst.kind) {
      case ProblemKind::PhaseRetrieval: {
        const auto& ps = std::get<PhaseSample>(s);
        samples.push_back({{"a", detail::vec_to_json(ps.a)}, {"b", ps.b}});
        break;
      }
      case ProblemKind::MatrixCompletion: {
        const auto& es = std::get<EntrySample>(s);
        samples.push_back({{"i", es.row}, {"j", es.col}, {"m", es.value}});
        break;
      }
      case ProblemKind::LinearRegression: {
        const auto& rs = std::get<RegressionSample>(s);
        samples.push_back({{"a", detail::vec_to_json(rs.a)}, {"b", rs.b}});
        break;
      }
      case ProblemKind::ExponentialDemo:
        samples.push_back(json::object());
        break;
    }
  }
  j["samples"] = std::move(samples);
  return j;
}

inline ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  inst.kind =
      detail::parse_enum(j.at("kind"), "problem kind", &problem_kind_from_string);
  inst.dim = j.at("dim").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.interpolating = j.at("interpolating").get<bool>();
  inst.domain = domain_from_json(j.at("domain"));
  if (j.contains("ground_truth")) {
    const json& g = j.at("ground_truth");
    GroundTruth gt;
    gt.point = detail::vec_from_json(g.at("point"));
    gt.symmetry = g.at("symmetry").get<std::string>() == "sign-flip"
                      ? Symmetry::SignFlip
                      : Symmetry::None;
    gt.optimal_value = g.at("optimal_value").get<double>();
    inst.ground_truth = std::move(gt);
  }
  if (j.contains("factors")) {
    const json& f = j.at("factors");
    inst.factors = FactorShape{f.at("rows").get<int>(), f.at("cols").get<int>(),
                               f.at("rank_hat").get<int>()};
  }
  for (const json& s : j.at("samples")) {
    switch (inst.kind) {
      case ProblemKind::PhaseRetrieval:
        inst.samples.emplace_back(PhaseSample{
            detail::vec_from_json(s.at("a")), s.at("b").get<double>()});
        break;
      case ProblemKind::MatrixCompletion:
        inst.samples.emplace_back(EntrySample{s.at("i").get<int>(),
                                              s.at("j").get<int>(),
                                              s.at("m").get<double>()});
        break;
      case ProblemKind::LinearRegression:
        inst.samples.emplace_back(RegressionSample{
            detail::vec_from_json(s.at("a")), s.at("b").get<double>()});
        break;
      case ProblemKind::ExponentialDemo:
        inst.samples.emplace_back(UnitSample{});
        break;
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Run configs and records

inline json to_json(const RunConfig& c) {
  json j;
  j["model"] = to_string(c.model);
  j["adagrad_delta"] = c.model_options.adagrad_delta;
  j["alpha0"] = c.schedule.alpha0;
  j["beta"] = c.schedule.beta;
  j["budget"] = c.budget;
  j["epsilon"] = c.epsilon;
  j["metric"] = to_string(c.metric);
  j["check_interval"] = c.check_interval;
  j["divergence_threshold"] = c.divergence_threshold;
  j["seed"] = c.seed;
  j["init"] = {{"kind", to_string(c.init.kind)}, {"scale", c.init.scale}};
  if (c.init.kind == InitSpec::Kind::Explicit)
    j["init"]["point"] = detail::vec_to_json(c.init.point);
  j["domain"] = c.domain ? to_json(*c.domain) : json(nullptr);
  j["selection"] = to_string(c.selection);
  j["snapshot_stride"] = c.snapshot_stride;
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.model = detail::parse_enum(j.at("model"), "model", &model_kind_from_string);
  c.model_options.adagrad_delta = j.at("adagrad_delta").get<double>();
  c.schedule = StepsizeSchedule{j.at("alpha0").get<double>(),
                                j.at("beta").get<double>()};
  c.budget = j.at("budget").get<long>();
  c.epsilon = j.at("epsilon").get<double>();
  c.metric = j.at("metric").get<std::string>() == "distance-to-opt"
                 ? Metric::DistanceToOpt
                 : Metric::ObjectiveGap;
  c.check_interval = j.at("check_interval").get<long>();
  c.divergence_threshold = j.at("divergence_threshold").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const json& init = j.at("init");
  const auto kind = init.at("kind").get<std::string>();
  if (kind == "zero") c.init.kind = InitSpec::Kind::Zero;
  else if (kind == "gaussian") c.init.kind = InitSpec::Kind::Gaussian;
  else if (kind == "spectral") c.init.kind = InitSpec::Kind::Spectral;
  else if (kind == "explicit") c.init.kind = InitSpec::Kind::Explicit;
  else throw InvalidConfigError("unknown init kind: " + kind);
  c.init.scale = init.at("scale").get<double>();
  if (init.contains("point")) c.init.point = detail::vec_from_json(init["point"]);
  if (!j.at("domain").is_null()) c.domain = domain_from_json(j.at("domain"));
  const auto sel = j.at("selection").get<std::string>();
  if (sel == "final") c.selection = SelectRule::Final;
  else if (sel == "uniform-average") c.selection = SelectRule::UniformAverage;
  else if (sel == "stepsize-weighted-random")
    c.selection = SelectRule::StepsizeWeightedRandom;
  else throw InvalidConfigError("unknown selection rule: " + sel);
  c.snapshot_stride = j.at("snapshot_stride").get<long>();
  return c;
}

inline json to_json(const RunRecord& r, const RunConfig& config) {
  json j;
  j["config"] = to_json(config);
  j["time_to_accuracy"] = r.time_to_accuracy;
  j["diverged"] = r.diverged;
  json trace = json::array();
  for (const auto& [k, v] : r.accuracy_trace)
    trace.push_back(json::array({k, detail::metric_to_json(v)}));
  j["accuracy_trace"] = std::move(trace);
  j["final_metric"] = detail::metric_to_json(r.final_metric);
  j["selected_point"] = detail::vec_to_json(r.selected_point);
  j["guarded_fraction"] = r.guarded_fraction;
  j["steps_taken"] = r.steps_taken;
  json snaps;
  snaps["iterations"] = r.snapshot_iterations;
  json pts = json::array();
  for (const Vector& p : r.snapshots) pts.push_back(detail::vec_to_json(p));
  snaps["points"] = std::move(pts);
  j["snapshots"] = std::move(snaps);
  return j;
}

inline RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.time_to_accuracy = j.at("time_to_accuracy").get<long>();
  r.diverged = j.at("diverged").get<bool>();
  for (const json& e : j.at("accuracy_trace"))
    r.accuracy_trace.emplace_back(e.at(0).get<long>(),
                                  detail::metric_from_json(e.at(1)));
  r.final_metric = detail::metric_from_json(j.at("final_metric"));
  r.selected_point = detail::vec_from_json(j.at("selected_point"));
  r.guarded_fraction = j.at("guarded_fraction").get<double>();
  r.steps_taken = j.at("steps_taken").get<long>();
  const json& snaps = j.at("snapshots");
  r.snapshot_iterations = snaps.at("iterations").get<std::vector<long>>();
  for (const json& p : snaps.at("points"))
    r.snapshots.push_back(detail::vec_from_json(p));
  return r;
}

// Trajectory view of a serialized run (snapshots + schedule echo).
inline Trajectory trajectory_from_run_json(const json& j) {
  Trajectory t;
  const json& c = j.at("config");
  t.schedule = StepsizeSchedule{c.at("alpha0").get<double>(),
                                c.at("beta").get<double>()};
  const json& snaps = j.at("snapshots");
  t.iterations = snaps.at("iterations").get<std::vector<long>>();
  for (const json& p : snaps.at("points"))
    t.points.push_back(detail::vec_from_json(p));
  return t;
}

// ---------------------------------------------------------------------------
// Sweep configs and results

inline json to_json(const ProblemSpec& p) {
  json j;
  j["kind"] = to_string(p.kind);
  switch (p.kind) {
    case ProblemKind::PhaseRetrieval:
      j["n"] = p.n;
      j["m"] = p.m;
      break;
    case ProblemKind::LinearRegression:
      j["n"] = p.n;
      j["m"] = p.m;
      j["noise_sd"] = p.noise_sd;
      break;
    case ProblemKind::MatrixCompletion:
      j["rows"] = p.rows;
      j["cols"] = p.cols;
      j["rank"] = p.rank;
      j["rank_hat"] = p.rank_hat;
      break;
    case ProblemKind::ExponentialDemo:
      break;
  }
  return j;
}

inline ProblemSpec problem_spec_from_json(const json& j) {
  ProblemSpec p;
  p.kind =
      detail::parse_enum(j.at("kind"), "problem kind", &problem_kind_from_string);
  switch (p.kind) {
    case ProblemKind::PhaseRetrieval:
      p.n = j.at("n").get<int>();
      p.m = j.at("m").get<int>();
      break;
    case ProblemKind::LinearRegression:
      p.n = j.at("n").get<int>();
      p.m = j.at("m").get<int>();
      p.noise_sd = j.value("noise_sd", 0.0);
      break;
    case ProblemKind::MatrixCompletion:
      p.rows = j.at("rows").get<int>();
      p.cols = j.at("cols").get<int>();
      p.rank = j.at("rank").get<int>();
      p.rank_hat = j.at("rank_hat").get<int>();
      break;
    case ProblemKind::ExponentialDemo:
      break;
  }
  return p;
}

inline json to_json(const SweepConfig& c) {
  json j;
  j["stepsize_grid"] = {{"count", c.stepsize_grid.count},
                        {"min", c.stepsize_grid.min},
                        {"max", c.stepsize_grid.max}};
  j["beta"] = c.beta;
  json models = json::array();
  for (ModelKind m : c.models) models.push_back(to_string(m));
  j["models"] = std::move(models);
  j["trials"] = c.trials;
  j["epsilon"] = c.epsilon;
  j["budget"] = c.budget;
  j["base_seed"] = c.base_seed;
  j["problem"] = to_json(c.problem);
  j["shared_data"] = c.shared_data;
  j["check_interval"] = c.check_interval;
  return j;
}

inline SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  const json& g = j.at("stepsize_grid");
  c.stepsize_grid = GridSpec{g.at("count").get<int>(), g.at("min").get<double>(),
                             g.at("max").get<double>()};
  c.beta = j.at("beta").get<double>();
  c.models.clear();
  for (const json& m : j.at("models"))
    c.models.push_back(detail::parse_enum(m, "model", &model_kind_from_string));
  c.trials = j.at("trials").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.budget = j.at("budget").get<long>();
  c.base_seed = j.at("base_seed").get<std::uint64_t>();
  c.problem = problem_spec_from_json(j.at("problem"));
  c.shared_data = j.value("shared_data", false);
  c.check_interval = j.value("check_interval", 100L);
  return c;
}

inline json to_json(const SweepResult& r) {
  json j;
  j["config"] = to_json(r.config);
  j["grid"] = r.grid;
  json cells = json::array();
  for (const CellResult& cell : r.cells) {
    json jc;
    jc["model"] = to_string(cell.model);
    jc["alpha0"] = cell.alpha0;
    jc["median"] = cell.median;
    jc["q05"] = cell.q05;
    jc["q95"] = cell.q95;
    jc["converged_fraction"] = cell.converged_fraction;
    jc["diverged_fraction"] = cell.diverged_fraction;
    jc["timed_out_fraction"] = cell.timed_out_fraction;
    json trials = json::array();
    for (std::size_t t = 0; t < cell.trials.size(); ++t) {
      const TrialResult& tr = cell.trials[t];
      trials.push_back({{"trial", t},
                        {"time_to_accuracy", tr.time_to_accuracy},
                        {"diverged", tr.diverged},
                        {"final_metric", detail::metric_to_json(tr.final_metric)}});
    }
    jc["trials"] = std::move(trials);
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j;
}

inline SweepResult sweep_result_from_json(const json& j) {
  SweepResult r;
  r.config = sweep_config_from_json(j.at("config"));
  r.grid = j.at("grid").get<std::vector<double>>();
  for (const json& jc : j.at("cells")) {
    CellResult cell;
    cell.model =
        detail::parse_enum(jc.at("model"), "model", &model_kind_from_string);
    cell.alpha0 = jc.at("alpha0").get<double>();
    cell.median = jc.at("median").get<long>();
    cell.q05 = jc.at("q05").get<long>();
    cell.q95 = jc.at("q95").get<long>();
    cell.converged_fraction = jc.at("converged_fraction").get<double>();
    cell.diverged_fraction = jc.at("diverged_fraction").get<double>();
    cell.timed_out_fraction = jc.at("timed_out_fraction").get<double>();
    for (const json& jt : jc.at("trials"))
      cell.trials.push_back(TrialResult{
          jt.at("time_to_accuracy").get<long>(), jt.at("diverged").get<bool>(),
          detail::metric_from_json(jt.at("final_metric"))});
    r.cells.push_back(std::move(cell));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Files

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json_file(const std::string& path) {
  const std::string text = load_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

enum class ResultFormat { Csv, Json };

inline std::string summary_path_for(const std::string& trials_path) {
  const std::string suffix = ".csv";
  if (trials_path.size() > suffix.size() &&
      trials_path.compare(trials_path.size() - suffix.size(), suffix.size(),
                          suffix) == 0)
    return trials_path.substr(0, trials_path.size() - suffix.size()) +
           "_summary.csv";
  return trials_path + "_summary.csv";
}

// CSV: one row per trial at `path`, plus a companion summary CSV next to it.
// JSON: the full SweepResult at `path`.
inline void write_results(const SweepResult& result, const std::string& path,
                          ResultFormat format) {
  if (format == ResultFormat::Json) {
    save_text_file(path, to_json(result).dump(2) + "\n");
    return;
  }
  const auto fd = detail::format_double;
  std::string trials =
      "model,alpha0,beta,epsilon,budget,trial,time_to_accuracy,diverged,"
      "final_metric\n";
  for (const CellResult& cell : result.cells)
    for (std::size_t t = 0; t < cell.trials.size(); ++t) {
      const TrialResult& tr = cell.trials[t];
      trials += std::string(to_string(cell.model)) + "," + fd(cell.alpha0) +
                "," + fd(result.config.beta) + "," + fd(result.config.epsilon) +
                "," + std::to_string(result.config.budget) + "," +
                std::to_string(t) + "," + std::to_string(tr.time_to_accuracy) +
                "," + (tr.diverged ? "1" : "0") + "," + fd(tr.final_metric) +
                "\n";
    }
  save_text_file(path, trials);

  std::string summary = "model,alpha0,median,q05,q95,converged_fraction\n";
  for (const CellResult& cell : result.cells)
    summary += std::string(to_string(cell.model)) + "," + fd(cell.alpha0) +
               "," + std::to_string(cell.median) + "," +
               std::to_string(cell.q05) + "," + std::to_string(cell.q95) +
               "," + fd(cell.converged_fraction) + "\n";
  save_text_file(summary_path_for(path), summary);
}

}  // namespace aprox
