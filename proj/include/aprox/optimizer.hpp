#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "aprox/models.hpp"
#include "aprox/problems.hpp"

namespace aprox {

// alpha_k = alpha0 * k^(-beta). beta is accepted on (0, 1]; the (1/2, 1)
// window is the theory-backed range used by the sweep harness, but beta = 1
// (alpha_k = alpha0 / k) is needed for the divergence demo.
struct StepsizeSchedule {
  double alpha0 = 1.0;
  double beta = 0.6;
};

inline void validate(const StepsizeSchedule& s) {
  if (!(s.alpha0 > 0.0)) throw InvalidConfigError("alpha0 must be > 0");
  if (!(s.beta > 0.0 && s.beta <= 1.0))
    throw InvalidConfigError("beta must lie in (0, 1]");
}

inline double stepsize(const StepsizeSchedule& s, long k) {
  if (k < 1) throw ContractViolation("stepsize requires k >= 1");
  return s.alpha0 * std::pow(static_cast<double>(k), -s.beta);
}

inline Vector project(const Domain& domain, const Vector& x) {
  if (domain.type == Domain::Type::AllSpace) return x;
  const Vector d = x - domain.center;
  const double norm = d.norm();
  if (norm <= domain.radius) return x;
  return domain.center + (domain.radius / norm) * d;
}

enum class Metric { ObjectiveGap, DistanceToOpt };

inline const char* to_string(Metric m) {
  return m == Metric::ObjectiveGap ? "objective-gap" : "distance-to-opt";
}

enum class SelectRule { Final, UniformAverage, StepsizeWeightedRandom };

inline const char* to_string(SelectRule r) {
  switch (r) {
    case SelectRule::Final: return "final";
    case SelectRule::UniformAverage: return "uniform-average";
    case SelectRule::StepsizeWeightedRandom: return "stepsize-weighted-random";
  }
  return "?";
}

struct InitSpec {
  enum class Kind { Zero, Gaussian, Spectral, Explicit };
  Kind kind = Kind::Gaussian;
  double scale = 1.0;
  Vector point;  // Explicit only
};

inline const char* to_string(InitSpec::Kind k) {
  switch (k) {
    case InitSpec::Kind::Zero: return "zero";
    case InitSpec::Kind::Gaussian: return "gaussian";
    case InitSpec::Kind::Spectral: return "spectral";
    case InitSpec::Kind::Explicit: return "explicit";
  }
  return "?";
}

struct RunConfig {
  ModelKind model = ModelKind::Truncated;
  ModelOptions model_options;
  StepsizeSchedule schedule;
  long budget = 100000;
  double epsilon = 0.05;
  Metric metric = Metric::ObjectiveGap;
  long check_interval = 100;
  double divergence_threshold = 1e10;
  std::uint64_t seed = 0;
  InitSpec init;
  std::optional<Domain> domain;  // overrides the instance domain when set
  SelectRule selection = SelectRule::Final;
  long snapshot_stride = 0;  // 0 disables trajectory snapshots
};

struct RunRecord {
  long time_to_accuracy = 0;  // budget + 1 when the target was never reached
  bool diverged = false;
  std::vector<std::pair<long, double>> accuracy_trace;
  double final_metric = std::numeric_limits<double>::infinity();
  Vector selected_point;
  double guarded_fraction = 0.0;
  std::vector<long> snapshot_iterations;
  std::vector<Vector> snapshots;
  long steps_taken = 0;
};

// Test hook: called after each step with the pre-projection report.
using StepObserver = std::function<void(long k, double alpha, const Sample& s,
                                        const Vector& x_before,
                                        const StepReport& report)>;

inline double evaluate_metric(const ProblemInstance& inst, const Vector& x,
                              Metric metric) {
  if (metric == Metric::DistanceToOpt) {
    const auto d = distance_to_opt(inst, x);
    if (!d)
      throw InvalidConfigError(
          "distance-to-opt metric unavailable for this instance");
    return *d;
  }
  const double opt = inst.ground_truth ? inst.ground_truth->optimal_value : 0.0;
  return full_objective(inst, x) - opt;
}

inline Vector make_init(const ProblemInstance& inst, const InitSpec& init,
                        std::uint64_t seed) {
  switch (init.kind) {
    case InitSpec::Kind::Zero:
      return Vector::Zero(inst.dim);
    case InitSpec::Kind::Gaussian: {
      Xoshiro256 rng(mix_seed({seed, 0x1217u}));
      return init.scale * detail::normal_vector(rng, inst.dim);
    }
    case InitSpec::Kind::Spectral:
      return spectral_init(inst);
    case InitSpec::Kind::Explicit:
      if (init.point.size() != inst.dim)
        throw InvalidConfigError("explicit init has wrong dimension");
      return init.point;
  }
  throw ContractViolation("unknown init kind");
}

// The stochastic model-based iteration: sample, minimize the regularized
// model, project, track accuracy, guard against divergence. Deterministic
// given (instance, config).
inline RunRecord run(const ProblemInstance& inst, const RunConfig& config,
                     const StepObserver& observer = {}) {
  validate(config.schedule);
  if (config.budget < 1 || config.check_interval < 1 ||
      !(config.epsilon > 0.0))
    throw InvalidConfigError("budget, check_interval >= 1 and epsilon > 0");
  const Domain domain = config.domain.value_or(inst.domain);
  const auto m = static_cast<std::uint64_t>(inst.samples.size());

  Xoshiro256 rng_sample(mix_seed({config.seed, 0x5A17u}));
  Xoshiro256 rng_select(mix_seed({config.seed, 0x5E1Eu}));

  Vector x = project(domain, make_init(inst, config.init, config.seed));

  RunRecord rec;
  rec.time_to_accuracy = config.budget + 1;
  rec.selected_point = x;

  // Streaming iterate selection over x_1, x_2, ... with weights alpha_k:
  // running mean for the average, weight-proportional reservoir for the
  // stepsize-weighted random draw.
  Vector running_mean = x;
  double folded = 1.0;
  Vector reservoir = x;
  double total_weight = stepsize(config.schedule, 1);
  const auto fold_iterate = [&](const Vector& xk, long k) {
    if (config.selection == SelectRule::UniformAverage) {
      folded += 1.0;
      running_mean += (xk - running_mean) / folded;
    } else if (config.selection == SelectRule::StepsizeWeightedRandom) {
      const double w = stepsize(config.schedule, k);
      total_weight += w;
      if (rng_select.uniform01() < w / total_weight) reservoir = xk;
    }
  };

  long guarded = 0;
  bool stopped = false;
  ScalingState scaling;
  scaling.delta = config.model_options.adagrad_delta;

  for (long k = 1; k <= config.budget && !stopped; ++k) {
    const double alpha_k = config.model == ModelKind::TruncAdaGrad
                               ? config.schedule.alpha0
                               : stepsize(config.schedule, k);
    const Sample& s = inst.samples[rng_sample.below(m)];
    const StepReport report =
        model_step(inst, config.model, config.model_options, x, s, alpha_k,
                   &scaling);
    if (observer) observer(k, alpha_k, s, x, report);
    rec.steps_taken = k;
    if (report.guarded_stepsize < alpha_k) ++guarded;

    if (!report.next_point.allFinite()) {
      rec.diverged = true;
      break;
    }
    x = project(domain, report.next_point);
    if (x.norm() > config.divergence_threshold) {
      rec.diverged = true;
      break;
    }
    fold_iterate(x, k + 1);
    if (config.snapshot_stride > 0 && k % config.snapshot_stride == 0) {
      rec.snapshot_iterations.push_back(k);
      rec.snapshots.push_back(x);
    }
    if (k % config.check_interval == 0 || k == config.budget) {
      const double value = evaluate_metric(inst, x, config.metric);
      if (!std::isfinite(value)) {
        rec.diverged = true;
        break;
      }
      rec.accuracy_trace.emplace_back(k, value);
      if (value <= config.epsilon) {
        rec.time_to_accuracy = k;
        stopped = true;
      }
    }
  }

  if (rec.diverged) {
    rec.time_to_accuracy = config.budget + 1;
    rec.final_metric = std::numeric_limits<double>::infinity();
  } else {
    const double value = evaluate_metric(inst, x, config.metric);
    rec.final_metric =
        std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  }
  switch (config.selection) {
    case SelectRule::Final: rec.selected_point = x; break;
    case SelectRule::UniformAverage: rec.selected_point = running_mean; break;
    case SelectRule::StepsizeWeightedRandom: rec.selected_point = reservoir; break;
  }
  rec.guarded_fraction =
      rec.steps_taken > 0 ? static_cast<double>(guarded) / rec.steps_taken : 0.0;
  return rec;
}

// Selection rules applied to an explicit trajectory x_1..x_T (iterate j
// weighted by alpha_j for the random rule).
inline Vector select_iterate(const std::vector<Vector>& trajectory,
                             const StepsizeSchedule& schedule, SelectRule rule,
                             std::uint64_t seed) {
  if (trajectory.empty())
    throw InvalidConfigError("select_iterate needs a nonempty trajectory");
  switch (rule) {
    case SelectRule::Final:
      return trajectory.back();
    case SelectRule::UniformAverage: {
      Vector mean = Vector::Zero(trajectory.front().size());
      double n = 0.0;
      for (const Vector& x : trajectory) {
        n += 1.0;
        mean += (x - mean) / n;
      }
      return mean;
    }
    case SelectRule::StepsizeWeightedRandom: {
      double total = 0.0;
      for (std::size_t j = 0; j < trajectory.size(); ++j)
        total += stepsize(schedule, static_cast<long>(j) + 1);
      Xoshiro256 rng(mix_seed({seed, 0x5E1Eu}));
      const double u = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t j = 0; j < trajectory.size(); ++j) {
        acc += stepsize(schedule, static_cast<long>(j) + 1);
        if (u < acc) return trajectory[j];
      }
      return trajectory.back();
    }
  }
  throw ContractViolation("unknown selection rule");
}

}  // namespace aprox
