#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "aprox/optimizer.hpp"

namespace aprox {

// Generation parameters for the problem a sweep runs on.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::PhaseRetrieval;
  int n = 10;             // parameter dimension (phase retrieval, regression)
  int m = 200;            // sample count (phase retrieval, regression)
  double noise_sd = 0.0;  // regression only
  int rows = 60, cols = 80, rank = 3, rank_hat = 3;  // matrix completion

  ProblemInstance generate(std::uint64_t seed) const {
    switch (kind) {
      case ProblemKind::PhaseRetrieval:
        return gen_phase_retrieval(n, m, seed);
      case ProblemKind::MatrixCompletion:
        return gen_matrix_completion(rows, cols, rank, rank_hat, seed);
      case ProblemKind::LinearRegression:
        return gen_linear_regression(n, m, noise_sd, seed);
      case ProblemKind::ExponentialDemo:
        return gen_exponential_demo();
    }
    throw ContractViolation("unknown problem kind");
  }
};

struct GridSpec {
  int count = 7;
  double min = 1e-1;
  double max = 1e3;
};

inline std::vector<double> make_grid(const GridSpec& g) {
  if (g.count < 1 || !(g.min > 0.0) || (g.count > 1 && !(g.min < g.max)))
    throw InvalidConfigError("stepsize grid must be positive and increasing");
  std::vector<double> out;
  out.reserve(g.count);
  if (g.count == 1) {
    out.push_back(g.min);
    return out;
  }
  const double lo = std::log(g.min), hi = std::log(g.max);
  for (int i = 0; i < g.count; ++i)
    out.push_back(std::exp(lo + (hi - lo) * i / (g.count - 1)));
  return out;
}

struct SweepConfig {
  GridSpec stepsize_grid;
  double beta = 0.6;
  std::vector<ModelKind> models{ModelKind::Truncated, ModelKind::Subgradient};
  int trials = 10;
  double epsilon = 0.05;
  long budget = 100000;
  std::uint64_t base_seed = 0;
  ProblemSpec problem;
  bool shared_data = false;  // one dataset per cell instead of per trial
  long check_interval = 100;
};

struct TrialResult {
  long time_to_accuracy = 0;
  bool diverged = false;
  double final_metric = 0.0;
};

struct CellResult {
  ModelKind model = ModelKind::Truncated;
  double alpha0 = 0.0;
  std::vector<TrialResult> trials;
  long median = 0, q05 = 0, q95 = 0;
  double converged_fraction = 0.0;
  double diverged_fraction = 0.0;
  double timed_out_fraction = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<double> grid;
  std::vector<CellResult> cells;  // model-major, alpha-minor order
};

struct Summary {
  long median = 0, q05 = 0, q95 = 0;
};

// Order statistics: lower median, endpoints at ranks ceil(0.05 T) and
// ceil(0.95 T), clamped to [1, T].
inline Summary summarize(std::vector<long> times) {
  if (times.empty()) throw InvalidConfigError("summarize needs >= 1 time");
  std::sort(times.begin(), times.end());
  const auto t = static_cast<long>(times.size());
  const auto rank = [&](double q) {
    const auto r = static_cast<long>(std::ceil(q * static_cast<double>(t)));
    return std::clamp(r, 1L, t);
  };
  Summary s;
  s.median = times[rank(0.5) - 1];
  s.q05 = times[rank(0.05) - 1];
  s.q95 = times[rank(0.95) - 1];
  return s;
}

// Seed derivation: pure function of (base_seed, model index, alpha index,
// trial index), so any cell reproduces in isolation.
inline std::uint64_t derive_trial_seed(std::uint64_t base, int model_idx,
                                       int alpha_idx, int trial_idx) {
  return mix_seed({base, static_cast<std::uint64_t>(model_idx),
                   static_cast<std::uint64_t>(alpha_idx),
                   static_cast<std::uint64_t>(trial_idx)});
}
inline std::uint64_t data_seed_of(std::uint64_t master) {
  return mix_seed({master, 0xD0u});
}
inline std::uint64_t run_seed_of(std::uint64_t master) {
  return mix_seed({master, 0x50u});
}

inline TrialResult run_one_trial(const ProblemInstance& inst,
                                 const SweepConfig& config, ModelKind model,
                                 double alpha0, std::uint64_t master_seed) {
  RunConfig rc;
  rc.model = model;
  rc.schedule = StepsizeSchedule{alpha0, config.beta};
  rc.budget = config.budget;
  rc.epsilon = config.epsilon;
  rc.check_interval = config.check_interval;
  rc.seed = run_seed_of(master_seed);
  const RunRecord rec = run(inst, rc);
  return TrialResult{rec.time_to_accuracy, rec.diverged, rec.final_metric};
}

// Full stepsize-robustness sweep. Trials are independent tasks; the result
// is a deterministic fold in (model, alpha, trial) order, so parallel and
// serial executions agree bit for bit. threads = 0 uses all cores.
inline SweepResult sweep(const SweepConfig& config, unsigned threads = 0) {
  if (config.trials < 1) throw InvalidConfigError("trials must be >= 1");
  if (config.models.empty()) throw InvalidConfigError("no models given");
  SweepResult result;
  result.config = config;
  result.grid = make_grid(config.stepsize_grid);

  const int n_models = static_cast<int>(config.models.size());
  const int n_alphas = static_cast<int>(result.grid.size());
  const int n_trials = config.trials;
  const long total = static_cast<long>(n_models) * n_alphas * n_trials;
  std::vector<TrialResult> slots(total);

  const auto work = [&](long task) {
    const int ti = static_cast<int>(task % n_trials);
    const int ai = static_cast<int>((task / n_trials) % n_alphas);
    const int mi = static_cast<int>(task / (static_cast<long>(n_trials) * n_alphas));
    const std::uint64_t master =
        derive_trial_seed(config.base_seed, mi, ai, ti);
    const std::uint64_t dseed =
        config.shared_data
            ? mix_seed({config.base_seed, 0xD0u, static_cast<std::uint64_t>(mi),
                        static_cast<std::uint64_t>(ai)})
            : data_seed_of(master);
    const ProblemInstance inst = config.problem.generate(dseed);
    TrialResult tr;
    try {
      tr = run_one_trial(inst, config, config.models[mi], result.grid[ai],
                         master);
    } catch (const std::exception&) {
      // Individual run failures count as diverged, never abort the sweep.
      tr.time_to_accuracy = config.budget + 1;
      tr.diverged = true;
      tr.final_metric = std::numeric_limits<double>::infinity();
    }
    slots[task] = tr;
  };

  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  if (workers == 1) {
    for (long t = 0; t < total; ++t) work(t);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (long t = next.fetch_add(1); t < total; t = next.fetch_add(1))
          work(t);
      });
    for (auto& th : pool) th.join();
  }

  for (int mi = 0; mi < n_models; ++mi)
    for (int ai = 0; ai < n_alphas; ++ai) {
      CellResult cell;
      cell.model = config.models[mi];
      cell.alpha0 = result.grid[ai];
      std::vector<long> times;
      int converged = 0, diverged = 0;
      for (int ti = 0; ti < n_trials; ++ti) {
        const TrialResult& tr =
            slots[(static_cast<long>(mi) * n_alphas + ai) * n_trials + ti];
        cell.trials.push_back(tr);
        times.push_back(tr.time_to_accuracy);
        converged += tr.time_to_accuracy <= config.budget;
        diverged += tr.diverged;
      }
      const Summary s = summarize(times);
      cell.median = s.median;
      cell.q05 = s.q05;
      cell.q95 = s.q95;
      cell.converged_fraction = static_cast<double>(converged) / n_trials;
      cell.diverged_fraction = static_cast<double>(diverged) / n_trials;
      cell.timed_out_fraction =
          1.0 - cell.converged_fraction - cell.diverged_fraction;
      result.cells.push_back(std::move(cell));
    }
  return result;
}

}  // namespace aprox
