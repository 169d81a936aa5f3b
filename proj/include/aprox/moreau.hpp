#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "aprox/optimizer.hpp"
#include "aprox/problems.hpp"

namespace aprox {

struct EnvelopeConfig {
  double lambda = 0.0;           // must exceed the mean weak-convexity constant
  double inner_tolerance = 1e-9;  // stop when the inner step norm drops below
  long inner_budget = 100000;
};

inline double default_lambda(const ProblemInstance& inst) {
  return 2.0 * std::max(mean_weak_convexity(inst), 1.0);
}

struct EnvelopePoint {
  Vector query;
  Vector prox;           // x^lambda
  double envelope_value = 0.0;  // F_lambda(x)
  Vector grad;           // lambda (x - x^lambda)
  long inner_iterations = 0;
  bool converged = false;
};

// Minimizes the (lambda - rho_bar)-strongly convex auxiliary objective
// G(y) = F(y) + (lambda/2)||y - x||^2 by deterministic full-batch descent:
// kink-convention subgradient steps with an adaptive Armijo line search
// (carried stepsize, doubled after success), initial step
// 1/(lambda - rho_bar + max(rho_bar, 1)). When the raw direction fails the
// line search, retries the minimal-norm combination of the last two
// subgradients, which breaks the two-branch zigzag near kinks. Monotone by
// construction, so G(y_out) <= G(x) always holds.
inline EnvelopePoint prox_point(const ProblemInstance& inst, const Vector& x,
                                const EnvelopeConfig& config) {
  detail::check_dim(inst, x);
  const double rho_bar = mean_weak_convexity(inst);
  const double lambda = config.lambda;
  if (!(lambda > rho_bar))
    throw InvalidConfigError(
        "envelope parameter lambda must exceed the mean weak-convexity "
        "constant");
  const Domain& domain = inst.domain;

  const auto g_value = [&](const Vector& y) {
    return full_objective(inst, y) + 0.5 * lambda * (y - x).squaredNorm();
  };
  Vector gsum(inst.dim), gtmp(inst.dim);
  const auto g_subgrad = [&](const Vector& y, Vector& out) {
    gsum.setZero();
    for (const Sample& s : inst.samples) {
      subgradient_into(inst, y, s, gtmp);
      gsum += gtmp;
    }
    out = gsum / static_cast<double>(inst.samples.size()) + lambda * (y - x);
  };

  Vector y = project(domain, x);
  double gy = g_value(y);
  const double g_at_query = gy;

  const double eta0 = 1.0 / (lambda - rho_bar + std::max(rho_bar, 1.0));
  double eta = eta0;
  Vector grad(inst.dim), grad_prev(inst.dim), trial(inst.dim), dir(inst.dim);
  bool have_prev = false;

  EnvelopePoint out;
  out.query = x;

  long it = 0;
  for (; it < config.inner_budget; ++it) {
    g_subgrad(y, grad);
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 == 0.0) {
      out.converged = true;
      break;
    }

    // Armijo backtracking along -d; projected form of the sufficient
    // decrease test.
    const auto search = [&](const Vector& d, double& step_norm) -> bool {
      double e = eta;
      for (int half = 0; half < 60; ++half) {
        trial = project(domain, y - e * d);
        const double decrease_ref = (trial - y).squaredNorm() / e;
        const double gt_val = g_value(trial);
        if (gt_val <= gy - 1e-4 * decrease_ref && gt_val < gy) {
          step_norm = (trial - y).norm();
          y.swap(trial);
          gy = gt_val;
          eta = std::min(e * 2.0, 1e6 * eta0);
          return true;
        }
        e *= 0.5;
      }
      return false;
    };

    double step_norm = 0.0;
    bool moved = search(grad, step_norm);
    if (!moved && have_prev) {
      const Vector diff = grad - grad_prev;
      const double dd = diff.squaredNorm();
      if (dd > 0.0) {
        const double theta =
            std::clamp(grad.dot(diff) / dd, 0.0, 1.0);
        dir = (1.0 - theta) * grad + theta * grad_prev;
        if (dir.squaredNorm() > 0.0) moved = search(dir, step_norm);
      }
    }
    grad_prev = grad;
    have_prev = true;
    if (!moved) {
      ++it;
      break;  // no descent along either direction: numerically stalled
    }
    if (step_norm < config.inner_tolerance) {
      out.converged = true;
      ++it;
      break;
    }
  }

  if (gy > g_at_query + 1e-12)
    throw ContractViolation("inner prox solver failed the descent check");

  out.prox = y;
  out.envelope_value = gy;
  out.grad = lambda * (x - y);
  out.inner_iterations = it;
  return out;
}

inline double envelope_value(const ProblemInstance& inst, const Vector& x,
                             const EnvelopeConfig& config) {
  return prox_point(inst, x, config).envelope_value;
}

inline Vector envelope_gradient(const ProblemInstance& inst, const Vector& x,
                                const EnvelopeConfig& config) {
  return prox_point(inst, x, config).grad;
}

// Trajectory snapshots as consumed from optimizer runs.
struct Trajectory {
  StepsizeSchedule schedule;
  std::vector<long> iterations;
  std::vector<Vector> points;
};

struct StationarityTrace {
  std::vector<long> iterations;
  std::vector<double> grad_norms;    // ||grad F_lambda(x_k)||
  std::vector<double> partial_sums;  // sum over snapshots of alpha_k ||.||^2
};

inline StationarityTrace stationarity_trace(const ProblemInstance& inst,
                                            const Trajectory& traj,
                                            const EnvelopeConfig& config) {
  if (traj.points.empty())
    throw InvalidConfigError("stationarity_trace needs snapshots");
  if (traj.points.size() != traj.iterations.size())
    throw InvalidConfigError("snapshot iterations/points length mismatch");
  StationarityTrace trace;
  trace.iterations = traj.iterations;
  double acc = 0.0;
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const EnvelopePoint ep = prox_point(inst, traj.points[i], config);
    const double norm = ep.grad.norm();
    trace.grad_norms.push_back(norm);
    acc += stepsize(traj.schedule, std::max<long>(traj.iterations[i], 1)) *
           norm * norm;
    trace.partial_sums.push_back(acc);
  }
  return trace;
}

}  // namespace aprox
