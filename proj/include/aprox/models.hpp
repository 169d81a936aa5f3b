#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

#include "aprox/problems.hpp"

namespace aprox {

// Which model f_x(.; s) the iteration minimizes. TruncAdaGrad uses the
// truncated model with a diagonally scaled proximal metric.
enum class ModelKind {
  Subgradient,
  Truncated,
  ProxLinear,
  FullProximal,
  TruncAdaGrad,
};

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Subgradient: return "subgradient";
    case ModelKind::Truncated: return "truncated";
    case ModelKind::ProxLinear: return "prox-linear";
    case ModelKind::FullProximal: return "full-proximal";
    case ModelKind::TruncAdaGrad: return "trunc-adagrad";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  if (s == "subgradient") return ModelKind::Subgradient;
  if (s == "truncated") return ModelKind::Truncated;
  if (s == "prox-linear") return ModelKind::ProxLinear;
  if (s == "full-proximal") return ModelKind::FullProximal;
  if (s == "trunc-adagrad") return ModelKind::TruncAdaGrad;
  return std::nullopt;
}

struct ModelOptions {
  double adagrad_delta = 1e-8;  // floor regularizer for the AdaGrad diagonal
};

enum class StepSolver {
  Linear,            // plain subgradient step
  FixedPoint,        // zero gradient or loss already at its infimum
  TruncatedFull,     // truncation inactive, lambda = alpha
  TruncatedGuarded,  // lambda = (f - inf f)/||g||^2 < alpha
  ProxLinearZero,    // stepped onto the zero set of the linearization
  ProxLinearFull,    // full signed step, |c| > alpha ||grad c||^2
  ProxLinearConstant,  // grad c = 0 with c != 0: model constant, point fixed
  ProxLinearSquare,
  FullProxRegression,
  FullProxPhase,
  AdaGradFull,
  AdaGradGuarded,
};

inline const char* to_string(StepSolver s) {
  switch (s) {
    case StepSolver::Linear: return "linear";
    case StepSolver::FixedPoint: return "fixed-point";
    case StepSolver::TruncatedFull: return "truncated-full";
    case StepSolver::TruncatedGuarded: return "truncated-guarded";
    case StepSolver::ProxLinearZero: return "prox-linear-zero";
    case StepSolver::ProxLinearFull: return "prox-linear-full";
    case StepSolver::ProxLinearConstant: return "prox-linear-constant";
    case StepSolver::ProxLinearSquare: return "prox-linear-square";
    case StepSolver::FullProxRegression: return "full-prox-regression";
    case StepSolver::FullProxPhase: return "full-prox-phase";
    case StepSolver::AdaGradFull: return "adagrad-full";
    case StepSolver::AdaGradGuarded: return "adagrad-guarded";
  }
  return "?";
}

// The resolved step: pre-projection iterate, the stepsize that actually
// fired, and the decrease of the model's own value.
struct StepReport {
  Vector next_point;
  double guarded_stepsize = 0.0;
  double model_decrease = 0.0;
  StepSolver solver = StepSolver::FixedPoint;
};

// AdaGrad diagonal accumulator H_k = diag(sum g_i g_i^T)^(1/2); coordinates
// are nondecreasing over iterations.
struct ScalingState {
  Vector diag_accum;
  double delta = 1e-8;
};

// ---------------------------------------------------------------------------
// Model values f_x(y; s)

inline double model_value(ModelKind kind, const ProblemInstance& inst,
                          const Vector& center, const Vector& query,
                          const Sample& s) {
  switch (kind) {
    case ModelKind::Subgradient:
      return eval_loss(inst, center, s) +
             subgradient(inst, center, s).dot(query - center);
    case ModelKind::Truncated:
    case ModelKind::TruncAdaGrad:
      return std::max(eval_loss(inst, center, s) +
                          subgradient(inst, center, s).dot(query - center),
                      inf_loss(inst, s));
    case ModelKind::ProxLinear: {
      const CompositeParts c = composite_parts(inst, center, s);
      const double lin = c.value + c.gradient.dot(query - center);
      return c.outer == OuterKind::AbsoluteValue ? std::abs(lin) : lin * lin;
    }
    case ModelKind::FullProximal:
      return eval_loss(inst, query, s) +
             0.5 * weak_convexity_constant(inst, s) *
                 (query - center).squaredNorm();
  }
  throw ContractViolation("unknown model kind");
}

// ---------------------------------------------------------------------------
// Exact solvers for argmin_y { f_x(y; s) + ||y - x||^2 / (2 alpha) }

inline StepReport step_subgradient(const Vector& x, const Vector& g,
                                   double alpha) {
  if (!(alpha > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  StepReport r;
  r.next_point = x - alpha * g;
  r.guarded_stepsize = alpha;
  r.model_decrease = alpha * g.squaredNorm();
  r.solver = g.squaredNorm() == 0.0 ? StepSolver::FixedPoint : StepSolver::Linear;
  return r;
}

inline StepReport step_truncated(const Vector& x, double f_val, double f_inf,
                                 const Vector& g, double alpha) {
  if (!(alpha > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  if (f_val < f_inf - 1e-12)
    throw ContractViolation("loss below its declared lower bound");
  StepReport r;
  const double gap = std::max(f_val - f_inf, 0.0);
  const double gg = g.squaredNorm();
  if (gg == 0.0 || gap == 0.0) {
    r.next_point = x;
    r.solver = StepSolver::FixedPoint;
    return r;
  }
  const double lambda = std::min(alpha, gap / gg);
  r.next_point = x - lambda * g;
  r.guarded_stepsize = lambda;
  r.model_decrease = std::min(lambda * gg, gap);
  r.solver = lambda < alpha ? StepSolver::TruncatedGuarded
                            : StepSolver::TruncatedFull;
  return r;
}

inline StepReport step_prox_linear_abs(const Vector& x, double c_val,
                                       const Vector& c_grad, double alpha) {
  if (!(alpha > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  StepReport r;
  const double gg = c_grad.squaredNorm();
  if (gg == 0.0) {
    r.next_point = x;
    r.solver = c_val == 0.0 ? StepSolver::FixedPoint : StepSolver::ProxLinearConstant;
    return r;
  }
  if (c_val == 0.0) {
    r.next_point = x;
    r.solver = StepSolver::FixedPoint;
    return r;
  }
  const double gamma =
      detail::sign0(c_val) * std::min(1.0, std::abs(c_val) / (alpha * gg));
  r.next_point = x - alpha * gamma * c_grad;
  r.guarded_stepsize = alpha * std::abs(gamma);
  r.model_decrease = std::abs(c_val) - std::abs(c_val - alpha * gamma * gg);
  r.solver = std::abs(gamma) < 1.0 ? StepSolver::ProxLinearZero
                                   : StepSolver::ProxLinearFull;
  return r;
}

inline StepReport step_prox_linear_square(const Vector& x, double c_val,
                                          const Vector& c_grad, double alpha) {
  if (!(alpha > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  StepReport r;
  const double gg = c_grad.squaredNorm();
  if (gg == 0.0 || c_val == 0.0) {
    r.next_point = x;
    r.solver = StepSolver::FixedPoint;
    return r;
  }
  const double t = 2.0 * alpha * c_val / (1.0 + 2.0 * alpha * gg);
  r.next_point = x - t * c_grad;
  const double residual = c_val - t * gg;  // = c_val / (1 + 2 alpha gg)
  r.model_decrease = c_val * c_val - residual * residual;
  r.guarded_stepsize = 2.0 * alpha * std::abs(c_val) /
                       ((1.0 + 2.0 * alpha * gg) * std::max(std::sqrt(gg), 1.0));
  r.solver = StepSolver::ProxLinearSquare;
  return r;
}

namespace detail {

// Scalar full-prox problem for phase retrieval along y = x + t a/||a||:
//   min_t |(u + t ||a||)^2 - b| + c t^2,  c = rho/2 + 1/(2 alpha).
// The objective is piecewise convex with pieces split at the roots of
// (u + t||a||)^2 = b, so the minimizer is among the roots, the per-branch
// stationary points, and t = 0. All candidates are evaluated on the true
// objective, so spurious ones are harmless.
inline double phase_prox_scalar(double u, double na, double b, double c) {
  const double sb = std::sqrt(std::max(b, 0.0));
  double best_t = 0.0;
  double best_v = std::abs(u * u - b);
  const auto consider = [&](double t) {
    const double w = u + t * na;
    const double v = std::abs(w * w - b) + c * t * t;
    if (v < best_v - 1e-15 * (1.0 + std::abs(best_v)) ||
        (v <= best_v + 1e-15 * (1.0 + std::abs(best_v)) &&
         std::abs(t) < std::abs(best_t))) {
      best_v = v;
      best_t = t;
    }
  };
  consider((sb - u) / na);
  consider((-sb - u) / na);
  consider(-u * na / (na * na + c));  // outer branch, (u + t||a||)^2 >= b
  if (c != na * na) consider(u * na / (c - na * na));  // inner branch
  return best_t;
}

}  // namespace detail

inline StepReport step_full_prox(const ProblemInstance& inst, const Vector& x,
                                 const Sample& s, double alpha) {
  if (!(alpha > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  StepReport r;
  switch (inst.kind) {
    case ProblemKind::LinearRegression: {
      const auto& rs = std::get<RegressionSample>(s);
      const double rho = weak_convexity_constant(inst, s);  // 0
      const double alpha_eff = alpha / (1.0 + alpha * rho);
      const double c = rs.a.dot(x) - rs.b;
      const double na2 = rs.a.squaredNorm();
      const double t = 2.0 * alpha_eff * c / (1.0 + 2.0 * alpha_eff * na2);
      r.next_point = x - t * rs.a;
      r.guarded_stepsize = alpha;
      r.model_decrease = c * c - (eval_loss(inst, r.next_point, s) +
                                  0.5 * rho * (r.next_point - x).squaredNorm());
      r.solver = StepSolver::FullProxRegression;
      return r;
    }
    case ProblemKind::PhaseRetrieval: {
      const auto& ps = std::get<PhaseSample>(s);
      const double na = ps.a.norm();
      if (na == 0.0) {
        r.next_point = x;
        r.solver = StepSolver::FixedPoint;
        return r;
      }
      const double rho = 2.0 * na * na;
      const double c = 0.5 * rho + 0.5 / alpha;
      const double u = ps.a.dot(x);
      const double t = detail::phase_prox_scalar(u, na, ps.b, c);
      r.next_point = x + (t / na) * ps.a;
      r.guarded_stepsize = alpha;
      r.model_decrease =
          eval_loss(inst, x, s) -
          (eval_loss(inst, r.next_point, s) +
           0.5 * rho * (r.next_point - x).squaredNorm());
      r.solver = t == 0.0 ? StepSolver::FixedPoint : StepSolver::FullProxPhase;
      return r;
    }
    default:
      throw UnsupportedStructureError(
          std::string("no exact proximal step for ") + to_string(inst.kind));
  }
}

// Truncated step in the AdaGrad diagonal metric. The accumulator absorbs the
// current gradient before the diagonal is formed (H_k includes g_k).
inline StepReport step_trunc_adagrad(const Vector& x, double f_val,
                                     double f_inf, const Vector& g,
                                     double alpha0, ScalingState& state) {
  if (!(alpha0 > 0.0)) throw InvalidConfigError("stepsize must be > 0");
  if (f_val < f_inf - 1e-12)
    throw ContractViolation("loss below its declared lower bound");
  if (state.diag_accum.size() == 0) state.diag_accum = Vector::Zero(x.size());
  state.diag_accum.array() += g.array().square();

  StepReport r;
  const double gap = std::max(f_val - f_inf, 0.0);
  const Eigen::ArrayXd diag = state.diag_accum.array().sqrt() + state.delta;
  const double curvature = (g.array().square() / diag).sum();  // g^T H^-1 g
  if (curvature == 0.0 || gap == 0.0) {
    r.next_point = x;
    r.solver = StepSolver::FixedPoint;
    return r;
  }
  const double lambda = std::min(alpha0, gap / curvature);
  r.next_point = x - lambda * (g.array() / diag).matrix();
  r.guarded_stepsize = lambda;
  r.model_decrease = std::min(lambda * curvature, gap);
  r.solver =
      lambda < alpha0 ? StepSolver::AdaGradGuarded : StepSolver::AdaGradFull;
  return r;
}

// Dispatch used by the optimizer loop: one model step on one sample.
inline StepReport model_step(const ProblemInstance& inst, ModelKind kind,
                             const ModelOptions& options, const Vector& x,
                             const Sample& s, double alpha,
                             ScalingState* scaling) {
  switch (kind) {
    case ModelKind::Subgradient:
      return step_subgradient(x, subgradient(inst, x, s), alpha);
    case ModelKind::Truncated:
      return step_truncated(x, eval_loss(inst, x, s), inf_loss(inst, s),
                            subgradient(inst, x, s), alpha);
    case ModelKind::ProxLinear: {
      const CompositeParts c = composite_parts(inst, x, s);
      return c.outer == OuterKind::AbsoluteValue
                 ? step_prox_linear_abs(x, c.value, c.gradient, alpha)
                 : step_prox_linear_square(x, c.value, c.gradient, alpha);
    }
    case ModelKind::FullProximal:
      return step_full_prox(inst, x, s, alpha);
    case ModelKind::TruncAdaGrad: {
      if (scaling == nullptr)
        throw InvalidConfigError("trunc-adagrad requires a ScalingState");
      if (scaling->diag_accum.size() == 0)
        scaling->delta = options.adagrad_delta;
      return step_trunc_adagrad(x, eval_loss(inst, x, s), inf_loss(inst, s),
                                subgradient(inst, x, s), alpha, *scaling);
    }
  }
  throw ContractViolation("unknown model kind");
}

}  // namespace aprox
