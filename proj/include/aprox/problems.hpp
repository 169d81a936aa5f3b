#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "aprox/rng.hpp"

namespace aprox {

using Vector = Eigen::VectorXd;

struct InvalidConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedStructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ProblemKind {
  PhaseRetrieval,
  MatrixCompletion,
  LinearRegression,
  ExponentialDemo,
};

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::PhaseRetrieval: return "phase-retrieval";
    case ProblemKind::MatrixCompletion: return "matrix-completion";
    case ProblemKind::LinearRegression: return "linear-regression";
    case ProblemKind::ExponentialDemo: return "exponential-demo";
  }
  return "?";
}

inline std::optional<ProblemKind> problem_kind_from_string(std::string_view s) {
  if (s == "phase-retrieval") return ProblemKind::PhaseRetrieval;
  if (s == "matrix-completion") return ProblemKind::MatrixCompletion;
  if (s == "linear-regression") return ProblemKind::LinearRegression;
  if (s == "exponential-demo") return ProblemKind::ExponentialDemo;
  return std::nullopt;
}

// Per-sample payloads. b >= 0 for phase retrieval (a squared magnitude).
struct PhaseSample {
  Vector a;
  double b = 0.0;
};
struct EntrySample {  // matrix completion: one observed entry
  int row = 0;
  int col = 0;
  double value = 0.0;
};
struct RegressionSample {
  Vector a;
  double b = 0.0;
};
struct UnitSample {};  // exponential demo: deterministic

using Sample = std::variant<PhaseSample, EntrySample, RegressionSample, UnitSample>;

enum class Symmetry { None, SignFlip };

struct GroundTruth {
  Vector point;                        // representative minimizer
  Symmetry symmetry = Symmetry::None;  // SignFlip: the set is {+point, -point}
  double optimal_value = 0.0;          // F at the representative point
};

struct Domain {
  enum class Type { AllSpace, Ball };
  Type type = Type::AllSpace;
  Vector center;
  double radius = 0.0;

  static Domain all_space() { return {}; }
  static Domain ball(Vector center, double radius) {
    if (!(radius > 0.0)) throw InvalidConfigError("ball radius must be > 0");
    Domain d;
    d.type = Type::Ball;
    d.center = std::move(center);
    d.radius = radius;
    return d;
  }
};

// Matrix-completion parameter layout: the flattened vector holds the rows of
// X (rows x rank_hat) and then the rows of Y (cols x rank_hat), row-major.
struct FactorShape {
  int rows = 0;
  int cols = 0;
  int rank_hat = 0;
};

struct ProblemInstance {
  ProblemKind kind = ProblemKind::PhaseRetrieval;
  int dim = 0;
  std::vector<Sample> samples;
  std::optional<GroundTruth> ground_truth;
  Domain domain;
  bool interpolating = false;
  FactorShape factors;  // meaningful for MatrixCompletion only
  std::uint64_t seed = 0;

  Eigen::VectorBlock<const Vector> factor_row(const Vector& x, int i) const {
    return x.segment(static_cast<Eigen::Index>(i) * factors.rank_hat,
                     factors.rank_hat);
  }
  Eigen::VectorBlock<const Vector> factor_col(const Vector& x, int j) const {
    return x.segment(
        static_cast<Eigen::Index>(factors.rows + j) * factors.rank_hat,
        factors.rank_hat);
  }
};

namespace detail {

inline void check_dim(const ProblemInstance& inst, const Vector& x) {
  if (x.size() != inst.dim)
    throw ContractViolation("parameter dimension " + std::to_string(x.size()) +
                            " does not match instance dim " +
                            std::to_string(inst.dim));
}

// Kink convention: sign(0) := 0, so interpolating points yield the zero
// subgradient and are fixed points of every model step.
inline double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline Vector normal_vector(Xoshiro256& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Structural oracles

inline double eval_loss(const ProblemInstance& inst, const Vector& x,
                        const Sample& s) {
  detail::check_dim(inst, x);
  switch (inst.kind) {
    case ProblemKind::PhaseRetrieval: {
      const auto& ps = std::get<PhaseSample>(s);
      const double u = ps.a.dot(x);
      return std::abs(u * u - ps.b);
    }
    case ProblemKind::MatrixCompletion: {
      const auto& es = std::get<EntrySample>(s);
      return std::abs(inst.factor_row(x, es.row).dot(inst.factor_col(x, es.col)) -
                      es.value);
    }
    case ProblemKind::LinearRegression: {
      const auto& rs = std::get<RegressionSample>(s);
      const double r = rs.a.dot(x) - rs.b;
      return r * r;
    }
    case ProblemKind::ExponentialDemo:
      return std::exp(x[0]) + std::exp(-x[0]);
  }
  throw ContractViolation("unknown problem kind");
}

inline void subgradient_into(const ProblemInstance& inst, const Vector& x,
                             const Sample& s, Vector& g) {
  detail::check_dim(inst, x);
  g.setZero(inst.dim);
  switch (inst.kind) {
    case ProblemKind::PhaseRetrieval: {
      const auto& ps = std::get<PhaseSample>(s);
      const double u = ps.a.dot(x);
      g = 2.0 * detail::sign0(u * u - ps.b) * u * ps.a;
      return;
    }
    case ProblemKind::MatrixCompletion: {
      const auto& es = std::get<EntrySample>(s);
      const auto xi = inst.factor_row(x, es.row);
      const auto yj = inst.factor_col(x, es.col);
      const double sgn = detail::sign0(xi.dot(yj) - es.value);
      const int r = inst.factors.rank_hat;
      g.segment(static_cast<Eigen::Index>(es.row) * r, r) = sgn * yj;
      g.segment(static_cast<Eigen::Index>(inst.factors.rows + es.col) * r, r) =
          sgn * xi;
      return;
    }
    case ProblemKind::LinearRegression: {
      const auto& rs = std::get<RegressionSample>(s);
      g = 2.0 * (rs.a.dot(x) - rs.b) * rs.a;
      return;
    }
    case ProblemKind::ExponentialDemo:
      g[0] = std::exp(x[0]) - std::exp(-x[0]);
      return;
  }
}

inline Vector subgradient(const ProblemInstance& inst, const Vector& x,
                          const Sample& s) {
  Vector g;
  subgradient_into(inst, x, s, g);
  return g;
}

inline double weak_convexity_constant(const ProblemInstance& inst,
                                      const Sample& s) {
  switch (inst.kind) {
    case ProblemKind::PhaseRetrieval:
      return 2.0 * std::get<PhaseSample>(s).a.squaredNorm();
    case ProblemKind::MatrixCompletion:
      return 1.0;
    case ProblemKind::LinearRegression:
    case ProblemKind::ExponentialDemo:
      return 0.0;
  }
  return 0.0;
}

inline double inf_loss(const ProblemInstance& inst, const Sample&) {
  return inst.kind == ProblemKind::ExponentialDemo ? 2.0 : 0.0;
}

enum class OuterKind { AbsoluteValue, Square };

struct CompositeParts {
  double value = 0.0;  // c(x; s)
  Vector gradient;     // grad c(x; s)
  OuterKind outer = OuterKind::AbsoluteValue;
};

inline CompositeParts composite_parts(const ProblemInstance& inst,
                                      const Vector& x, const Sample& s) {
  detail::check_dim(inst, x);
  CompositeParts out;
  switch (inst.kind) {
    case ProblemKind::PhaseRetrieval: {
      const auto& ps = std::get<PhaseSample>(s);
      const double u = ps.a.dot(x);
      out.value = u * u - ps.b;
      out.gradient = 2.0 * u * ps.a;
      out.outer = OuterKind::AbsoluteValue;
      return out;
    }
    case ProblemKind::MatrixCompletion: {
      const auto& es = std::get<EntrySample>(s);
      const auto xi = inst.factor_row(x, es.row);
      const auto yj = inst.factor_col(x, es.col);
      out.value = xi.dot(yj) - es.value;
      out.gradient.setZero(inst.dim);
      const int r = inst.factors.rank_hat;
      out.gradient.segment(static_cast<Eigen::Index>(es.row) * r, r) = yj;
      out.gradient.segment(
          static_cast<Eigen::Index>(inst.factors.rows + es.col) * r, r) = xi;
      out.outer = OuterKind::AbsoluteValue;
      return out;
    }
    case ProblemKind::LinearRegression: {
      const auto& rs = std::get<RegressionSample>(s);
      out.value = rs.a.dot(x) - rs.b;
      out.gradient = rs.a;
      out.outer = OuterKind::Square;
      return out;
    }
    case ProblemKind::ExponentialDemo:
      throw UnsupportedStructureError(
          "exponential-demo has no composite structure");
  }
  throw ContractViolation("unknown problem kind");
}

// Mean loss over the sample set, Neumaier-compensated so relative error
// stays below 1e-12 even for large m.
inline double full_objective(const ProblemInstance& inst, const Vector& x) {
  detail::check_dim(inst, x);
  double sum = 0.0, comp = 0.0;
  for (const Sample& s : inst.samples) {
    const double v = eval_loss(inst, x, s);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(inst.samples.size());
}

// Distance to the optimal set over the recorded symmetry orbit. Absent for
// matrix completion (the optimal set is a manifold) and when no ground truth
// is recorded.
inline std::optional<double> distance_to_opt(const ProblemInstance& inst,
                                             const Vector& x) {
  detail::check_dim(inst, x);
  if (!inst.ground_truth || inst.kind == ProblemKind::MatrixCompletion)
    return std::nullopt;
  const GroundTruth& gt = *inst.ground_truth;
  const double d = (x - gt.point).norm();
  if (gt.symmetry == Symmetry::SignFlip)
    return std::min(d, (x + gt.point).norm());
  return d;
}

inline double mean_weak_convexity(const ProblemInstance& inst) {
  double sum = 0.0;
  for (const Sample& s : inst.samples) sum += weak_convexity_constant(inst, s);
  return sum / static_cast<double>(inst.samples.size());
}

// Phase-retrieval warm start: r_hat * v with v the leading unit eigenvector
// of D = (1/m) sum b_i a_i a_i^T (power iteration, 200-iteration budget,
// early exit once the Rayleigh quotient has moved < 1e-10 relatively for 5
// consecutive iterations) and r_hat = sqrt(mean b).
inline Vector spectral_init(const ProblemInstance& inst) {
  if (inst.kind != ProblemKind::PhaseRetrieval)
    throw UnsupportedStructureError("spectral_init requires phase retrieval");
  const int n = inst.dim;
  const auto m = static_cast<double>(inst.samples.size());
  double mean_b = 0.0;
  for (const Sample& s : inst.samples) mean_b += std::get<PhaseSample>(s).b;
  mean_b /= m;
  if (mean_b == 0.0) return Vector::Zero(n);

  Eigen::MatrixXd d_mat = Eigen::MatrixXd::Zero(n, n);
  for (const Sample& s : inst.samples) {
    const auto& ps = std::get<PhaseSample>(s);
    d_mat.selfadjointView<Eigen::Lower>().rankUpdate(ps.a, ps.b / m);
  }
  d_mat = d_mat.selfadjointView<Eigen::Lower>();

  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double eig = 0.0;
  int settled = 0;
  for (int it = 0; it < 200; ++it) {
    Vector w = d_mat * v;
    const double norm = w.norm();
    if (norm == 0.0) return Vector::Zero(n);
    v = w / norm;
    const double eig_next = v.dot(d_mat * v);
    settled = std::abs(eig_next - eig) <= 1e-10 * std::max(1.0, std::abs(eig_next))
                  ? settled + 1
                  : 0;
    eig = eig_next;
    if (settled >= 5) break;
  }
  return std::sqrt(mean_b) * v;
}

// ---------------------------------------------------------------------------
// Generators. Deterministic: equal arguments give bit-identical instances.

inline ProblemInstance gen_phase_retrieval(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw InvalidConfigError("phase retrieval needs n >= 1, m >= 1");
  Xoshiro256 rng(seed);
  ProblemInstance inst;
  inst.kind = ProblemKind::PhaseRetrieval;
  inst.dim = n;
  inst.seed = seed;
  inst.interpolating = true;
  Vector x_star = detail::normal_vector(rng, n);
  inst.samples.reserve(m);
  for (int i = 0; i < m; ++i) {
    PhaseSample ps;
    ps.a = detail::normal_vector(rng, n);
    const double u = ps.a.dot(x_star);
    ps.b = u * u;
    inst.samples.emplace_back(std::move(ps));
  }
  inst.ground_truth = GroundTruth{std::move(x_star), Symmetry::SignFlip, 0.0};
  return inst;
}

inline ProblemInstance gen_matrix_completion(int m_rows, int n_cols, int r,
                                             int r_hat, std::uint64_t seed) {
  if (!(1 <= r && r <= r_hat && r_hat <= std::min(m_rows, n_cols)))
    throw InvalidConfigError(
        "matrix completion needs 1 <= r <= r_hat <= min(m_rows, n_cols)");
  const long total = static_cast<long>(m_rows) * n_cols;
  const long omega = 5L * (static_cast<long>(n_cols) * r +
                           static_cast<long>(m_rows) * r);
  if (omega > total)
    throw InvalidConfigError("|Omega| = " + std::to_string(omega) +
                             " exceeds m_rows*n_cols = " +
                             std::to_string(total));
  Xoshiro256 rng(seed);
  Eigen::MatrixXd x_star(m_rows, r), y_star(n_cols, r);
  for (int i = 0; i < m_rows; ++i)
    for (int j = 0; j < r; ++j) x_star(i, j) = rng.normal();
  for (int i = 0; i < n_cols; ++i)
    for (int j = 0; j < r; ++j) y_star(i, j) = rng.normal();

  ProblemInstance inst;
  inst.kind = ProblemKind::MatrixCompletion;
  inst.factors = FactorShape{m_rows, n_cols, r_hat};
  inst.dim = (m_rows + n_cols) * r_hat;
  inst.seed = seed;
  inst.interpolating = true;  // r_hat >= r

  // The ground-truth factors, zero-padded to r_hat columns. Sample values
  // are computed through the same padded dot products eval_loss uses, so
  // interpolation holds bit-exactly.
  Vector gt_point = Vector::Zero(inst.dim);
  for (int i = 0; i < m_rows; ++i)
    gt_point.segment(static_cast<Eigen::Index>(i) * r_hat, r) =
        x_star.row(i).transpose();
  for (int j = 0; j < n_cols; ++j)
    gt_point.segment(static_cast<Eigen::Index>(m_rows + j) * r_hat, r) =
        y_star.row(j).transpose();

  // Uniform |Omega|-subset without replacement: sparse partial Fisher-Yates
  // over the flattened index space.
  std::unordered_map<long, long> moved;
  inst.samples.reserve(omega);
  for (long t = 0; t < omega; ++t) {
    const long pick = t + static_cast<long>(rng.below(total - t));
    auto it_pick = moved.find(pick);
    const long value = it_pick == moved.end() ? pick : it_pick->second;
    auto it_t = moved.find(t);
    moved[pick] = it_t == moved.end() ? t : it_t->second;
    const int i = static_cast<int>(value / n_cols);
    const int j = static_cast<int>(value % n_cols);
    inst.samples.emplace_back(EntrySample{
        i, j, inst.factor_row(gt_point, i).dot(inst.factor_col(gt_point, j))});
  }

  inst.ground_truth = GroundTruth{std::move(gt_point), Symmetry::None, 0.0};
  return inst;
}

inline ProblemInstance gen_linear_regression(int n, int m, double noise_sd,
                                             std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw InvalidConfigError("linear regression needs n >= 1, m >= 1");
  if (noise_sd < 0.0) throw InvalidConfigError("noise_sd must be >= 0");
  Xoshiro256 rng(seed);
  ProblemInstance inst;
  inst.kind = ProblemKind::LinearRegression;
  inst.dim = n;
  inst.seed = seed;
  inst.interpolating = noise_sd == 0.0;
  Vector x_star = detail::normal_vector(rng, n);
  inst.samples.reserve(m);
  double noise_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    RegressionSample rs;
    rs.a = detail::normal_vector(rng, n);
    const double z = noise_sd * rng.normal();
    rs.b = rs.a.dot(x_star) + z;
    noise_sq += z * z;
    inst.samples.emplace_back(std::move(rs));
  }
  inst.ground_truth =
      GroundTruth{std::move(x_star), Symmetry::None, noise_sq / m};
  return inst;
}

inline ProblemInstance gen_exponential_demo() {
  ProblemInstance inst;
  inst.kind = ProblemKind::ExponentialDemo;
  inst.dim = 1;
  inst.interpolating = true;
  inst.samples.emplace_back(UnitSample{});
  inst.ground_truth = GroundTruth{Vector::Zero(1), Symmetry::None, 2.0};
  return inst;
}

}  // namespace aprox
