#include "aprox/problems.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "aprox/serialize.hpp"
#include "support/oracles.hpp"

namespace aprox {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

ProblemInstance hand_phase(std::vector<PhaseSample> samples, int dim) {
  ProblemInstance inst;
  inst.kind = ProblemKind::PhaseRetrieval;
  inst.dim = dim;
  for (auto& s : samples) inst.samples.emplace_back(std::move(s));
  return inst;
}

// --------------------------------------------------------------------------
// Generators

TEST(Generators, PhaseRetrievalPaperScale) {
  const auto inst = gen_phase_retrieval(50, 1000, 7);
  EXPECT_EQ(inst.dim, 50);
  EXPECT_EQ(inst.samples.size(), 1000u);
  EXPECT_TRUE(inst.interpolating);
  ASSERT_TRUE(inst.ground_truth.has_value());
  EXPECT_EQ(inst.ground_truth->symmetry, Symmetry::SignFlip);
  EXPECT_EQ(inst.ground_truth->optimal_value, 0.0);
  for (const auto& s : inst.samples)
    EXPECT_GE(std::get<PhaseSample>(s).b, 0.0);
}

TEST(Generators, PhaseRetrievalZeroSignal) {
  // Hand-built n=1, m=1 instance with a=[1], x*=[0].
  auto inst = hand_phase({PhaseSample{vec({1.0}), 0.0}}, 1);
  inst.ground_truth = GroundTruth{vec({0.0}), Symmetry::SignFlip, 0.0};
  EXPECT_EQ(full_objective(inst, vec({0.0})), 0.0);
}

TEST(Generators, PhaseRetrievalSignSymmetry) {
  const auto inst = gen_phase_retrieval(8, 40, 21);
  const Vector& xs = inst.ground_truth->point;
  EXPECT_EQ(full_objective(inst, xs), 0.0);
  EXPECT_NEAR(full_objective(inst, Vector(-xs)), 0.0, 1e-12);
}

TEST(Generators, MatrixCompletionPaperScale) {
  const auto inst = gen_matrix_completion(2000, 2400, 5, 5, 3);
  EXPECT_EQ(inst.samples.size(), 110000u);  // 5 * (2400*5 + 2000*5)
  EXPECT_EQ(inst.dim, (2000 + 2400) * 5);
}

TEST(Generators, MatrixCompletionOverparameterized) {
  const auto inst = gen_matrix_completion(20, 24, 2, 4, 3);
  EXPECT_EQ(inst.dim, (20 + 24) * 4);
  EXPECT_TRUE(inst.interpolating);
  // Exact interpolation at the padded ground truth even with r_hat > r.
  for (const auto& s : inst.samples)
    EXPECT_EQ(eval_loss(inst, inst.ground_truth->point, s), 0.0);
}

TEST(Generators, MatrixCompletionExactFactorization) {
  const auto inst = gen_matrix_completion(30, 36, 3, 3, 11);
  EXPECT_EQ(full_objective(inst, inst.ground_truth->point), 0.0);
}

TEST(Generators, MatrixCompletionDistinctIndices) {
  const auto inst = gen_matrix_completion(10, 14, 1, 1, 5);
  std::set<std::pair<int, int>> seen;
  for (const auto& s : inst.samples) {
    const auto& es = std::get<EntrySample>(s);
    ASSERT_GE(es.row, 0);
    ASSERT_LT(es.row, 10);
    ASSERT_GE(es.col, 0);
    ASSERT_LT(es.col, 14);
    EXPECT_TRUE(seen.emplace(es.row, es.col).second);
  }
  EXPECT_EQ(seen.size(), 5u * (14 + 10));
}

TEST(Generators, MatrixCompletionRejectsBadConfigs) {
  EXPECT_THROW(gen_matrix_completion(2, 2, 1, 1, 0), InvalidConfigError);
  EXPECT_THROW(gen_matrix_completion(10, 14, 2, 1, 0), InvalidConfigError);
}

TEST(Generators, LinearRegressionNoiseless) {
  const auto inst = gen_linear_regression(5, 100, 0.0, 13);
  EXPECT_TRUE(inst.interpolating);
  EXPECT_EQ(inst.ground_truth->optimal_value, 0.0);
  EXPECT_EQ(full_objective(inst, inst.ground_truth->point), 0.0);
}

TEST(Generators, LinearRegressionNoisy) {
  const auto inst = gen_linear_regression(5, 100, 0.1, 13);
  EXPECT_FALSE(inst.interpolating);
  // Residuals recomputed directly from the generated data.
  const Vector& xs = inst.ground_truth->point;
  double mean_sq = 0.0;
  for (const auto& s : inst.samples) {
    const auto& rs = std::get<RegressionSample>(s);
    const double r = rs.a.dot(xs) - rs.b;
    mean_sq += r * r;
  }
  mean_sq /= static_cast<double>(inst.samples.size());
  EXPECT_GT(mean_sq, 0.0);
  EXPECT_NEAR(full_objective(inst, xs), mean_sq, 1e-14);
  EXPECT_NEAR(inst.ground_truth->optimal_value, mean_sq, 1e-14);
}

TEST(Generators, RegressionTwoSampleQuadratic) {
  // a = [1] and [-1], noiseless: a strongly convex quadratic minimized
  // exactly at x*.
  ProblemInstance inst;
  inst.kind = ProblemKind::LinearRegression;
  inst.dim = 1;
  const double x_star = 0.75;
  inst.samples.emplace_back(RegressionSample{vec({1.0}), x_star});
  inst.samples.emplace_back(RegressionSample{vec({-1.0}), -x_star});
  inst.ground_truth = GroundTruth{vec({x_star}), Symmetry::None, 0.0};
  EXPECT_EQ(full_objective(inst, vec({x_star})), 0.0);
  EXPECT_GT(full_objective(inst, vec({x_star + 0.3})), 0.0);
  EXPECT_GT(full_objective(inst, vec({x_star - 0.4})), 0.0);
}

TEST(Generators, ExponentialDemo) {
  const auto inst = gen_exponential_demo();
  EXPECT_EQ(eval_loss(inst, vec({0.0}), inst.samples[0]), 2.0);
  EXPECT_EQ(subgradient(inst, vec({0.0}), inst.samples[0])[0], 0.0);
  EXPECT_NEAR(eval_loss(inst, vec({1.0}), inst.samples[0]),
              3.0861612696304874, 1e-15);
  EXPECT_EQ(inst.ground_truth->optimal_value, 2.0);
  EXPECT_EQ(inf_loss(inst, inst.samples[0]), 2.0);
}

TEST(Generators, SeedDeterminism) {
  const auto a = gen_phase_retrieval(6, 30, 99);
  const auto b = gen_phase_retrieval(6, 30, 99);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& pa = std::get<PhaseSample>(a.samples[i]);
    const auto& pb = std::get<PhaseSample>(b.samples[i]);
    EXPECT_TRUE(pa.a == pb.a);
    EXPECT_EQ(pa.b, pb.b);
  }
  EXPECT_TRUE(a.ground_truth->point == b.ground_truth->point);

  const auto c = gen_matrix_completion(20, 24, 2, 3, 7);
  const auto d = gen_matrix_completion(20, 24, 2, 3, 7);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& ec = std::get<EntrySample>(c.samples[i]);
    const auto& ed = std::get<EntrySample>(d.samples[i]);
    EXPECT_EQ(ec.row, ed.row);
    EXPECT_EQ(ec.col, ed.col);
    EXPECT_EQ(ec.value, ed.value);
  }

  const auto e = gen_linear_regression(4, 25, 0.3, 5);
  const auto f = gen_linear_regression(4, 25, 0.3, 5);
  for (std::size_t i = 0; i < e.samples.size(); ++i)
    EXPECT_EQ(std::get<RegressionSample>(e.samples[i]).b,
              std::get<RegressionSample>(f.samples[i]).b);
}

// --------------------------------------------------------------------------
// Pointwise operations

TEST(Operations, EvalLossExamples) {
  auto pr = hand_phase({PhaseSample{vec({1.0, 0.0}), 4.0}}, 2);
  EXPECT_EQ(eval_loss(pr, vec({1.0, 0.0}), pr.samples[0]), 3.0);

  const auto mc = gen_matrix_completion(20, 24, 2, 2, 3);
  EXPECT_EQ(eval_loss(mc, mc.ground_truth->point, mc.samples[0]), 0.0);

  ProblemInstance lr;
  lr.kind = ProblemKind::LinearRegression;
  lr.dim = 1;
  lr.samples.emplace_back(RegressionSample{vec({2.0}), 1.0});
  EXPECT_EQ(eval_loss(lr, vec({1.0}), lr.samples[0]), 1.0);
}

TEST(Operations, DimensionMismatchIsContractViolation) {
  const auto inst = gen_phase_retrieval(4, 5, 1);
  EXPECT_THROW(eval_loss(inst, vec({1.0}), inst.samples[0]), ContractViolation);
  EXPECT_THROW(subgradient(inst, vec({1.0, 2.0}), inst.samples[0]),
               ContractViolation);
  EXPECT_THROW(full_objective(inst, vec({1.0, 2.0, 3.0})), ContractViolation);
}

TEST(Operations, SubgradientExamples) {
  auto kink = hand_phase({PhaseSample{vec({1.0}), 1.0}}, 1);
  EXPECT_EQ(subgradient(kink, vec({1.0}), kink.samples[0])[0], 0.0);

  auto pr = hand_phase({PhaseSample{vec({1.0}), 0.0}}, 1);
  const Vector g = subgradient(pr, vec({2.0}), pr.samples[0]);
  EXPECT_EQ(g[0], 4.0);  // 2 sign(4) * <a,x> * a = 2 * 1 * 2 * [1]
  const auto f = [&](const Vector& y) { return eval_loss(pr, y, pr.samples[0]); };
  const Vector fd = testing::central_difference_gradient(f, vec({2.0}), 1e-6);
  EXPECT_NEAR(g[0], fd[0], 1e-4 * std::abs(fd[0]));

  ProblemInstance lr;
  lr.kind = ProblemKind::LinearRegression;
  lr.dim = 1;
  lr.samples.emplace_back(RegressionSample{vec({2.0}), 1.0});
  const Vector gl = subgradient(lr, vec({1.0}), lr.samples[0]);
  EXPECT_EQ(gl[0], 4.0);  // 2 (2 - 1) * 2
  const auto fl = [&](const Vector& y) { return eval_loss(lr, y, lr.samples[0]); };
  EXPECT_NEAR(gl[0], testing::central_difference_gradient(fl, vec({1.0}))[0],
              1e-4 * 4.0);
}

TEST(Operations, WeakConvexityConstants) {
  auto pr = hand_phase({PhaseSample{vec({3.0, 4.0}), 1.0}}, 2);
  EXPECT_EQ(weak_convexity_constant(pr, pr.samples[0]), 50.0);  // 2 * 25

  const auto mc = gen_matrix_completion(10, 12, 1, 1, 2);
  EXPECT_EQ(weak_convexity_constant(mc, mc.samples[0]), 1.0);

  const auto lr = gen_linear_regression(3, 4, 0.0, 2);
  EXPECT_EQ(weak_convexity_constant(lr, lr.samples[0]), 0.0);
  const auto ex = gen_exponential_demo();
  EXPECT_EQ(weak_convexity_constant(ex, ex.samples[0]), 0.0);
}

TEST(Operations, InfLoss) {
  const auto pr = gen_phase_retrieval(3, 4, 1);
  EXPECT_EQ(inf_loss(pr, pr.samples[0]), 0.0);
  const auto lr = gen_linear_regression(3, 4, 0.5, 1);
  EXPECT_EQ(inf_loss(lr, lr.samples[0]), 0.0);
  const auto mc = gen_matrix_completion(10, 12, 1, 1, 1);
  EXPECT_EQ(inf_loss(mc, mc.samples[0]), 0.0);
  const auto ex = gen_exponential_demo();
  EXPECT_EQ(inf_loss(ex, ex.samples[0]), 2.0);
}

TEST(Operations, CompositeParts) {
  auto pr = hand_phase({PhaseSample{vec({1.0, 0.0}), 4.0}}, 2);
  const auto c = composite_parts(pr, vec({3.0, 0.0}), pr.samples[0]);
  EXPECT_EQ(c.value, 5.0);
  EXPECT_TRUE(c.gradient == vec({6.0, 0.0}));
  EXPECT_EQ(c.outer, OuterKind::AbsoluteValue);
  const auto cfun = [&](const Vector& y) {
    return composite_parts(pr, y, pr.samples[0]).value;
  };
  const Vector fd = testing::central_difference_gradient(cfun, vec({3.0, 0.0}));
  EXPECT_NEAR(fd[0], 6.0, 1e-4);
  EXPECT_NEAR(fd[1], 0.0, 1e-6);

  const auto mc = gen_matrix_completion(20, 24, 2, 2, 4);
  EXPECT_EQ(
      composite_parts(mc, mc.ground_truth->point, mc.samples[0]).value, 0.0);

  ProblemInstance lr;
  lr.kind = ProblemKind::LinearRegression;
  lr.dim = 1;
  lr.samples.emplace_back(RegressionSample{vec({2.0}), 1.0});
  const auto cl = composite_parts(lr, vec({1.0}), lr.samples[0]);
  EXPECT_EQ(cl.value, 1.0);
  EXPECT_EQ(cl.gradient[0], 2.0);
  EXPECT_EQ(cl.outer, OuterKind::Square);

  const auto ex = gen_exponential_demo();
  EXPECT_THROW(composite_parts(ex, vec({0.0}), ex.samples[0]),
               UnsupportedStructureError);
}

TEST(Operations, FullObjectiveHandBuilt) {
  // n=2, m=3 hand-built phase retrieval; mean of three hand-computed values.
  auto inst = hand_phase({PhaseSample{vec({1.0, 0.0}), 4.0},
                          PhaseSample{vec({0.0, 2.0}), 1.0},
                          PhaseSample{vec({1.0, 1.0}), 0.5}},
                         2);
  const Vector x = vec({1.0, -1.0});
  // |1 - 4| = 3, |4 - 1| = 3, |0 - 0.5| = 0.5  ->  mean 6.5 / 3.
  EXPECT_NEAR(full_objective(inst, x), 6.5 / 3.0, 1e-15);
}

TEST(Operations, FullObjectiveAtGroundTruth) {
  const auto pr = gen_phase_retrieval(6, 50, 3);
  EXPECT_LE(std::abs(full_objective(pr, pr.ground_truth->point)), 1e-12 * 50);
  const auto ex = gen_exponential_demo();
  EXPECT_EQ(full_objective(ex, vec({0.0})), 2.0);
}

TEST(Operations, DistanceToOpt) {
  const auto pr = gen_phase_retrieval(7, 30, 17);
  const Vector& xs = pr.ground_truth->point;
  EXPECT_EQ(distance_to_opt(pr, Vector(-xs)).value(), 0.0);

  Xoshiro256 rng(4);
  Vector u = detail::normal_vector(rng, 7);
  u.normalize();
  const double t = 0.37;
  EXPECT_LE(distance_to_opt(pr, Vector(xs + t * u)).value(), t + 1e-12);

  const auto lr = gen_linear_regression(4, 30, 0.0, 8);
  EXPECT_EQ(distance_to_opt(lr, lr.ground_truth->point).value(), 0.0);

  const auto mc = gen_matrix_completion(10, 12, 1, 1, 2);
  EXPECT_FALSE(distance_to_opt(mc, mc.ground_truth->point).has_value());
}

// --------------------------------------------------------------------------
// Spectral initialization

TEST(SpectralInit, ZeroMeasurementsGiveZero) {
  auto inst = hand_phase(
      {PhaseSample{vec({1.0, 0.0}), 0.0}, PhaseSample{vec({0.0, 1.0}), 0.0}},
      2);
  EXPECT_TRUE(spectral_init(inst) == Vector::Zero(2));
}

TEST(SpectralInit, RecoversSignalDirection) {
  int good = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = gen_phase_retrieval(10, 400, 100 + seed);
    const Vector x0 = spectral_init(inst);
    const double d = distance_to_opt(inst, x0).value();
    if (d <= 0.5 * inst.ground_truth->point.norm()) ++good;
  }
  EXPECT_GE(good, 18);
}

TEST(SpectralInit, MatchesDenseEigensolver) {
  for (int seed = 0; seed < 5; ++seed) {
    const int n = 6 + 3 * seed;  // up to n = 18
    const auto inst = gen_phase_retrieval(n, 60 * n, 500 + seed);
    const Vector x0 = spectral_init(inst);
    ASSERT_GT(x0.norm(), 0.0);
    const Vector v = x0 / x0.norm();

    Eigen::MatrixXd d_mat = Eigen::MatrixXd::Zero(n, n);
    const double m = static_cast<double>(inst.samples.size());
    for (const auto& s : inst.samples) {
      const auto& ps = std::get<PhaseSample>(s);
      d_mat += (ps.b / m) * ps.a * ps.a.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d_mat);
    const Vector lead = eig.eigenvectors().col(n - 1);
    const double cosine = std::min(1.0, std::abs(lead.dot(v)));
    EXPECT_LT(std::acos(cosine), 1e-6) << "seed " << seed;
  }
}

TEST(SpectralInit, RequiresPhaseRetrieval) {
  const auto lr = gen_linear_regression(3, 10, 0.0, 1);
  EXPECT_THROW(spectral_init(lr), UnsupportedStructureError);
}

// --------------------------------------------------------------------------
// Invariants

std::vector<ProblemInstance> invariant_instances() {
  return {gen_phase_retrieval(5, 20, 31), gen_matrix_completion(20, 24, 2, 3, 32),
          gen_linear_regression(5, 20, 0.2, 33), gen_exponential_demo()};
}

TEST(Invariants, LossNeverBelowInfimum) {
  for (const auto& inst : invariant_instances()) {
    Xoshiro256 rng(mix_seed({inst.seed, 0xF00Du}));
    for (int k = 0; k < 1000; ++k) {
      const Vector x = 3.0 * detail::normal_vector(rng, inst.dim);
      for (const auto& s : inst.samples)
        ASSERT_GE(eval_loss(inst, x, s), inf_loss(inst, s));
    }
  }
}

TEST(Invariants, SubgradientSatisfiesWeakConvexity) {
  for (const auto& inst : invariant_instances()) {
    Xoshiro256 rng(mix_seed({inst.seed, 0xBEEFu}));
    for (int k = 0; k < 200; ++k) {
      const Vector x = 2.0 * detail::normal_vector(rng, inst.dim);
      const Vector y = 2.0 * detail::normal_vector(rng, inst.dim);
      const auto& s = inst.samples[rng.below(
          static_cast<std::uint64_t>(inst.samples.size()))];
      const double rho = weak_convexity_constant(inst, s);
      const double lhs = eval_loss(inst, y, s);
      const double rhs = eval_loss(inst, x, s) +
                         subgradient(inst, x, s).dot(y - x) -
                         0.5 * rho * (y - x).squaredNorm();
      ASSERT_GE(lhs - rhs, -1e-9 * (1.0 + (y - x).squaredNorm()));
    }
  }
}

TEST(Invariants, SubgradientMatchesFiniteDifferences) {
  for (const auto& inst : invariant_instances()) {
    if (inst.kind == ProblemKind::ExponentialDemo) continue;
    Xoshiro256 rng(mix_seed({inst.seed, 0xFDu}));
    int checked = 0;
    while (checked < 100) {
      const Vector x = detail::normal_vector(rng, inst.dim);
      const auto& s = inst.samples[rng.below(
          static_cast<std::uint64_t>(inst.samples.size()))];
      const double c = composite_parts(inst, x, s).value;
      if (std::abs(c) <= 1e-3) continue;  // keep clear of the kink
      ++checked;
      const Vector g = subgradient(inst, x, s);
      const auto f = [&](const Vector& y) { return eval_loss(inst, y, s); };
      const Vector fd = testing::central_difference_gradient(f, x, 1e-6);
      ASSERT_LE((g - fd).norm(), 1e-4 * std::max(1.0, fd.norm()));
    }
  }
  const auto ex = gen_exponential_demo();
  for (double x0 : {-1.5, -0.2, 0.4, 2.0}) {
    const Vector x = vec({x0});
    const auto f = [&](const Vector& y) {
      return eval_loss(ex, y, ex.samples[0]);
    };
    EXPECT_NEAR(subgradient(ex, x, ex.samples[0])[0],
                testing::central_difference_gradient(f, x)[0], 1e-4);
  }
}

TEST(Invariants, InterpolationIsExact) {
  for (const auto& inst : invariant_instances()) {
    if (!inst.interpolating) continue;
    for (const auto& s : inst.samples)
      ASSERT_EQ(eval_loss(inst, inst.ground_truth->point, s),
                inf_loss(inst, s));
  }
  // Overparameterized matrix completion stays exact.
  const auto mc = gen_matrix_completion(20, 24, 2, 5, 77);
  for (const auto& s : mc.samples)
    ASSERT_EQ(eval_loss(mc, mc.ground_truth->point, s), 0.0);
}

// --------------------------------------------------------------------------
// Serialization

TEST(Serialization, RoundTripIsLossless) {
  for (const auto& inst : invariant_instances()) {
    const std::string text = to_json(inst).dump();
    const ProblemInstance back = instance_from_json(json::parse(text));
    ASSERT_EQ(back.kind, inst.kind);
    ASSERT_EQ(back.dim, inst.dim);
    ASSERT_EQ(back.seed, inst.seed);
    ASSERT_EQ(back.interpolating, inst.interpolating);
    ASSERT_EQ(back.samples.size(), inst.samples.size());
    for (std::size_t i = 0; i < inst.samples.size(); ++i) {
      switch (inst.kind) {
        case ProblemKind::PhaseRetrieval: {
          const auto& a = std::get<PhaseSample>(inst.samples[i]);
          const auto& b = std::get<PhaseSample>(back.samples[i]);
          ASSERT_TRUE(a.a == b.a);
          ASSERT_EQ(a.b, b.b);
          break;
        }
        case ProblemKind::MatrixCompletion: {
          const auto& a = std::get<EntrySample>(inst.samples[i]);
          const auto& b = std::get<EntrySample>(back.samples[i]);
          ASSERT_EQ(a.row, b.row);
          ASSERT_EQ(a.col, b.col);
          ASSERT_EQ(a.value, b.value);
          break;
        }
        case ProblemKind::LinearRegression: {
          const auto& a = std::get<RegressionSample>(inst.samples[i]);
          const auto& b = std::get<RegressionSample>(back.samples[i]);
          ASSERT_TRUE(a.a == b.a);
          ASSERT_EQ(a.b, b.b);
          break;
        }
        case ProblemKind::ExponentialDemo:
          break;
      }
    }
    if (inst.ground_truth) {
      ASSERT_TRUE(back.ground_truth.has_value());
      ASSERT_TRUE(back.ground_truth->point == inst.ground_truth->point);
      ASSERT_EQ(back.ground_truth->optimal_value,
                inst.ground_truth->optimal_value);
      ASSERT_EQ(back.ground_truth->symmetry, inst.ground_truth->symmetry);
    }
    if (inst.kind == ProblemKind::MatrixCompletion) {
      ASSERT_EQ(back.factors.rows, inst.factors.rows);
      ASSERT_EQ(back.factors.cols, inst.factors.cols);
      ASSERT_EQ(back.factors.rank_hat, inst.factors.rank_hat);
    }
  }
}

TEST(Serialization, AwkwardDoublesSurvive) {
  auto inst = hand_phase({PhaseSample{vec({0.1, 1.0 / 3.0}), 1e-293},
                          PhaseSample{vec({-1e300, 5e-324}), 0.0}},
                         2);
  inst.domain = Domain::ball(vec({0.3, -0.7}), 2.5000000000000004);
  const ProblemInstance back =
      instance_from_json(json::parse(to_json(inst).dump()));
  for (std::size_t i = 0; i < inst.samples.size(); ++i) {
    const auto& a = std::get<PhaseSample>(inst.samples[i]);
    const auto& b = std::get<PhaseSample>(back.samples[i]);
    ASSERT_TRUE(a.a == b.a);
    ASSERT_EQ(a.b, b.b);
  }
  ASSERT_EQ(back.domain.radius, inst.domain.radius);
  ASSERT_TRUE(back.domain.center == inst.domain.center);
}

}  // namespace
}  // namespace aprox
