// Copyright 2026 The klilqg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "klilqg/errors.hpp"
#include "klilqg/model_fit.hpp"
#include "klilqg/policy.hpp"
#include "klilqg/rollout.hpp"
#include "test_support.hpp"

namespace klilqg {
namespace {

using testing::random_matrix;
using testing::random_policy;
using testing::random_spd;
using testing::random_vector;

using DynamicsFn = std::function<Vector(const Vector& x, const Vector& u)>;
using CostFn = std::function<double(const Vector& x, const Vector& u)>;

struct Fixture {
  SampleSet samples;
  NominalTrajectory nominal;
};

// `count` samples per timestep scattered with std `spread` around a random nominal.
Fixture make_fixture(Rng& rng, int n, int m, int horizon, int count, double spread,
                     const DynamicsFn& dyn, const CostFn& cost) {
  Fixture f;
  f.samples.steps.resize(horizon);
  for (int t = 0; t <= horizon; ++t) f.nominal.mean_states.push_back(random_vector(rng, n));
  for (int t = 0; t < horizon; ++t) f.nominal.mean_actions.push_back(random_vector(rng, m));
  for (int t = 0; t < horizon; ++t) {
    for (int i = 0; i < count; ++i) {
      const Vector x = f.nominal.mean_states[t] + spread * random_vector(rng, n);
      const Vector u = f.nominal.mean_actions[t] + spread * random_vector(rng, m);
      f.samples.steps[t].push_back({x, u, dyn(x, u), cost(x, u)});
    }
  }
  for (int i = 0; i < count; ++i) {
    const Vector x = f.nominal.mean_states[horizon] + spread * random_vector(rng, n);
    f.samples.terminal.push_back({x, cost(x, Vector::Zero(m))});
  }
  return f;
}

Vector stack(const Vector& x, const Vector& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

ExplorationConfig exact_config() {
  ExplorationConfig c;
  c.ridge = 0.0;
  c.pooling = 0;
  return c;
}

struct LinearGenerator {
  Matrix A, B;
  Vector c;
  Vector operator()(const Vector& x, const Vector& u) const { return A * x + B * u + c; }
};

LinearGenerator random_linear(Rng& rng, int n, int m) {
  return {random_matrix(rng, n, n), random_matrix(rng, n, m), random_vector(rng, n)};
}

// a + b.w + 0.5 w'Hw for w = [x; u].
struct QuadraticGenerator {
  double a;
  Vector b;
  Matrix H;
  double operator()(const Vector& w) const { return a + b.dot(w) + 0.5 * w.dot(H * w); }
};

QuadraticGenerator random_quadratic(Rng& rng, int d) {
  const Matrix g = random_matrix(rng, d, d);
  return {random_vector(rng, 1)(0), random_vector(rng, d), g + g.transpose()};
}

double zero_cost(const Vector&, const Vector&) { return 0.0; }

TEST(FitDynamics, RecoversKnownLinearMap) {
  Rng rng(1);
  const auto gen = random_linear(rng, 3, 2);
  const auto f = make_fixture(rng, 3, 2, 3, 30, 1.0, gen, zero_cost);
  const auto model = fit_dynamics(f.samples, f.nominal, exact_config());
  Matrix AB(3, 5);
  AB << gen.A, gen.B;
  for (int t = 0; t < 3; ++t) {
    const auto& step = model.steps[t];
    EXPECT_LT((step.F_xu - AB).cwiseAbs().maxCoeff(), 1e-8);
    const Vector at_center = gen(f.nominal.mean_states[t], f.nominal.mean_actions[t]);
    EXPECT_LT((step.bias - at_center).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(step.residual_rms, 1e-10);
  }
}

TEST(FitDynamics, ConstantMap) {
  Rng rng(2);
  const Vector c = random_vector(rng, 2);
  const auto f = make_fixture(
      rng, 2, 1, 2, 10, 1.0, [&](const Vector&, const Vector&) { return c; }, zero_cost);
  const auto model = fit_dynamics(f.samples, f.nominal, exact_config());
  for (const auto& step : model.steps) {
    EXPECT_LT(step.F_xu.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((step.bias - c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FitDynamics, NoiseFloorResidual) {
  Rng rng(3);
  const auto gen = random_linear(rng, 3, 2);
  constexpr double kSigma = 1e-3;
  const auto f = make_fixture(
      rng, 3, 2, 4, 40, 1.0,
      [&](const Vector& x, const Vector& u) { return Vector(gen(x, u) + kSigma * random_vector(rng, 3)); },
      zero_cost);
  const auto model = fit_dynamics(f.samples, f.nominal, exact_config());
  for (const auto& step : model.steps) EXPECT_LE(step.residual_rms, 2 * kSigma);
}

TEST(FitDynamics, SingularDataNamesTimestep) {
  Rng rng(4);
  auto f = make_fixture(rng, 2, 1, 3, 2, 1.0, random_linear(rng, 2, 1), zero_cost);
  try {
    fit_dynamics(f.samples, f.nominal, exact_config());
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_EQ(e.timestep(), 0);
  }
}

TEST(FitCost, RecoversKnownQuadratic) {
  Rng rng(5);
  const auto gen = random_quadratic(rng, 3);
  const auto f = make_fixture(
      rng, 2, 1, 3, 30, 1.0, random_linear(rng, 2, 1),
      [&](const Vector& x, const Vector& u) { return gen(stack(x, u)); });
  const auto model = fit_cost(f.samples, f.nominal, exact_config());
  for (int t = 0; t < 3; ++t) {
    const Vector c = stack(f.nominal.mean_states[t], f.nominal.mean_actions[t]);
    const auto& term = model.steps[t];
    EXPECT_NEAR(term.l0, gen(c), 1e-8);
    EXPECT_LT((term.gradient - (gen.b + gen.H * c)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((term.hessian - gen.H).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FitCost, ConstantCost) {
  Rng rng(6);
  const auto f = make_fixture(rng, 2, 1, 2, 20, 1.0, random_linear(rng, 2, 1),
                              [](const Vector&, const Vector&) { return 3.5; });
  const auto model = fit_cost(f.samples, f.nominal, exact_config());
  for (const auto& term : model.steps) {
    EXPECT_NEAR(term.l0, 3.5, 1e-12);
    EXPECT_LT(term.gradient.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(term.hessian.cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_NEAR(model.terminal.l0, 3.5, 1e-12);
}

TEST(FitCost, UnderdeterminedWithRidgeOnFullArmSize) {
  Rng rng(7);
  constexpr double kSpread = 0.05;
  const auto smooth = [](const Vector& x, const Vector& u) {
    const Vector w = stack(x, u);
    return w.array().sin().sum() + 0.5 * w.squaredNorm();
  };
  const auto f = make_fixture(rng, 7, 7, 1, 40, kSpread, random_linear(rng, 7, 7), smooth);
  ExplorationConfig config;
  config.ridge = 1e-6;
  config.pooling = 0;
  ASSERT_EQ(quadratic_feature_count(14), 120);
  const auto model = fit_cost(f.samples, f.nominal, config);
  const auto& term = model.steps[0];
  EXPECT_EQ((term.hessian - term.hessian.transpose()).cwiseAbs().maxCoeff(), 0.0);
  // sin has third derivative bounded by 1, so |remainder| <= sum |z_i|^3 / 6.
  double bound_sq = 0.0;
  for (const auto& s : f.samples.steps[0]) {
    const Vector z = stack(s.x, s.u) - term.center;
    bound_sq += std::pow(z.array().abs().cube().sum() / 6.0, 2);
  }
  EXPECT_LT(term.residual_rms, std::sqrt(bound_sq / 40.0));
}

TEST(FitCost, MatchesFiniteDifferencesOnDenseSmoothCloud) {
  Rng rng(8);
  const Vector a = random_vector(rng, 3);
  const auto smooth = [&](const Vector& w) { return std::exp(0.3 * a.dot(w)) + std::sin(w(0)) * w(1); };
  const auto f = make_fixture(
      rng, 2, 1, 1, 400, 0.01, random_linear(rng, 2, 1),
      [&](const Vector& x, const Vector& u) { return smooth(stack(x, u)); });
  ExplorationConfig config;
  config.ridge = 0.0;
  config.pooling = 0;
  const auto term = fit_cost(f.samples, f.nominal, config).steps[0];
  const auto fd = oracle::finite_diff_expansion(smooth, term.center);
  EXPECT_LT(testing::relative_error(term.gradient, fd.gradient), 1e-3);
  EXPECT_LT(testing::relative_error(term.hessian, fd.hessian), 5e-2);
}

TEST(FitDynamics, PoolingUsesNeighbours) {
  // One sample per step is hopeless alone; pooling five steps makes the linear fit exact.
  Rng rng(9);
  const auto gen = random_linear(rng, 1, 1);
  const auto f = make_fixture(rng, 1, 1, 8, 1, 1.0, gen, zero_cost);
  EXPECT_THROW(fit_dynamics(f.samples, f.nominal, exact_config()), FitError);
  ExplorationConfig pooled = exact_config();
  pooled.pooling = 2;
  const auto model = fit_dynamics(f.samples, f.nominal, pooled);
  Matrix AB(1, 2);
  AB << gen.A, gen.B;
  for (const auto& step : model.steps) EXPECT_LT((step.F_xu - AB).cwiseAbs().maxCoeff(), 1e-8);
}

oracle::LQProblem small_problem(Rng& rng) { return oracle::random_lq_problem(rng, 2, 1, 4); }

TEST(CollectSamples, SingleRolloutShape) {
  Rng rng(10);
  const auto pr = small_problem(rng);
  ExplorationConfig config;
  config.samples = 1;
  const auto set = collect_samples(oracle::lq_factory(pr, Vector::Ones(2)),
                                   random_policy(rng, 4, 2, 1), config, rng);
  ASSERT_EQ(set.horizon(), 4);
  for (const auto& step : set.steps) EXPECT_EQ(step.size(), 1u);
  EXPECT_EQ(set.terminal.size(), 1u);
}

TEST(CollectSamples, VanishingCovarianceReproducesNominal) {
  Rng rng(11);
  const auto pr = small_problem(rng);
  const auto factory = oracle::lq_factory(pr, Vector::Ones(2));
  auto policy = random_policy(rng, 4, 2, 1);
  for (auto& s : policy.covariances) s = Matrix::Constant(1, 1, 1e-30);
  auto env = factory(0);
  const auto nominal = nominal_from(rollout(*env, policy, false, rng));
  const auto set = collect_samples(factory, policy, ExplorationConfig{}, rng);
  for (int t = 0; t < 4; ++t) {
    ASSERT_EQ(set.steps[t].size(), 40u);
    for (const auto& s : set.steps[t]) {
      EXPECT_LT((s.x - nominal.mean_states[t]).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((s.u - nominal.mean_actions[t]).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(CollectSamples, FixedSeedIsByteIdentical) {
  Rng rng(12);
  const auto pr = small_problem(rng);
  const auto factory = oracle::lq_factory(pr, Vector::Ones(2));
  const auto policy = random_policy(rng, 4, 2, 1);
  Rng a(99), b(99);
  EXPECT_EQ(samples_to_json(collect_samples(factory, policy, ExplorationConfig{}, a)),
            samples_to_json(collect_samples(factory, policy, ExplorationConfig{}, b)));
}

TEST(CollectSamples, RolloutErrorCarriesIndex) {
  Rng rng(13);
  // Unstable scalar system that overflows to infinity within the horizon.
  oracle::LQProblem pr = testing::linear_problem(Matrix::Constant(1, 1, 1e200),
                                                 Matrix::Identity(1, 1), 3);
  auto policy = make_constant_policy(3, 1, Vector::Ones(1), 1.0);
  try {
    collect_samples(oracle::lq_factory(pr, Vector::Ones(1)), policy, ExplorationConfig{}, rng);
    FAIL() << "expected RolloutError";
  } catch (const RolloutError& e) {
    EXPECT_EQ(e.rollout_index(), 0);
    EXPECT_GE(e.timestep(), 0);
  }
}

TEST(ModelFitProperty, ExactRecoveryOnMatchingGenerators) {
  Rng rng(20);
  for (int c = 0; c < 100; ++c) {
    const int n = 1 + c % 3;
    const int m = 1 + c % 2;
    const int d = n + m;
    const auto lin = random_linear(rng, n, m);
    const auto quad = random_quadratic(rng, d);
    const int count = quadratic_feature_count(d) + 5;
    const auto f = make_fixture(rng, n, m, 2, count, 1.0, lin,
                                [&](const Vector& x, const Vector& u) { return quad(stack(x, u)); });
    const auto dyn = fit_dynamics(f.samples, f.nominal, exact_config());
    const auto cost = fit_cost(f.samples, f.nominal, exact_config());
    Matrix AB(n, d);
    AB << lin.A, lin.B;
    for (int t = 0; t < 2; ++t) {
      ASSERT_LT((dyn.steps[t].F_xu - AB).cwiseAbs().maxCoeff(), 1e-8);
      ASSERT_LT((cost.steps[t].hessian - quad.H).cwiseAbs().maxCoeff(), 1e-8);
      const Vector z = cost.steps[t].center;
      ASSERT_LT((cost.steps[t].gradient - (quad.b + quad.H * z)).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(ModelFitProperty, HessianExactlySymmetric) {
  Rng rng(21);
  for (int c = 0; c < 100; ++c) {
    const int n = 1 + c % 4;
    const auto f = make_fixture(rng, n, 1, 3, 12, 0.5, random_linear(rng, n, 1),
                                [](const Vector& x, const Vector& u) {
                                  return std::cos(x.sum()) * std::exp(u(0));
                                });
    ExplorationConfig config;
    const auto cost = fit_cost(f.samples, f.nominal, config);
    for (const auto& term : cost.steps) {
      ASSERT_EQ((term.hessian - term.hessian.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
    ASSERT_EQ((cost.terminal.hessian - cost.terminal.hessian.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

// The ridge acts on standardized features, so shrinkage is monotone in that scale.
TEST(ModelFitProperty, RidgeShrinksStandardizedCoefficients) {
  Rng rng(22);
  const double ridges[] = {0.0, 1e-6, 1e-4, 1e-2, 1.0, 100.0};
  for (int c = 0; c < 100; ++c) {
    const int n = 1 + c % 3;
    const auto gen = random_linear(rng, n, 1);
    const auto f = make_fixture(
        rng, n, 1, 1, 12, 0.3,
        [&](const Vector& x, const Vector& u) { return Vector(gen(x, u) + 0.1 * random_vector(rng, n)); },
        zero_cost);
    const Vector center = stack(f.nominal.mean_states[0], f.nominal.mean_actions[0]);
    Vector scale = Vector::Zero(n + 1);
    for (const auto& s : f.samples.steps[0]) {
      scale += (stack(s.x, s.u) - center).array().square().matrix();
    }
    scale = (scale / 12.0).cwiseSqrt();
    double prev = INFINITY;
    for (double ridge : ridges) {
      ExplorationConfig config = exact_config();
      config.ridge = ridge;
      const auto step = fit_dynamics(f.samples, f.nominal, config).steps[0];
      const double norm = (step.F_xu * scale.asDiagonal()).norm();
      ASSERT_LE(norm, prev * (1 + 1e-12)) << "case " << c << " ridge " << ridge;
      prev = norm;
    }
  }
}

TEST(ModelFitProperty, CostFitAgreesWithFiniteDifferences) {
  Rng rng(23);
  for (int c = 0; c < 100; ++c) {
    const Vector a = 0.5 * random_vector(rng, 3);
    const Matrix H = random_spd(rng, 3);
    const auto smooth = [&](const Vector& w) { return std::exp(a.dot(w)) + 0.5 * w.dot(H * w); };
    const auto f = make_fixture(
        rng, 2, 1, 1, 200, 0.01, random_linear(rng, 2, 1),
        [&](const Vector& x, const Vector& u) { return smooth(stack(x, u)); });
    const auto term = fit_cost(f.samples, f.nominal, exact_config()).steps[0];
    const auto fd = oracle::finite_diff_expansion(smooth, term.center);
    ASSERT_LT(testing::relative_error(term.gradient, fd.gradient), 1e-3) << "case " << c;
    ASSERT_LT(testing::relative_error(term.hessian, fd.hessian), 5e-2) << "case " << c;
  }
}

}  // namespace
}  // namespace klilqg
