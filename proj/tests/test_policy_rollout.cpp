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
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "klilqg/errors.hpp"
#include "klilqg/policy.hpp"
#include "klilqg/rollout.hpp"
#include "test_support.hpp"

namespace klilqg {
namespace {

using testing::linear_problem;
using testing::random_matrix;
using testing::random_policy;
using testing::random_vector;

LinearGaussianPolicy scalar_policy(double K, double k, double sigma) {
  LinearGaussianPolicy p;
  p.gains.push_back(Matrix::Constant(1, 1, K));
  p.offsets.push_back(Vector::Constant(1, k));
  p.covariances.push_back(Matrix::Constant(1, 1, sigma));
  return p;
}

// Pass-through environment: x_{t+1} = u_t.
std::unique_ptr<Environment> pass_through(int n, int horizon) {
  return std::make_unique<oracle::LqEnvironment>(
      linear_problem(Matrix::Zero(n, n), Matrix::Identity(n, n), horizon), Vector::Zero(n));
}

// Produces a NaN state at `bad_step`.
class FaultyEnvironment final : public Environment {
 public:
  explicit FaultyEnvironment(int bad_step) : bad_step_(bad_step) {}
  int state_dim() const override { return 1; }
  int action_dim() const override { return 1; }
  int horizon() const override { return 5; }
  Observation reset() override {
    t_ = 0;
    return {Vector::Zero(1), 0.0, 0.0};
  }
  Observation step(const State&, const Action& u) override {
    const double v = t_++ == bad_step_ ? std::numeric_limits<double>::quiet_NaN() : u(0);
    return {Vector::Constant(1, v), 0.0, 0.0};
  }
  double terminal_cost(const Observation&) const override { return 0.0; }

 private:
  int bad_step_;
  int t_ = 0;
};

TEST(PolicyMeanAction, ZeroGainReturnsOffset) {
  Rng rng(1);
  const Vector x0 = random_vector(rng, 3);
  const auto p = make_constant_policy(4, 3, x0, 1.0);
  EXPECT_EQ(policy_mean_action(p, 2, random_vector(rng, 3)), x0);
}

TEST(PolicyMeanAction, IdentityGain) {
  Rng rng(2);
  auto p = make_constant_policy(2, 3, Vector::Zero(3), 1.0);
  p.gains[1] = Matrix::Identity(3, 3);
  const Vector x = random_vector(rng, 3);
  EXPECT_EQ(policy_mean_action(p, 1, x), x);
}

TEST(PolicyMeanAction, ScalarArithmetic) {
  EXPECT_DOUBLE_EQ(policy_mean_action(scalar_policy(2.0, 1.0, 1.0), 0, Vector::Constant(1, 3.0))(0),
                   7.0);
}

TEST(PolicyMeanAction, RejectsBadIndexAndShape) {
  const auto p = scalar_policy(2.0, 1.0, 1.0);
  EXPECT_THROW(policy_mean_action(p, 1, Vector::Zero(1)), UsageError);
  EXPECT_THROW(policy_mean_action(p, -1, Vector::Zero(1)), UsageError);
  EXPECT_THROW(policy_mean_action(p, 0, Vector::Zero(2)), UsageError);
}

TEST(SampleAction, DegenerateCovarianceGivesMean) {
  const auto p = make_constant_policy(1, 2, Vector::Constant(2, 0.3), 1e-30);
  Rng rng(3);
  const Action u = sample_action(p, 0, Vector::Zero(2), rng);
  EXPECT_LT((u - Vector::Constant(2, 0.3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SampleAction, SameSeedSameDraw) {
  const auto p = make_constant_policy(1, 2, Vector::Zero(2), 1.0);
  Rng a(7), b(7);
  EXPECT_EQ(sample_action(p, 0, Vector::Zero(2), a), sample_action(p, 0, Vector::Zero(2), b));
}

TEST(SampleAction, EmpiricalMoments) {
  const auto p = scalar_policy(0.0, 0.0, 1.0);
  Rng rng(4);
  constexpr int kDraws = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = sample_action(p, 0, Vector::Zero(1), rng)(0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(sq / kDraws - mean * mean, 1.0, 0.1);
}

TEST(SampleAction, IndefiniteCovarianceThrows) {
  auto p = scalar_policy(0.0, 0.0, -1.0);
  Rng rng(5);
  EXPECT_THROW(sample_action(p, 0, Vector::Zero(1), rng), InvariantViolation);
  EXPECT_THROW(validate_policy(p), InvariantViolation);
}

TEST(Rollout, PassThroughReachesCommand) {
  auto env = pass_through(2, 4);
  const Vector c(Eigen::Vector2d(0.4, -0.2));
  Rng rng(6);
  const auto traj = rollout(*env, make_constant_policy(4, 2, c, 1.0), false, rng);
  for (int t = 1; t <= 4; ++t) EXPECT_EQ(traj.states[t], c);
}

TEST(Rollout, ShapeForUnitHorizon) {
  auto env = pass_through(1, 1);
  Rng rng(7);
  const auto traj = rollout(*env, scalar_policy(0.0, 1.0, 1.0), false, rng);
  EXPECT_EQ(traj.states.size(), 2u);
  EXPECT_EQ(traj.actions.size(), 1u);
  EXPECT_EQ(traj.costs.size(), 2u);
}

TEST(Rollout, MatchesHandRecursionOnLinearSystem) {
  Rng rng(8);
  const Matrix A = random_matrix(rng, 3, 3);
  const Matrix B = random_matrix(rng, 3, 2);
  constexpr int kT = 6;
  LinearGaussianPolicy p;
  for (int t = 0; t < kT; ++t) {
    p.gains.push_back(Matrix::Zero(2, 3));
    p.offsets.push_back(random_vector(rng, 2));
    p.covariances.push_back(Matrix::Identity(2, 2));
  }
  oracle::LqEnvironment env(linear_problem(A, B, kT), Vector::Ones(3));
  const auto traj = rollout(env, p, false, rng);
  Vector x = Vector::Ones(3);
  for (int t = 0; t < kT; ++t) {
    x = A * x + B * p.offsets[t];
    EXPECT_LT((traj.states[t + 1] - x).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + x.norm()));
  }
}

TEST(Rollout, HorizonMismatchIsUsageError) {
  auto env = pass_through(1, 3);
  Rng rng(9);
  EXPECT_THROW(rollout(*env, scalar_policy(0.0, 0.0, 1.0), false, rng), UsageError);
}

TEST(Rollout, NonFiniteStateReportsTimestep) {
  FaultyEnvironment env(2);
  Rng rng(10);
  try {
    rollout(env, make_constant_policy(5, 1, Vector::Ones(1), 1.0), false, rng);
    FAIL() << "expected RolloutError";
  } catch (const RolloutError& e) {
    EXPECT_EQ(e.timestep(), 2);
  }
}

TEST(TotalCost, ZeroAndArithmetic) {
  Trajectory traj;
  traj.costs = {0.0, 0.0};
  EXPECT_EQ(trajectory_total_cost(traj), 0.0);
  traj.costs = {1.0, 2.0, 3.0};
  EXPECT_EQ(trajectory_total_cost(traj), 6.0);
}

TEST(TotalCost, MatchesReevaluatedCosts) {
  Rng rng(11);
  const auto problem = oracle::random_lq_problem(rng, 3, 2, 8);
  const Vector x0 = random_vector(rng, 3);
  oracle::LqEnvironment env(problem, x0);
  const auto traj = rollout(env, random_policy(rng, 8, 3, 2), true, rng);
  double total = 0.0;
  for (int t = 0; t < 8; ++t) {
    const Vector& x = traj.states[t];
    const Vector& u = traj.actions[t];
    total += 0.5 * x.dot(problem.Q * x) + 0.5 * u.dot(problem.R * u) + problem.q.dot(x) +
             problem.r.dot(u);
  }
  const Vector& xT = traj.states.back();
  total += 0.5 * xT.dot(problem.Q_f * xT) + problem.q_f.dot(xT);
  EXPECT_NEAR(trajectory_total_cost(traj), total, 1e-10 * (1.0 + std::abs(total)));
}

TEST(PolicyProperty, DeterministicRolloutIsReproducible) {
  Rng rng(20);
  for (int c = 0; c < 100; ++c) {
    const auto problem = oracle::random_lq_problem(rng, 1 + c % 4, 1 + c % 2, 1 + c % 10);
    const Vector x0 = random_vector(rng, problem.state_dim());
    const auto policy =
        random_policy(rng, problem.horizon, problem.state_dim(), problem.action_dim());
    oracle::LqEnvironment e1(problem, x0), e2(problem, x0);
    Rng r1(c), r2(c + 1000);
    const auto a = rollout(e1, policy, false, r1);
    const auto b = rollout(e2, policy, false, r2);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t t = 0; t < a.states.size(); ++t) ASSERT_EQ(a.states[t], b.states[t]);
    ASSERT_EQ(a.costs, b.costs);
  }
}

TEST(PolicyProperty, VanishingCovarianceMatchesDeterministic) {
  Rng rng(21);
  for (int c = 0; c < 100; ++c) {
    const auto problem = oracle::random_lq_problem(rng, 1 + c % 4, 1 + c % 2, 1 + c % 10);
    const Vector x0 = random_vector(rng, problem.state_dim());
    auto policy = random_policy(rng, problem.horizon, problem.state_dim(), problem.action_dim());
    for (auto& s : policy.covariances) s = 1e-30 * Matrix::Identity(s.rows(), s.cols());
    oracle::LqEnvironment env(problem, x0);
    Rng r(c);
    const auto det = rollout(env, policy, false, r);
    const auto sto = rollout(env, policy, true, r);
    for (std::size_t t = 0; t < det.states.size(); ++t) {
      ASSERT_LT((det.states[t] - sto.states[t]).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(PolicyProperty, TotalCostIsAdditive) {
  Rng rng(23);
  std::normal_distribution<double> normal;
  for (int c = 0; c < 100; ++c) {
    Trajectory traj;
    const int len = 2 + c % 20;
    for (int i = 0; i < len; ++i) traj.costs.push_back(normal(rng));
    const double total = trajectory_total_cost(traj);
    for (int split = 0; split <= len; ++split) {
      const double head = std::accumulate(traj.costs.begin(), traj.costs.begin() + split, 0.0);
      const double tail = std::accumulate(traj.costs.begin() + split, traj.costs.end(), 0.0);
      EXPECT_NEAR(head + tail, total, 1e-12 * len);
    }
  }
}

}  // namespace
}  // namespace klilqg
