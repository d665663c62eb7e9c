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

#pragma once

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "klilqg/model_fit.hpp"
#include "klilqg/types.hpp"

namespace klilqg::oracle {

/// Finite-horizon affine-quadratic problem:
///   x_{t+1} = A x_t + B u_t + c
///   cost_t  = 0.5 x'Qx + 0.5 u'Ru + q'x + r'u,  t < T
///   cost_T  = 0.5 x'Q_f x + q_f'x
struct LQProblem {
  Matrix A, B;
  Vector c;
  Matrix Q, R;
  Vector q, r;
  Matrix Q_f;
  Vector q_f;
  int horizon = 0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int action_dim() const { return static_cast<int>(B.cols()); }
};

struct LqrSolution {
  std::vector<Matrix> K;  // u_t = K_t x_t + k_t
  std::vector<Vector> k;
  // Cost-to-go 0.5 x'P_t x + p_t'x + s_t for t = 0..T.
  std::vector<Matrix> P;
  std::vector<Vector> p;
  std::vector<double> s;

  double cost_to_go(int t, const Vector& x) const { return 0.5 * x.dot(P[t] * x) + p[t].dot(x) + s[t]; }
};

/// Backward Riccati recursion. Throws UsageError if R is not positive definite
/// or shapes disagree.
LqrSolution riccati_lqr(const LQProblem& problem);

/// Total cost of the closed loop u = K x + k from x0 (deterministic).
double lq_rollout_cost(const LQProblem& problem, const LqrSolution& solution, const Vector& x0);

struct FiniteDiffExpansion {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// Central differences with per-coordinate step h_i = rel_step * (1 + |p_i|);
/// the Hessian is symmetrized. Throws std::domain_error on non-finite values.
FiniteDiffExpansion finite_diff_expansion(const std::function<double(const Vector&)>& f,
                                          const Vector& point, double rel_step = 1e-5);

/// Random well-posed instance: stable-ish A, Q and Q_f PSD, R PD, nonzero
/// linear terms and drift.
LQProblem random_lq_problem(std::mt19937_64& rng, int state_dim, int action_dim, int horizon);

/// Exact local models of an LQ problem, centered on `nominal`.
struct LqModels {
  LinearDynamicsModel dynamics;
  QuadraticCostModel cost;
};
LqModels lq_models(const LQProblem& problem, const NominalTrajectory& nominal);

/// The LQ problem as a black-box environment starting from `x0`. The reported
/// distance is the norm of the state.
class LqEnvironment final : public Environment {
 public:
  LqEnvironment(LQProblem problem, Vector x0);
  int state_dim() const override { return problem_.state_dim(); }
  int action_dim() const override { return problem_.action_dim(); }
  int horizon() const override { return problem_.horizon; }
  Observation reset() override;
  Observation step(const State& current, const Action& action) override;
  double terminal_cost(const Observation& final_observation) const override;

 private:
  LQProblem problem_;
  Vector x0_;
};

EnvironmentFactory lq_factory(const LQProblem& problem, const Vector& x0);

}  // namespace klilqg::oracle
