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

#include "klilqg/errors.hpp"
#include "klilqg/oracles.hpp"

namespace klilqg::oracle {

namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

double stage_cost(const LQProblem& pr, const Vector& x, const Vector& u) {
  return 0.5 * x.dot(pr.Q * x) + 0.5 * u.dot(pr.R * u) + pr.q.dot(x) + pr.r.dot(u);
}

double final_cost(const LQProblem& pr, const Vector& x) {
  return 0.5 * x.dot(pr.Q_f * x) + pr.q_f.dot(x);
}

}  // namespace

LQProblem random_lq_problem(std::mt19937_64& rng, int n, int m, int horizon) {
  if (n < 1 || m < 1 || horizon < 0) throw UsageError("random_lq_problem: bad dimensions");
  LQProblem pr;
  pr.horizon = horizon;
  // Spectral radius kept near one so costs stay moderate over long horizons.
  const Matrix G = gaussian_matrix(rng, n, n);
  pr.A = Matrix::Identity(n, n) + 0.3 * G / std::sqrt(static_cast<double>(n));
  pr.B = gaussian_matrix(rng, n, m);
  pr.c = 0.1 * gaussian_matrix(rng, n, 1);
  const Matrix Lq = gaussian_matrix(rng, n, n);
  pr.Q = Lq * Lq.transpose() / n;
  const Matrix Lr = gaussian_matrix(rng, m, m);
  pr.R = Lr * Lr.transpose() / m + 0.5 * Matrix::Identity(m, m);
  pr.q = 0.5 * gaussian_matrix(rng, n, 1);
  pr.r = 0.5 * gaussian_matrix(rng, m, 1);
  const Matrix Lf = gaussian_matrix(rng, n, n);
  pr.Q_f = Lf * Lf.transpose() / n + Matrix::Identity(n, n);
  pr.q_f = 0.5 * gaussian_matrix(rng, n, 1);
  return pr;
}

LqModels lq_models(const LQProblem& pr, const NominalTrajectory& nominal) {
  if (nominal.horizon() != pr.horizon ||
      static_cast<int>(nominal.mean_states.size()) != pr.horizon + 1) {
    throw UsageError("lq_models: nominal horizon does not match the problem");
  }
  const int n = pr.state_dim();
  const int m = pr.action_dim();
  LqModels out;
  for (int t = 0; t < pr.horizon; ++t) {
    const Vector& x = nominal.mean_states[t];
    const Vector& u = nominal.mean_actions[t];
    Vector center(n + m);
    center << x, u;

    LinearStepModel dyn;
    dyn.F_xu.resize(n, n + m);
    dyn.F_xu << pr.A, pr.B;
    dyn.bias = pr.A * x + pr.B * u + pr.c;
    dyn.center = center;
    out.dynamics.steps.push_back(std::move(dyn));

    QuadraticTerm cost;
    cost.center = center;
    cost.l0 = stage_cost(pr, x, u);
    cost.gradient.resize(n + m);
    cost.gradient << pr.Q * x + pr.q, pr.R * u + pr.r;
    cost.hessian = Matrix::Zero(n + m, n + m);
    cost.hessian.topLeftCorner(n, n) = pr.Q;
    cost.hessian.bottomRightCorner(m, m) = pr.R;
    out.cost.steps.push_back(std::move(cost));
  }
  const Vector& xT = nominal.mean_states.back();
  out.cost.terminal.center = xT;
  out.cost.terminal.l0 = final_cost(pr, xT);
  out.cost.terminal.gradient = pr.Q_f * xT + pr.q_f;
  out.cost.terminal.hessian = pr.Q_f;
  return out;
}

LqEnvironment::LqEnvironment(LQProblem problem, Vector x0)
    : problem_(std::move(problem)), x0_(std::move(x0)) {
  if (x0_.size() != problem_.state_dim()) throw UsageError("LqEnvironment: x0 size mismatch");
}

Observation LqEnvironment::reset() { return {x0_, x0_.norm(), 0.0}; }

Observation LqEnvironment::step(const State& x, const Action& u) {
  const Vector next = problem_.A * x + problem_.B * u + problem_.c;
  return {next, next.norm(), stage_cost(problem_, x, u)};
}

double LqEnvironment::terminal_cost(const Observation& final_observation) const {
  return final_cost(problem_, final_observation.state);
}

EnvironmentFactory lq_factory(const LQProblem& problem, const Vector& x0) {
  return [problem, x0](std::uint64_t) -> std::unique_ptr<Environment> {
    return std::make_unique<LqEnvironment>(problem, x0);
  };
}

}  // namespace klilqg::oracle
