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

#include <string>

#include "klilqg/errors.hpp"
#include "klilqg/oracles.hpp"

namespace klilqg::oracle {

namespace {

void check(const LQProblem& pr) {
  const auto n = pr.A.rows();
  const auto m = pr.B.cols();
  if (pr.horizon < 0) throw UsageError("riccati_lqr: negative horizon");
  if (pr.A.cols() != n || pr.B.rows() != n || pr.c.size() != n || pr.Q.rows() != n ||
      pr.Q.cols() != n || pr.R.rows() != m || pr.R.cols() != m || pr.q.size() != n ||
      pr.r.size() != m || pr.Q_f.rows() != n || pr.Q_f.cols() != n || pr.q_f.size() != n) {
    throw UsageError("riccati_lqr: inconsistent problem dimensions");
  }
  Eigen::LLT<Matrix> llt(pr.R);
  if (llt.info() != Eigen::Success) throw UsageError("riccati_lqr: R is not positive definite");
}

}  // namespace

LqrSolution riccati_lqr(const LQProblem& pr) {
  check(pr);
  const int T = pr.horizon;
  LqrSolution sol;
  sol.K.resize(T);
  sol.k.resize(T);
  sol.P.resize(T + 1);
  sol.p.resize(T + 1);
  sol.s.resize(T + 1);
  sol.P[T] = pr.Q_f;
  sol.p[T] = pr.q_f;
  sol.s[T] = 0.0;
  for (int t = T - 1; t >= 0; --t) {
    const Matrix& P = sol.P[t + 1];
    const Vector& p = sol.p[t + 1];
    // Cost-to-go of (x, u): 0.5 [x;u]' H [x;u] + h'[x;u] + const.
    const Vector pc = P * pr.c + p;
    const Matrix H_uu = pr.R + pr.B.transpose() * P * pr.B;
    const Matrix H_ux = pr.B.transpose() * P * pr.A;
    const Vector h_u = pr.r + pr.B.transpose() * pc;
    const Matrix H_xx = pr.Q + pr.A.transpose() * P * pr.A;
    const Vector h_x = pr.q + pr.A.transpose() * pc;
    const double h0 = sol.s[t + 1] + 0.5 * pr.c.dot(P * pr.c) + p.dot(pr.c);

    Eigen::LLT<Matrix> llt(H_uu);
    if (llt.info() != Eigen::Success) {
      throw UsageError("riccati_lqr: control Hessian lost definiteness at t=" + std::to_string(t));
    }
    sol.K[t] = -llt.solve(H_ux);
    sol.k[t] = -llt.solve(h_u);
    sol.P[t] = H_xx + H_ux.transpose() * sol.K[t];
    sol.P[t] = 0.5 * (sol.P[t] + sol.P[t].transpose()).eval();
    sol.p[t] = h_x + H_ux.transpose() * sol.k[t];
    sol.s[t] = h0 + 0.5 * h_u.dot(sol.k[t]);
  }
  return sol;
}

double lq_rollout_cost(const LQProblem& pr, const LqrSolution& sol, const Vector& x0) {
  Vector x = x0;
  double total = 0.0;
  for (int t = 0; t < pr.horizon; ++t) {
    const Vector u = sol.K[t] * x + sol.k[t];
    total += 0.5 * x.dot(pr.Q * x) + 0.5 * u.dot(pr.R * u) + pr.q.dot(x) + pr.r.dot(u);
    x = pr.A * x + pr.B * u + pr.c;
  }
  return total + 0.5 * x.dot(pr.Q_f * x) + pr.q_f.dot(x);
}

}  // namespace klilqg::oracle
