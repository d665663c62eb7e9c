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
#include <numbers>
#include <string>

#include "klilqg/errors.hpp"
#include "klilqg/ilqg.hpp"
#include "klilqg/linalg.hpp"

namespace klilqg {

namespace {

Vector stack(const State& x, const Action& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

// The term's value, gradient and Hessian re-expressed around `point`.
QuadraticTerm recentered(const QuadraticTerm& term, const Vector& point) {
  if (term.center.size() == 0 || term.center == point) return term;
  QuadraticTerm out = term;
  const Vector shift = point - term.center;
  out.l0 = term.evaluate(point);
  out.gradient = term.gradient + term.hessian * shift;
  out.center = point;
  return out;
}

void check_models(const LinearDynamicsModel& dynamics, const QuadraticCostModel& cost,
                  const NominalTrajectory& nominal) {
  const int horizon = nominal.horizon();
  if (dynamics.horizon() != horizon || cost.horizon() != horizon ||
      static_cast<int>(nominal.mean_states.size()) != horizon + 1) {
    throw UsageError("backward_pass: models and nominal cover different horizons");
  }
  if (cost.terminal.gradient.size() != nominal.mean_states.back().size()) {
    throw UsageError("backward_pass: terminal cost has the wrong dimension");
  }
}

}  // namespace

BackwardPassResult backward_pass(const LinearDynamicsModel& dynamics,
                                 const QuadraticCostModel& cost,
                                 const NominalTrajectory& nominal) {
  check_models(dynamics, cost, nominal);
  const int horizon = nominal.horizon();

  BackwardPassResult result;
  result.values.resize(horizon + 1);
  result.q.resize(horizon);
  result.policy.gains.resize(horizon);
  result.policy.offsets.resize(horizon);
  result.policy.covariances.resize(horizon);

  const QuadraticTerm terminal = recentered(cost.terminal, nominal.mean_states.back());
  ValueExpansion value{terminal.l0, terminal.gradient, symmetrized(terminal.hessian)};
  result.values[horizon] = value;

  for (int t = horizon - 1; t >= 0; --t) {
    const State& x_bar = nominal.mean_states[t];
    const Action& u_bar = nominal.mean_actions[t];
    const auto n = static_cast<int>(x_bar.size());
    const auto m = static_cast<int>(u_bar.size());
    const Vector point = stack(x_bar, u_bar);

    const LinearStepModel& dyn = dynamics.steps[t];
    if (dyn.F_xu.rows() != nominal.mean_states[t + 1].size() || dyn.F_xu.cols() != n + m) {
      throw UsageError("backward_pass: dynamics shape mismatch at t=" + std::to_string(t));
    }
    const QuadraticTerm l = recentered(cost.steps[t], point);
    if (l.gradient.size() != n + m) {
      throw UsageError("backward_pass: cost shape mismatch at t=" + std::to_string(t));
    }
    // Predicted next state at the nominal minus the nominal next state.
    const Vector offset = dyn.bias + dyn.F_xu * (point - dyn.center) - nominal.mean_states[t + 1];
    const Vector vx_shifted = value.V_x + value.V_xx * offset;

    QExpansion q;
    q.state_dim = n;
    q.Q_xuxu = symmetrized(l.hessian + dyn.F_xu.transpose() * value.V_xx * dyn.F_xu);
    q.Q_xu = l.gradient + dyn.F_xu.transpose() * vx_shifted;
    q.Q0 = l.l0 + value.V0 + value.V_x.dot(offset) + 0.5 * offset.dot(value.V_xx * offset);

    const auto q_uu_inv = spd_inverse(Matrix(q.Q_uu()));
    if (!q_uu_inv) {
      result.failed_step = t;
      result.q[t] = std::move(q);
      return result;
    }
    const Matrix K = -(*q_uu_inv) * q.Q_ux();
    const Vector k_delta = -(*q_uu_inv) * q.Q_u();

    result.policy.gains[t] = K;
    result.policy.offsets[t] = u_bar + k_delta - K * x_bar;
    result.policy.covariances[t] = *q_uu_inv;

    // Minimizing form: V_xx = Q_xx - Q_ux' Q_uu^-1 Q_ux.
    value.V_xx = symmetrized(q.Q_xx() + q.Q_ux().transpose() * K);
    value.V_x = q.Q_x() + q.Q_ux().transpose() * k_delta;
    value.V0 = q.Q0 + 0.5 * q.Q_u().dot(k_delta);
    result.values[t] = value;
    result.q[t] = std::move(q);
  }
  return result;
}

QuadraticCostModel modified_cost(const QuadraticCostModel& cost,
                                 const LinearGaussianPolicy& old_policy, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw UsageError("modified_cost: eta must be > 0");
  if (old_policy.horizon() != cost.horizon()) {
    throw UsageError("modified_cost: policy and cost horizons differ");
  }
  const double scale = 1.0 / eta;
  QuadraticCostModel out;
  out.steps.reserve(cost.horizon());
  for (int t = 0; t < cost.horizon(); ++t) {
    const QuadraticTerm& term = cost.steps[t];
    const Matrix& K = old_policy.gains[t];
    const auto m = K.rows();
    const auto n = K.cols();
    if (term.center.size() != n + m) {
      throw UsageError("modified_cost: cost term and policy dimensions differ at t=" +
                       std::to_string(t));
    }
    const auto precision = spd_inverse(old_policy.covariances[t]);
    if (!precision) {
      throw InvariantViolation("modified_cost: old covariance not positive definite at t=" +
                               std::to_string(t));
    }
    // u - K x - k = residual + M z with z = [dx; du] around the term's center.
    Matrix M(m, n + m);
    M << -K, Matrix::Identity(m, m);
    const Vector residual =
        term.center.tail(m) - K * term.center.head(n) - old_policy.offsets[t];

    QuadraticTerm mod;
    mod.center = term.center;
    mod.hessian = symmetrized(scale * term.hessian + M.transpose() * (*precision) * M);
    mod.gradient = scale * term.gradient + M.transpose() * (*precision) * residual;
    mod.l0 = scale * term.l0 + 0.5 * residual.dot(*precision * residual) +
             0.5 * (static_cast<double>(m) * std::log(2.0 * std::numbers::pi) +
                    spd_log_det(old_policy.covariances[t]));
    out.steps.push_back(std::move(mod));
  }
  out.terminal = cost.terminal;
  out.terminal.l0 *= scale;
  out.terminal.gradient *= scale;
  out.terminal.hessian *= scale;
  return out;
}

}  // namespace klilqg
