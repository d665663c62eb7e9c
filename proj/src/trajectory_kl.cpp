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

#include <algorithm>
#include <cmath>
#include <string>

#include "klilqg/errors.hpp"
#include "klilqg/ilqg.hpp"
#include "klilqg/linalg.hpp"

namespace klilqg {

double trajectory_kl(const LinearGaussianPolicy& new_policy, const LinearGaussianPolicy& old_policy,
                     const LinearDynamicsModel& dynamics, const State& initial_state) {
  const int horizon = new_policy.horizon();
  if (old_policy.horizon() != horizon || dynamics.horizon() != horizon) {
    throw UsageError("trajectory_kl: horizons differ");
  }
  if (horizon == 0) return 0.0;
  const auto n = new_policy.state_dim();
  const auto m = new_policy.action_dim();
  if (old_policy.state_dim() != n || old_policy.action_dim() != m || initial_state.size() != n) {
    throw UsageError("trajectory_kl: dimensions differ");
  }

  Vector mean = initial_state;
  Matrix cov = Matrix::Zero(n, n);
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const Matrix& K_new = new_policy.gains[t];
    const Matrix& K_old = old_policy.gains[t];
    const Matrix& S_new = new_policy.covariances[t];
    const Matrix& S_old = old_policy.covariances[t];
    const auto precision_old = spd_inverse(S_old);
    const double logdet_new = spd_log_det(S_new);
    const double logdet_old = spd_log_det(S_old);
    if (!precision_old || !std::isfinite(logdet_new) || !std::isfinite(logdet_old)) {
      throw InvariantViolation("trajectory_kl: covariance not positive definite at t=" +
                               std::to_string(t));
    }

    // Mean difference (K_new - K_old) x + (k_new - k_old), averaged over x.
    const Matrix dK = K_new - K_old;
    const Vector dmean = dK * mean + new_policy.offsets[t] - old_policy.offsets[t];
    const double mean_term =
        dmean.dot(*precision_old * dmean) + (dK.transpose() * (*precision_old) * dK * cov).trace();
    const double cov_term = (*precision_old * S_new).trace() - static_cast<double>(m) +
                            logdet_old - logdet_new;
    total += 0.5 * (cov_term + mean_term);

    // Joint marginal of [x; u] under the new policy, pushed through the model.
    const Vector u_mean = K_new * mean + new_policy.offsets[t];
    Matrix joint_cov(n + m, n + m);
    joint_cov.topLeftCorner(n, n) = cov;
    joint_cov.topRightCorner(n, m) = cov * K_new.transpose();
    joint_cov.bottomLeftCorner(m, n) = K_new * cov;
    joint_cov.bottomRightCorner(m, m) = K_new * cov * K_new.transpose() + S_new;
    const LinearStepModel& step = dynamics.steps[t];
    mean = step.predict(mean, u_mean);
    cov = symmetrized(step.F_xu * joint_cov * step.F_xu.transpose());
  }
  // Round-off can leave identical policies a hair below zero.
  return std::max(total, 0.0);
}

}  // namespace klilqg
