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

#include "klilqg/policy.hpp"

#include <string>

#include "klilqg/errors.hpp"
#include "klilqg/linalg.hpp"

namespace klilqg {

LinearGaussianPolicy make_constant_policy(int horizon, int state_dim, const Action& command,
                                          double variance) {
  if (horizon < 0 || state_dim <= 0 || command.size() == 0) {
    throw UsageError("make_constant_policy: bad dimensions");
  }
  if (!(variance > 0.0)) throw UsageError("make_constant_policy: variance must be positive");
  const auto m = command.size();
  LinearGaussianPolicy p;
  p.gains.assign(horizon, Matrix::Zero(m, state_dim));
  p.offsets.assign(horizon, command);
  p.covariances.assign(horizon, variance * Matrix::Identity(m, m));
  return p;
}

void validate_policy(const LinearGaussianPolicy& policy) {
  const int horizon = policy.horizon();
  if (static_cast<int>(policy.offsets.size()) != horizon ||
      static_cast<int>(policy.covariances.size()) != horizon) {
    throw UsageError("policy: gains, offsets and covariances differ in length");
  }
  const int n = policy.state_dim();
  const int m = policy.action_dim();
  for (int t = 0; t < horizon; ++t) {
    if (policy.gains[t].rows() != m || policy.gains[t].cols() != n ||
        policy.offsets[t].size() != m || policy.covariances[t].rows() != m ||
        policy.covariances[t].cols() != m) {
      throw UsageError("policy: inconsistent shapes at t=" + std::to_string(t));
    }
    if (!policy.gains[t].allFinite() || !policy.offsets[t].allFinite()) {
      throw InvariantViolation("policy: non-finite parameters at t=" + std::to_string(t));
    }
    if (!is_positive_definite(policy.covariances[t])) {
      throw InvariantViolation("policy: covariance not symmetric positive definite at t=" +
                               std::to_string(t));
    }
  }
}

namespace {

void check_index(const LinearGaussianPolicy& policy, int t, const State& x) {
  if (t < 0 || t >= policy.horizon()) {
    throw UsageError("policy: timestep " + std::to_string(t) + " out of range");
  }
  if (x.size() != policy.gains[t].cols()) {
    throw UsageError("policy: state has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(policy.gains[t].cols()));
  }
}

}  // namespace

Action policy_mean_action(const LinearGaussianPolicy& policy, int t, const State& x) {
  check_index(policy, t, x);
  return policy.gains[t] * x + policy.offsets[t];
}

Action sample_action(const LinearGaussianPolicy& policy, int t, const State& x, Rng& rng) {
  Action mean = policy_mean_action(policy, t, x);
  const Matrix& sigma = policy.covariances[t];
  auto factor = cholesky_lower(sigma);
  if (!factor) {
    const Matrix jittered = sigma + kCovarianceJitter * Matrix::Identity(sigma.rows(), sigma.cols());
    factor = cholesky_lower(jittered);
  }
  if (!factor) {
    throw InvariantViolation("sample_action: covariance not positive definite at t=" +
                             std::to_string(t));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return mean + (*factor) * z;
}

}  // namespace klilqg
