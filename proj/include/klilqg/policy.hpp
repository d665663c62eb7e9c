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

#include <random>

#include "klilqg/types.hpp"

namespace klilqg {

// Random source used everywhere a rollout needs noise. One per rollout.
using Rng = std::mt19937_64;

// Jitter added to Sigma_t when its Cholesky factorization fails.
inline constexpr double kCovarianceJitter = 1e-12;

/// Policy with K_t = 0, k_t = `command`, Sigma_t = `variance` * I for every t.
LinearGaussianPolicy make_constant_policy(int horizon, int state_dim, const Action& command,
                                          double variance);

/// Throws UsageError on inconsistent shapes and InvariantViolation when a
/// covariance is asymmetric or not positive definite.
void validate_policy(const LinearGaussianPolicy& policy);

/// K_t x + k_t.
Action policy_mean_action(const LinearGaussianPolicy& policy, int t, const State& x);

/// Draws from N(K_t x + k_t, Sigma_t) using a Cholesky factor of Sigma_t.
Action sample_action(const LinearGaussianPolicy& policy, int t, const State& x, Rng& rng);

}  // namespace klilqg
