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
#include <string>

#include "klilqg/errors.hpp"
#include "klilqg/ilqg.hpp"

namespace klilqg {

double initialize_eta_for_pd(const LinearDynamicsModel& dynamics, const QuadraticCostModel& cost,
                             const LinearGaussianPolicy& old_policy,
                             const NominalTrajectory& nominal, double eta0, double growth) {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw UsageError("initialize_eta: eta0 must be > 0");
  if (!(growth > 1.0)) throw UsageError("initialize_eta: growth must be > 1");
  for (double eta = eta0; eta <= kMaxEta; eta *= growth) {
    if (backward_pass(dynamics, modified_cost(cost, old_policy, eta), nominal).ok()) return eta;
  }
  throw DualFailure("initialize_eta: no eta up to 1e16 makes Q_uu positive definite");
}

ConstrainedUpdate constrained_update(const LinearDynamicsModel& dynamics,
                                     const QuadraticCostModel& cost,
                                     const LinearGaussianPolicy& old_policy,
                                     const NominalTrajectory& nominal, const DualState& dual) {
  if (!(dual.eta > 0.0) || !std::isfinite(dual.eta)) {
    throw UsageError("constrained_update: eta must be finite and positive");
  }
  if (!(dual.epsilon > 0.0)) throw UsageError("constrained_update: epsilon must be positive");
  if (!(dual.eta_growth > 1.0) || dual.max_dual_iterations < 1) {
    throw UsageError("constrained_update: bad dual schedule");
  }
  const State& x0 = nominal.mean_states.front();

  ConstrainedUpdate best;
  bool have_policy = false;
  double eta = dual.eta;
  for (int i = 0; i < dual.max_dual_iterations && eta <= kMaxEta; ++i, eta *= dual.eta_growth) {
    BackwardPassResult pass = backward_pass(dynamics, modified_cost(cost, old_policy, eta), nominal);
    if (!pass.ok()) continue;
    const double kl = trajectory_kl(pass.policy, old_policy, dynamics, x0);
    best.ladder.emplace_back(eta, kl);
    best.policy = std::move(pass.policy);
    best.kl = kl;
    best.eta = eta;
    have_policy = true;
    if (kl <= dual.epsilon) {
      best.satisfied = true;
      return best;
    }
  }
  if (!have_policy) {
    throw DualFailure("constrained_update: no eta on the ladder gave a positive definite Q_uu");
  }
  return best;
}

}  // namespace klilqg
