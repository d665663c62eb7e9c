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

#include "klilqg/rollout.hpp"

#include <cmath>
#include <string>

#include "klilqg/errors.hpp"

namespace klilqg {

Trajectory rollout(Environment& env, const LinearGaussianPolicy& policy, bool stochastic,
                   Rng& rng) {
  const int horizon = env.horizon();
  if (policy.horizon() != horizon) {
    throw UsageError("rollout: policy horizon " + std::to_string(policy.horizon()) +
                     " does not match environment horizon " + std::to_string(horizon));
  }
  Trajectory traj;
  traj.states.reserve(horizon + 1);
  traj.actions.reserve(horizon);
  traj.costs.reserve(horizon + 1);

  Observation obs = env.reset();
  traj.states.push_back(obs.state);
  for (int t = 0; t < horizon; ++t) {
    const State& x = traj.states.back();
    Action u = stochastic ? sample_action(policy, t, x, rng) : policy_mean_action(policy, t, x);
    try {
      obs = env.step(x, u);
    } catch (const StepError& e) {
      throw RolloutError(std::string("rollout: ") + e.what(), t);
    }
    if (!obs.state.allFinite() || !std::isfinite(obs.cost)) {
      throw RolloutError("rollout: environment returned a non-finite state or cost", t);
    }
    traj.actions.push_back(std::move(u));
    traj.states.push_back(obs.state);
    traj.costs.push_back(obs.cost);
  }
  const double terminal = env.terminal_cost(obs);
  if (!std::isfinite(terminal)) {
    throw RolloutError("rollout: non-finite terminal cost", horizon);
  }
  traj.costs.push_back(terminal);
  traj.final_distance = obs.distance;
  return traj;
}

NominalTrajectory nominal_from(const Trajectory& deterministic) {
  return NominalTrajectory{deterministic.states, deterministic.actions};
}

double trajectory_total_cost(const Trajectory& traj) {
  double total = 0.0;
  for (double c : traj.costs) total += c;
  return total;
}

}  // namespace klilqg
