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
#include "klilqg/model_fit.hpp"
#include "klilqg/rollout.hpp"

namespace klilqg {

std::vector<Trajectory> collect_rollouts(const EnvironmentFactory& factory,
                                         const LinearGaussianPolicy& policy,
                                         const ExplorationConfig& config, Rng& rng) {
  validate_exploration(config);
  validate_policy(policy);
  // Seeds are drawn up front so each rollout owns an independent stream.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> seeds(config.samples);
  for (auto& [env_seed, policy_seed] : seeds) {
    env_seed = rng();
    policy_seed = rng();
  }
  std::vector<Trajectory> rollouts;
  rollouts.reserve(config.samples);
  for (int i = 0; i < config.samples; ++i) {
    auto env = factory(seeds[i].first);
    Rng local(seeds[i].second);
    try {
      rollouts.push_back(rollout(*env, policy, true, local));
    } catch (const RolloutError& e) {
      throw RolloutError(std::string(e.what()) + " (rollout " + std::to_string(i) + ")",
                         e.timestep(), i);
    }
  }
  return rollouts;
}

SampleSet group_by_timestep(const std::vector<Trajectory>& rollouts) {
  SampleSet set;
  if (rollouts.empty()) return set;
  const int horizon = rollouts.front().horizon();
  set.steps.resize(horizon);
  for (auto& bucket : set.steps) bucket.reserve(rollouts.size());
  set.terminal.reserve(rollouts.size());
  for (const auto& traj : rollouts) {
    if (traj.horizon() != horizon) throw UsageError("group_by_timestep: mixed horizons");
    for (int t = 0; t < horizon; ++t) {
      set.steps[t].push_back({traj.states[t], traj.actions[t], traj.states[t + 1], traj.costs[t]});
    }
    set.terminal.push_back({traj.states[horizon], traj.costs[horizon]});
  }
  return set;
}

SampleSet collect_samples(const EnvironmentFactory& factory, const LinearGaussianPolicy& policy,
                          const ExplorationConfig& config, Rng& rng) {
  return group_by_timestep(collect_rollouts(factory, policy, config, rng));
}

}  // namespace klilqg
