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

#include "klilqg/arm_env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klilqg/errors.hpp"

namespace klilqg {

void validate_cost(const CostParams& params) {
  if (!(params.v >= 0.0) || !std::isfinite(params.v)) throw UsageError("cost: v must be >= 0");
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) {
    throw UsageError("cost: alpha must be > 0");
  }
  if (!params.target.allFinite()) throw UsageError("cost: target must be finite");
}

double task_cost(const CostParams& params, double distance) {
  const double d2 = distance * distance;
  return d2 + params.v * std::log(d2 + params.alpha);
}

ArmEnvironment::ArmEnvironment(ArmModel model, EnvConfig config, CostParams cost,
                               std::uint64_t seed)
    : model_(std::move(model)), config_(std::move(config)), cost_(cost), noise_rng_(seed) {
  validate_arm(model_);
  validate_cost(cost_);
  if (config_.horizon < 1) throw UsageError("env: horizon must be >= 1");
  if (!(config_.lag > 0.0 && config_.lag <= 1.0)) throw UsageError("env: lag must be in (0, 1]");
  if (!(config_.sensor_noise_std >= 0.0)) throw UsageError("env: sensor noise std must be >= 0");
  if (config_.initial_state.size() != model_.joint_count() || !config_.initial_state.allFinite()) {
    throw UsageError("env: initial state must have one finite angle per joint");
  }
}

Observation ArmEnvironment::observe(const State& q) {
  Observation obs;
  obs.state = q;
  Eigen::Vector3d measured = fk_position(model_, q).position;
  if (config_.sensor_noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, config_.sensor_noise_std);
    for (int i = 0; i < 3; ++i) measured(i) += noise(noise_rng_);
  }
  obs.distance = (measured - cost_.target).norm();
  obs.cost = task_cost(cost_, obs.distance);
  return obs;
}

Observation ArmEnvironment::reset() { return observe(config_.initial_state); }

State ArmEnvironment::transition(const State& current, const Action& action) const {
  if (current.size() != state_dim() || action.size() != action_dim()) {
    throw UsageError("env_step: dimension mismatch");
  }
  if (!action.allFinite()) throw StepError("env_step: non-finite action");
  if (!current.allFinite()) throw StepError("env_step: non-finite state");
  State next = current;
  for (int i = 0; i < state_dim(); ++i) {
    double delta = config_.lag * (action(i) - current(i));
    delta = std::clamp(delta, -model_.rate_limit, model_.rate_limit);
    const auto& j = model_.joints[i];
    next(i) = std::clamp(current(i) + delta, j.min_angle, j.max_angle);
  }
  return next;
}

Observation ArmEnvironment::step(const State& current, const Action& action) {
  return observe(transition(current, action));
}

double ArmEnvironment::terminal_cost(const Observation& final_observation) const {
  return final_observation.cost;
}

EnvironmentFactory make_arm_factory(ArmModel model, EnvConfig config, CostParams cost) {
  return [model = std::move(model), config = std::move(config), cost](std::uint64_t seed) {
    return std::make_unique<ArmEnvironment>(model, config, cost, seed);
  };
}

}  // namespace klilqg
