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

#include "klilqg/arm.hpp"
#include "klilqg/types.hpp"

namespace klilqg {

/// Parameters of l(d) = d^2 + v ln(d^2 + alpha).
struct CostParams {
  double v = 0.1;
  double alpha = 1e-7;
  Eigen::Vector3d target{0.5, 0.5, 0.5};  // meters
};

void validate_cost(const CostParams& params);

double task_cost(const CostParams& params, double distance);

struct EnvConfig {
  State initial_state = State::Zero(7);
  int horizon = 10;
  // Fraction of the commanded displacement reached in one step, in (0, 1].
  double lag = 0.9;
  // Std of the zero-mean Gaussian noise on the measured position, meters.
  double sensor_noise_std = 0.0;
};

/// Simulated arm. The learner only gets joint angles, distance and cost.
///
/// Transition: the lagged displacement lag * (u - x) is clamped per joint to
/// the model's rate limit, added to x, and the result clamped to the joint
/// range.
class ArmEnvironment final : public Environment {
 public:
  ArmEnvironment(ArmModel model, EnvConfig config, CostParams cost, std::uint64_t seed = 0);

  int state_dim() const override { return model_.joint_count(); }
  int action_dim() const override { return model_.joint_count(); }
  int horizon() const override { return config_.horizon; }

  Observation reset() override;
  Observation step(const State& current, const Action& action) override;
  double terminal_cost(const Observation& final_observation) const override;

  // Observation of `q` without moving.
  Observation observe(const State& q);

  // Next joint configuration without measuring it.
  State transition(const State& current, const Action& action) const;

  const ArmModel& model() const { return model_; }
  const EnvConfig& config() const { return config_; }
  const CostParams& cost_params() const { return cost_; }

 private:
  ArmModel model_;
  EnvConfig config_;
  CostParams cost_;
  std::mt19937_64 noise_rng_;
};

EnvironmentFactory make_arm_factory(ArmModel model, EnvConfig config, CostParams cost);

}  // namespace klilqg
