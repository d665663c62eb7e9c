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

#include <cstdint>
#include <memory>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace klilqg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Joint angles in radians, column vector of length n.
using State = Eigen::VectorXd;
// Commanded joint targets in radians, column vector of length m.
using Action = Eigen::VectorXd;

/// A sampled or deterministic episode.
///
/// `costs[t]` for t < T is the cost reported for the transition taken at t;
/// `costs[T]` is the terminal cost of the final state.
struct Trajectory {
  std::vector<State> states;
  std::vector<Action> actions;
  std::vector<double> costs;
  // Sensor distance reported with the final state, meters.
  double final_distance = 0.0;

  int horizon() const { return static_cast<int>(actions.size()); }
};

/// Time-varying linear-Gaussian controller u_t ~ N(K_t x_t + k_t, Sigma_t).
struct LinearGaussianPolicy {
  std::vector<Matrix> gains;        // K_t, m x n
  std::vector<Vector> offsets;      // k_t, m
  std::vector<Matrix> covariances;  // Sigma_t, m x m

  int horizon() const { return static_cast<int>(gains.size()); }
  int state_dim() const { return gains.empty() ? 0 : static_cast<int>(gains.front().cols()); }
  int action_dim() const { return gains.empty() ? 0 : static_cast<int>(gains.front().rows()); }
};

/// Mean states/actions of a deterministic rollout of the policy mean.
struct NominalTrajectory {
  std::vector<State> mean_states;   // T + 1 entries
  std::vector<Action> mean_actions;  // T entries

  int horizon() const { return static_cast<int>(mean_actions.size()); }
};

/// What the learner sees after an environment transition.
struct Observation {
  State state;
  double distance = 0.0;  // meters; zero for environments without a target
  double cost = 0.0;
};

/// Black-box episodic environment. The learner may only reset and step.
///
/// Instances are not shared between concurrent rollouts; create one per
/// rollout through an EnvironmentFactory.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual int horizon() const = 0;

  // Initial state plus its observation.
  virtual Observation reset() = 0;
  // Transition from `current` under `action`; `cost` is the transition cost.
  virtual Observation step(const State& current, const Action& action) = 0;
  // Cost charged on the final state of an episode.
  virtual double terminal_cost(const Observation& final_observation) const = 0;
};

// Builds an independent environment; the seed drives any sensor noise.
using EnvironmentFactory = std::function<std::unique_ptr<Environment>(std::uint64_t seed)>;

}  // namespace klilqg
