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

#include <string>
#include <vector>

#include "klilqg/policy.hpp"
#include "klilqg/types.hpp"

namespace klilqg {

struct TransitionSample {
  State x;
  Action u;
  State x_next;
  double cost = 0.0;
};

struct TerminalSample {
  State x;
  double cost = 0.0;
};

/// Exploration data grouped by timestep: `steps[t]` holds one tuple per
/// rollout, `terminal` the final states with their terminal costs.
struct SampleSet {
  std::vector<std::vector<TransitionSample>> steps;
  std::vector<TerminalSample> terminal;

  int horizon() const { return static_cast<int>(steps.size()); }
  int sample_count() const { return steps.empty() ? static_cast<int>(terminal.size())
                                                  : static_cast<int>(steps.front().size()); }
};

struct ExplorationConfig {
  int samples = 40;
  // Diagonal entry of the initial exploration covariance (see harness docs for units).
  double cov_ini = 1.0;
  // Added to the Gram diagonal of every non-intercept feature.
  double ridge = 1e-6;
  // Samples from t - pooling .. t + pooling contribute to timestep t's fit.
  int pooling = 2;
};

void validate_exploration(const ExplorationConfig& config);

/// x_{t+1} ~= bias + F_xu ([x; u] - center), with center the nominal (x_t, u_t).
struct LinearStepModel {
  Matrix F_xu;
  Vector bias;
  Vector center;
  double residual_rms = 0.0;

  Vector predict(const State& x, const Action& u) const;
  int state_dim() const { return static_cast<int>(F_xu.rows()); }
};

struct LinearDynamicsModel {
  std::vector<LinearStepModel> steps;

  int horizon() const { return static_cast<int>(steps.size()); }
};

/// l ~= l0 + gradient . z + 0.5 z' hessian z, with z = point - center.
struct QuadraticTerm {
  double l0 = 0.0;
  Vector gradient;
  Matrix hessian;
  Vector center;
  double residual_rms = 0.0;

  double evaluate(const Vector& point) const;
  int dim() const { return static_cast<int>(gradient.size()); }
};

/// `steps[t]` is a quadratic in [x_t; u_t]; `terminal` a quadratic in x_T.
struct QuadraticCostModel {
  std::vector<QuadraticTerm> steps;
  QuadraticTerm terminal;

  int horizon() const { return static_cast<int>(steps.size()); }
};

/// Runs `config.samples` stochastic rollouts, each on its own environment
/// instance and random stream split off `rng`.
SampleSet collect_samples(const EnvironmentFactory& factory, const LinearGaussianPolicy& policy,
                          const ExplorationConfig& config, Rng& rng);

/// Same as collect_samples but keeps the raw episodes.
std::vector<Trajectory> collect_rollouts(const EnvironmentFactory& factory,
                                         const LinearGaussianPolicy& policy,
                                         const ExplorationConfig& config, Rng& rng);

SampleSet group_by_timestep(const std::vector<Trajectory>& rollouts);

/// Ridge least squares of x_next on [x; u] (with intercept) around the nominal.
LinearDynamicsModel fit_dynamics(const SampleSet& samples, const NominalTrajectory& nominal,
                                 const ExplorationConfig& config);

/// Ridge least squares of cost on quadratic monomials of [x; u] - nominal.
QuadraticCostModel fit_cost(const SampleSet& samples, const NominalTrajectory& nominal,
                            const ExplorationConfig& config);

/// Number of regression features for a full quadratic in `dim` variables.
inline int quadratic_feature_count(int dim) { return 1 + dim + dim * (dim + 1) / 2; }

std::string samples_to_json(const SampleSet& samples);
std::string dynamics_to_json(const LinearDynamicsModel& model);
std::string cost_to_json(const QuadraticCostModel& model);

}  // namespace klilqg
