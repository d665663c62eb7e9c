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
#include "klilqg/rollout.hpp"

namespace klilqg {

void validate_solver(const SolverConfig& config) {
  if (!(config.epsilon_ini > 0.0)) throw UsageError("solver: epsilon_ini must be > 0");
  if (!(config.epsilon_decrease > 0.0 && config.epsilon_decrease < 1.0)) {
    throw UsageError("solver: epsilon_decrease must be in (0, 1)");
  }
  if (config.max_iterations < 0) throw UsageError("solver: max_iterations must be >= 0");
  if (!(config.convergence_threshold > 0.0)) {
    throw UsageError("solver: convergence threshold must be > 0");
  }
  if (!(config.eta_initial > 0.0) || !std::isfinite(config.eta_initial)) {
    throw UsageError("solver: eta_initial must be finite and > 0");
  }
  if (!(config.eta_growth > 1.0)) throw UsageError("solver: eta_growth must be > 1");
  if (config.max_dual_iterations < 1) throw UsageError("solver: max_dual_iterations must be >= 1");
  if (config.max_consecutive_failures < 1) {
    throw UsageError("solver: max_consecutive_failures must be >= 1");
  }
}

namespace {

struct Evaluation {
  Trajectory traj;
  double cost = 0.0;
  double distance_mm = 0.0;
};

Evaluation evaluate(const EnvironmentFactory& factory, const LinearGaussianPolicy& policy,
                    Rng& rng) {
  auto env = factory(rng());
  Rng unused(0);
  Evaluation e;
  e.traj = rollout(*env, policy, false, unused);
  e.cost = trajectory_total_cost(e.traj);
  e.distance_mm = 1e3 * e.traj.final_distance;
  return e;
}

}  // namespace

SessionResult ilqg_outer_loop(const EnvironmentFactory& factory,
                              const LinearGaussianPolicy& initial_policy,
                              const ExplorationConfig& explore, const SolverConfig& solver, Rng& rng,
                              const ModelFilter& filter) {
  validate_solver(solver);
  validate_exploration(explore);
  validate_policy(initial_policy);

  SessionResult result;
  LinearGaussianPolicy incumbent = initial_policy;
  Evaluation best = evaluate(factory, incumbent, rng);
  result.initial_distance_mm = best.distance_mm;
  result.initial_cost = best.cost;
  result.remaining_distance_mm = best.distance_mm;
  result.final_policy = incumbent;
  const double threshold_mm = 1e3 * solver.convergence_threshold;
  if (best.distance_mm < threshold_mm) {
    result.converged = true;
    return result;
  }

  double epsilon = solver.epsilon_ini;
  int failures = 0;
  for (int it = 1; it <= solver.max_iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    rec.epsilon = epsilon;
    const NominalTrajectory nominal = nominal_from(best.traj);
    try {
      const SampleSet samples = collect_samples(factory, incumbent, explore, rng);
      LinearDynamicsModel dynamics = fit_dynamics(samples, nominal, explore);
      QuadraticCostModel cost = fit_cost(samples, nominal, explore);
      if (filter) filter(it, dynamics, cost);

      DualState dual;
      dual.epsilon = epsilon;
      dual.eta_growth = solver.eta_growth;
      dual.max_dual_iterations = solver.max_dual_iterations;
      dual.eta =
          initialize_eta_for_pd(dynamics, cost, incumbent, nominal, solver.eta_initial, solver.eta_growth);
      ConstrainedUpdate update = constrained_update(dynamics, cost, incumbent, nominal, dual);
      rec.eta = update.eta;
      rec.kl = update.kl;
      if (!update.satisfied) throw DualFailure("KL bound not reached on the eta ladder");

      Evaluation candidate = evaluate(factory, update.policy, rng);
      rec.candidate_cost = candidate.cost;
      rec.candidate_distance_mm = candidate.distance_mm;
      if (candidate.cost < best.cost) {
        rec.accepted = true;
        incumbent = std::move(update.policy);
        best = std::move(candidate);
      } else {
        epsilon *= solver.epsilon_decrease;
      }
      failures = 0;
    } catch (const FitError& e) {
      rec.failure = e.what();
    } catch (const DualFailure& e) {
      rec.failure = e.what();
    } catch (const RolloutError& e) {
      rec.failure = e.what();
    }
    rec.distance_mm = best.distance_mm;
    rec.cost = best.cost;
    result.records.push_back(rec);

    if (!rec.failure.empty() && ++failures >= solver.max_consecutive_failures) {
      result.aborted = true;
      result.abort_reason = rec.failure;
      break;
    }
    if (best.distance_mm < threshold_mm) {
      result.converged = true;
      result.converged_iteration = it;
      break;
    }
  }
  result.remaining_distance_mm = best.distance_mm;
  result.final_policy = incumbent;
  return result;
}

}  // namespace klilqg
