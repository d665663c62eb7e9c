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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klilqg/model_fit.hpp"
#include "klilqg/policy.hpp"
#include "klilqg/types.hpp"

namespace klilqg {

/// Quadratic expansion of the state-action value around the nominal, with
/// z = [dx; du]: Q0 + Q_xu . z + 0.5 z' Q_xuxu z.
struct QExpansion {
  double Q0 = 0.0;
  Vector Q_xu;
  Matrix Q_xuxu;
  int state_dim = 0;

  int action_dim() const { return static_cast<int>(Q_xu.size()) - state_dim; }
  auto Q_x() const { return Q_xu.head(state_dim); }
  auto Q_u() const { return Q_xu.tail(action_dim()); }
  auto Q_xx() const { return Q_xuxu.topLeftCorner(state_dim, state_dim); }
  auto Q_ux() const { return Q_xuxu.bottomLeftCorner(action_dim(), state_dim); }
  auto Q_uu() const { return Q_xuxu.bottomRightCorner(action_dim(), action_dim()); }
};

struct ValueExpansion {
  double V0 = 0.0;
  Vector V_x;
  Matrix V_xx;
};

struct BackwardPassResult {
  // Set when Q_uu failed its Cholesky factorization; the policy is then incomplete.
  std::optional<int> failed_step;
  LinearGaussianPolicy policy;
  std::vector<ValueExpansion> values;  // T + 1 entries, values[T] is terminal
  std::vector<QExpansion> q;           // T entries

  bool ok() const { return !failed_step.has_value(); }
};

/// Backward Riccati-style recursion on local models.
///
/// The dynamics offset bias_t - xbar_{t+1} is carried through the value
/// recursion, so models fitted on noisy data need not pass exactly through the
/// nominal. Sigma_t = Q_uu^-1 is the maximum-entropy covariance.
BackwardPassResult backward_pass(const LinearDynamicsModel& dynamics,
                                 const QuadraticCostModel& cost,
                                 const NominalTrajectory& nominal);

/// (1/eta) l - log p_old(u | x), expanded around each term's center.
QuadraticCostModel modified_cost(const QuadraticCostModel& cost,
                                 const LinearGaussianPolicy& old_policy, double eta);

/// Sum over t of E_x[KL(new(.|x) || old(.|x))], with x distributed as the
/// Gaussian state marginal of `new_policy` under `dynamics` from `initial_state`.
double trajectory_kl(const LinearGaussianPolicy& new_policy, const LinearGaussianPolicy& old_policy,
                     const LinearDynamicsModel& dynamics, const State& initial_state);

struct DualState {
  double eta = 1e-6;
  double epsilon = 1e4;
  double eta_growth = 10.0;
  int max_dual_iterations = 16;
};

// Largest multiplier the eta ladder may reach.
inline constexpr double kMaxEta = 1e16;

/// Smallest eta on the ladder eta0 * growth^k for which the backward pass on
/// the modified cost has positive definite Q_uu everywhere. Throws DualFailure
/// past kMaxEta.
double initialize_eta_for_pd(const LinearDynamicsModel& dynamics, const QuadraticCostModel& cost,
                             const LinearGaussianPolicy& old_policy,
                             const NominalTrajectory& nominal, double eta0,
                             double growth = 10.0);

struct ConstrainedUpdate {
  LinearGaussianPolicy policy;
  double kl = 0.0;
  double eta = 0.0;
  bool satisfied = false;
  // (eta, KL) for every multiplier that produced a policy, in visiting order.
  std::vector<std::pair<double, double>> ladder;
};

/// Dual descent on eta: solve under the modified cost, raise eta while the
/// trajectory KL exceeds epsilon. Unsatisfied results carry the highest-eta
/// attempt.
ConstrainedUpdate constrained_update(const LinearDynamicsModel& dynamics,
                                     const QuadraticCostModel& cost,
                                     const LinearGaussianPolicy& old_policy,
                                     const NominalTrajectory& nominal, const DualState& dual);

struct SolverConfig {
  double epsilon_ini = 1e4;
  double epsilon_decrease = 0.5;
  int max_iterations = 16;
  // Evaluation distance below which the session stops, meters.
  double convergence_threshold = 1e-4;
  double eta_initial = 1e-6;
  double eta_growth = 10.0;
  int max_dual_iterations = 16;
  // Fit or dual failures in a row before the session aborts.
  int max_consecutive_failures = 3;
};

void validate_solver(const SolverConfig& config);

struct IterationRecord {
  int iteration = 0;
  // Incumbent after this iteration's accept/reject decision.
  double distance_mm = 0.0;
  double cost = 0.0;
  double eta = 0.0;
  double epsilon = 0.0;  // bound used by this iteration's update
  bool accepted = false;
  double kl = 0.0;
  double candidate_distance_mm = 0.0;
  double candidate_cost = 0.0;
  std::string failure;  // empty unless the update could not be computed
};

struct SessionResult {
  std::vector<IterationRecord> records;
  bool converged = false;
  int converged_iteration = 0;  // 0 if the initial policy already met the threshold
  double remaining_distance_mm = 0.0;
  double initial_distance_mm = 0.0;
  double initial_cost = 0.0;
  bool aborted = false;
  std::string abort_reason;
  LinearGaussianPolicy final_policy;
};

/// Test hook applied to the fitted models before each update.
using ModelFilter = std::function<void(int iteration, LinearDynamicsModel&, QuadraticCostModel&)>;

/// Alternates exploration, model fitting, constrained update and a
/// deterministic evaluation rollout. A candidate replaces the incumbent only
/// if its evaluation cost is lower; otherwise epsilon shrinks.
SessionResult ilqg_outer_loop(const EnvironmentFactory& factory,
                              const LinearGaussianPolicy& initial_policy,
                              const ExplorationConfig& explore, const SolverConfig& solver, Rng& rng,
                              const ModelFilter& filter = {});

}  // namespace klilqg
