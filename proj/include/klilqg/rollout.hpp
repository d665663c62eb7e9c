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

#include "klilqg/policy.hpp"
#include "klilqg/types.hpp"

namespace klilqg {

/// Runs one episode of `policy` against `env`.
///
/// With `stochastic` false the policy mean is applied and `rng` is untouched.
/// Costs are the values the environment reported while stepping.
Trajectory rollout(Environment& env, const LinearGaussianPolicy& policy, bool stochastic,
                   Rng& rng);

/// Deterministic rollout packaged as the nominal trajectory of `policy`.
NominalTrajectory nominal_from(const Trajectory& deterministic);

double trajectory_total_cost(const Trajectory& traj);

}  // namespace klilqg
