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
#include <optional>
#include <string>
#include <vector>

#include "klilqg/arm.hpp"
#include "klilqg/arm_env.hpp"
#include "klilqg/ilqg.hpp"
#include "klilqg/model_fit.hpp"

namespace klilqg {

struct SessionConfig {
  ArmModel arm = iiwa14_model();
  EnvConfig env;
  ExplorationConfig exploration;
  SolverConfig solver;
  CostParams cost;
  std::uint64_t seed = 1;
};

/// Throws ConfigError listing every invalid field at once.
void validate_session(const SessionConfig& config);

/// Parses the JSON session schema documented in README.md. Relative `arm_file` paths
/// resolve against `base_dir`. Unknown keys are rejected.
SessionConfig session_from_json(const std::string& text, const std::string& base_dir = ".");
SessionConfig load_session(const std::string& path);
std::string session_to_json(const SessionConfig& config);

/// Initial exploration covariance entry in rad^2 for a cov_ini given in deg^2.
double initial_variance(const ExplorationConfig& exploration);

/// Fresh simulated arm, constant no-move initial policy, full learning loop.
SessionResult run_session(const SessionConfig& config);

struct SweepConfig {
  SessionConfig base;
  std::vector<double> cov_ini{1.0, 10.0, 100.0};
  std::vector<double> v{0.1, 1.0, 10.0};
  std::vector<double> alpha{1e-3, 1e-5, 1e-7};
  std::vector<double> eps_ini{100.0, 1000.0, 10000.0};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  // 0 picks the hardware concurrency.
  unsigned threads = 0;
};

void validate_sweep(const SweepConfig& config);
SweepConfig sweep_from_json(const std::string& text, const std::string& base_dir = ".");
SweepConfig load_sweep(const std::string& path);

enum class CellOutcome { kConverged, kRemaining, kFailed };

struct SweepCell {
  double cov_ini = 0.0;
  double v = 0.0;
  double alpha = 0.0;
  double eps_ini = 0.0;
  CellOutcome outcome = CellOutcome::kRemaining;
  int iterations = 0;         // iterations to converge, or iterations run
  double remaining_mm = 0.0;  // final incumbent distance
  std::uint64_t seed = 0;     // seed of the representative (median) run
  std::string error;          // set for kFailed
};

/// Session with one cell's parameters and seed applied to the base config.
SessionConfig cell_config(const SessionConfig& base, double cov_ini, double v, double alpha,
                          double eps_ini, std::uint64_t seed);

/// Median run among seeds: converged runs rank ahead of unconverged ones,
/// converged by iteration count, the rest by remaining distance. Ties keep
/// seed order; even counts take the lower median.
SweepCell summarize_cell(const std::vector<SweepCell>& runs);

/// Every grid cell, nested cov_ini, v, eps_ini, alpha from outermost to
/// innermost, independent of which thread finished first.
std::vector<SweepCell> run_sweep(const SweepConfig& config);

std::string outcome_name(CellOutcome outcome);

std::string session_csv(const SessionResult& result);
std::string session_json(const SessionResult& result, const SessionConfig& config);
std::string sweep_csv(const std::vector<SweepCell>& cells);
std::string sweep_json(const std::vector<SweepCell>& cells);

}  // namespace klilqg
