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
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "klilqg/harness.hpp"

namespace klilqg {

SessionResult run_session(const SessionConfig& config) {
  validate_session(config);
  EnvironmentFactory factory = make_arm_factory(config.arm, config.env, config.cost);
  // No-move start: every mean command equals the initial joint angles.
  const LinearGaussianPolicy initial =
      make_constant_policy(config.env.horizon, config.arm.joint_count(), config.env.initial_state,
                           initial_variance(config.exploration));
  Rng rng(config.seed);
  return ilqg_outer_loop(factory, initial, config.exploration, config.solver, rng);
}

namespace {

// Shortest round-trip text for a double, so files are stable across runs.
std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  std::string text = os.str();
  // Prefer the short form when it parses back to the same value.
  for (int p = 6; p < 17; ++p) {
    std::ostringstream shorter;
    shorter << std::setprecision(p) << x;
    if (std::stod(shorter.str()) == x) return shorter.str();
  }
  return text;
}

}  // namespace

std::string session_csv(const SessionResult& result) {
  std::ostringstream os;
  os << "iteration,distance_mm,cost,eta,epsilon,accepted\n";
  for (const auto& r : result.records) {
    os << r.iteration << ',' << num(r.distance_mm) << ',' << num(r.cost) << ',' << num(r.eta) << ','
       << num(r.epsilon) << ',' << (r.accepted ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string session_json(const SessionResult& result, const SessionConfig& config) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::parse(session_to_json(config));
  doc["initial_distance_mm"] = result.initial_distance_mm;
  doc["initial_cost"] = result.initial_cost;
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : result.records) {
    nlohmann::ordered_json rec{{"iteration", r.iteration},
                               {"distance_mm", r.distance_mm},
                               {"log10_distance_mm", std::log10(std::max(r.distance_mm, 1e-300))},
                               {"cost", r.cost},
                               {"eta", r.eta},
                               {"epsilon", r.epsilon},
                               {"accepted", r.accepted},
                               {"kl", r.kl},
                               {"candidate_distance_mm", r.candidate_distance_mm},
                               {"candidate_cost", r.candidate_cost}};
    if (!r.failure.empty()) rec["failure"] = r.failure;
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  doc["outcome"] = result.converged ? "converged" : "remaining";
  doc["iterations"] = result.converged ? result.converged_iteration
                                       : static_cast<int>(result.records.size());
  doc["remaining_mm"] = result.remaining_distance_mm;
  if (result.aborted) doc["abort_reason"] = result.abort_reason;
  return doc.dump(2);
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream os;
  os << "cov_ini,v,alpha,eps_ini,outcome,iterations,remaining_mm,seed\n";
  for (const auto& c : cells) {
    os << num(c.cov_ini) << ',' << num(c.v) << ',' << num(c.alpha) << ',' << num(c.eps_ini) << ','
       << outcome_name(c.outcome) << ',' << c.iterations << ',' << num(c.remaining_mm) << ','
       << c.seed << '\n';
  }
  return os.str();
}

std::string sweep_json(const std::vector<SweepCell>& cells) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json row{{"cov_ini", c.cov_ini},   {"v", c.v},
                               {"alpha", c.alpha},       {"eps_ini", c.eps_ini},
                               {"outcome", outcome_name(c.outcome)},
                               {"iterations", c.iterations},
                               {"remaining_mm", c.remaining_mm},
                               {"seed", c.seed}};
    if (!c.error.empty()) row["error"] = c.error;
    rows.push_back(std::move(row));
  }
  return rows.dump(2);
}

}  // namespace klilqg
