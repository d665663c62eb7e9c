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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "klilqg/errors.hpp"
#include "klilqg/harness.hpp"

namespace klilqg {

namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

// Collects problems so a bad file is reported in one go.
class Problems {
 public:
  void add(std::string msg) { items_.push_back(std::move(msg)); }
  bool empty() const { return items_.empty(); }
  [[noreturn]] void raise(const std::string& prefix) const {
    std::string msg = prefix;
    for (const auto& item : items_) msg += "\n  - " + item;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> items_;
};

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where,
                    Problems& problems) {
  if (!obj.is_object()) {
    problems.add(where + " must be an object");
    return;
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) problems.add("unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out, const std::string& where, Problems& problems) {
  if (!obj.is_object() || !obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception&) {
    problems.add("'" + where + "." + key + "' has the wrong type");
  }
}

void read_vector(const Json& obj, const char* key, Vector& out, const std::string& where,
                 Problems& problems) {
  std::vector<double> values;
  if (!obj.is_object() || !obj.contains(key)) return;
  try {
    values = obj.at(key).get<std::vector<double>>();
  } catch (const Json::exception&) {
    problems.add("'" + where + "." + key + "' must be an array of numbers");
    return;
  }
  out = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void read_session(const Json& doc, const std::string& base_dir, SessionConfig& cfg,
                  Problems& problems) {
  reject_unknown(doc, {"seed", "arm_file", "env", "exploration", "solver", "cost"}, "session",
                 problems);
  if (!doc.is_object()) return;
  read(doc, "seed", cfg.seed, "session", problems);
  if (doc.contains("arm_file")) {
    std::string path;
    read(doc, "arm_file", path, "session", problems);
    if (!path.empty()) {
      std::filesystem::path p(path);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      try {
        cfg.arm = load_arm(p.string());
      } catch (const ConfigError& e) {
        problems.add(e.what());
      }
      cfg.env.initial_state = State::Zero(cfg.arm.joint_count());
    }
  }
  if (doc.contains("env")) {
    const Json& env = doc.at("env");
    reject_unknown(env, {"initial_state", "horizon", "lag", "sensor_noise_std"}, "env", problems);
    read_vector(env, "initial_state", cfg.env.initial_state, "env", problems);
    read(env, "horizon", cfg.env.horizon, "env", problems);
    read(env, "lag", cfg.env.lag, "env", problems);
    read(env, "sensor_noise_std", cfg.env.sensor_noise_std, "env", problems);
  }
  if (doc.contains("exploration")) {
    const Json& ex = doc.at("exploration");
    reject_unknown(ex, {"samples", "cov_ini", "ridge", "pooling"}, "exploration", problems);
    read(ex, "samples", cfg.exploration.samples, "exploration", problems);
    read(ex, "cov_ini", cfg.exploration.cov_ini, "exploration", problems);
    read(ex, "ridge", cfg.exploration.ridge, "exploration", problems);
    read(ex, "pooling", cfg.exploration.pooling, "exploration", problems);
  }
  if (doc.contains("solver")) {
    const Json& s = doc.at("solver");
    reject_unknown(s,
                   {"epsilon_ini", "epsilon_decrease", "max_iterations", "threshold_mm",
                    "eta_initial", "eta_growth", "max_dual_iterations", "max_consecutive_failures"},
                   "solver", problems);
    read(s, "epsilon_ini", cfg.solver.epsilon_ini, "solver", problems);
    read(s, "epsilon_decrease", cfg.solver.epsilon_decrease, "solver", problems);
    read(s, "max_iterations", cfg.solver.max_iterations, "solver", problems);
    double threshold_mm = cfg.solver.convergence_threshold * 1e3;
    read(s, "threshold_mm", threshold_mm, "solver", problems);
    cfg.solver.convergence_threshold = threshold_mm * 1e-3;
    read(s, "eta_initial", cfg.solver.eta_initial, "solver", problems);
    read(s, "eta_growth", cfg.solver.eta_growth, "solver", problems);
    read(s, "max_dual_iterations", cfg.solver.max_dual_iterations, "solver", problems);
    read(s, "max_consecutive_failures", cfg.solver.max_consecutive_failures, "solver", problems);
  }
  if (doc.contains("cost")) {
    const Json& c = doc.at("cost");
    reject_unknown(c, {"v", "alpha", "target"}, "cost", problems);
    read(c, "v", cfg.cost.v, "cost", problems);
    read(c, "alpha", cfg.cost.alpha, "cost", problems);
    Vector target = cfg.cost.target;
    read_vector(c, "target", target, "cost", problems);
    if (target.size() == 3) {
      cfg.cost.target = target;
    } else {
      problems.add("'cost.target' must have 3 entries");
    }
  }
}

void check(bool ok, const std::string& msg, Problems& problems) {
  if (!ok) problems.add(msg);
}

void collect_session_problems(const SessionConfig& c, Problems& problems) {
  try {
    validate_arm(c.arm);
  } catch (const UsageError& e) {
    problems.add(e.what());
  }
  const int joints = c.arm.joint_count();
  check(c.env.initial_state.size() == joints, "env.initial_state needs one angle per joint",
        problems);
  check(c.env.initial_state.allFinite(), "env.initial_state must be finite", problems);
  check(c.env.horizon >= 1, "env.horizon must be >= 1", problems);
  check(c.env.lag > 0.0 && c.env.lag <= 1.0, "env.lag must be in (0, 1]", problems);
  check(c.env.sensor_noise_std >= 0.0, "env.sensor_noise_std must be >= 0", problems);
  check(c.exploration.samples >= 2, "exploration.samples must be >= 2", problems);
  check(c.exploration.cov_ini > 0.0 && std::isfinite(c.exploration.cov_ini),
        "exploration.cov_ini must be > 0", problems);
  check(c.exploration.ridge >= 0.0, "exploration.ridge must be >= 0", problems);
  check(c.exploration.pooling >= 0, "exploration.pooling must be >= 0", problems);
  check(c.solver.epsilon_ini > 0.0, "solver.epsilon_ini must be > 0", problems);
  check(c.solver.epsilon_decrease > 0.0 && c.solver.epsilon_decrease < 1.0,
        "solver.epsilon_decrease must be in (0, 1)", problems);
  check(c.solver.max_iterations >= 0, "solver.max_iterations must be >= 0", problems);
  check(c.solver.convergence_threshold > 0.0, "solver.threshold_mm must be > 0", problems);
  check(c.solver.eta_initial > 0.0 && std::isfinite(c.solver.eta_initial),
        "solver.eta_initial must be finite and > 0", problems);
  check(c.solver.eta_growth > 1.0, "solver.eta_growth must be > 1", problems);
  check(c.solver.max_dual_iterations >= 1, "solver.max_dual_iterations must be >= 1", problems);
  check(c.solver.max_consecutive_failures >= 1, "solver.max_consecutive_failures must be >= 1",
        problems);
  check(c.cost.v >= 0.0 && std::isfinite(c.cost.v), "cost.v must be >= 0", problems);
  check(c.cost.alpha > 0.0 && std::isfinite(c.cost.alpha), "cost.alpha must be > 0", problems);
  check(c.cost.target.allFinite(), "cost.target must be finite", problems);
}

OJson vec_json(const Vector& v) { return OJson(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

double initial_variance(const ExplorationConfig& exploration) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  return exploration.cov_ini * kDegToRad * kDegToRad;
}

void validate_session(const SessionConfig& config) {
  Problems problems;
  collect_session_problems(config, problems);
  if (!problems.empty()) problems.raise("invalid session config:");
}

SessionConfig session_from_json(const std::string& text, const std::string& base_dir) {
  const Json doc = parse(text);
  SessionConfig cfg;
  Problems problems;
  read_session(doc, base_dir, cfg, problems);
  if (problems.empty()) collect_session_problems(cfg, problems);
  if (!problems.empty()) problems.raise("invalid session config:");
  return cfg;
}

SessionConfig load_session(const std::string& path) {
  return session_from_json(slurp(path), std::filesystem::path(path).parent_path().string());
}

std::string session_to_json(const SessionConfig& c) {
  OJson doc;
  doc["seed"] = c.seed;
  doc["env"] = {{"initial_state", vec_json(c.env.initial_state)},
                {"horizon", c.env.horizon},
                {"lag", c.env.lag},
                {"sensor_noise_std", c.env.sensor_noise_std}};
  doc["exploration"] = {{"samples", c.exploration.samples},
                        {"cov_ini", c.exploration.cov_ini},
                        {"ridge", c.exploration.ridge},
                        {"pooling", c.exploration.pooling}};
  doc["solver"] = {{"epsilon_ini", c.solver.epsilon_ini},
                   {"epsilon_decrease", c.solver.epsilon_decrease},
                   {"max_iterations", c.solver.max_iterations},
                   {"threshold_mm", c.solver.convergence_threshold * 1e3},
                   {"eta_initial", c.solver.eta_initial},
                   {"eta_growth", c.solver.eta_growth},
                   {"max_dual_iterations", c.solver.max_dual_iterations},
                   {"max_consecutive_failures", c.solver.max_consecutive_failures}};
  doc["cost"] = {{"v", c.cost.v}, {"alpha", c.cost.alpha}, {"target", vec_json(c.cost.target)}};
  return doc.dump(2);
}

void validate_sweep(const SweepConfig& config) {
  Problems problems;
  collect_session_problems(config.base, problems);
  check(!config.cov_ini.empty() && !config.v.empty() && !config.alpha.empty() &&
            !config.eps_ini.empty(),
        "sweep: every parameter list needs at least one value", problems);
  check(!config.seeds.empty(), "sweep: seeds must not be empty", problems);
  for (double x : config.cov_ini) check(x > 0.0, "sweep: cov_ini values must be > 0", problems);
  for (double x : config.v) check(x >= 0.0, "sweep: v values must be >= 0", problems);
  for (double x : config.alpha) check(x > 0.0, "sweep: alpha values must be > 0", problems);
  for (double x : config.eps_ini) check(x > 0.0, "sweep: eps_ini values must be > 0", problems);
  if (!problems.empty()) problems.raise("invalid sweep config:");
}

SweepConfig sweep_from_json(const std::string& text, const std::string& base_dir) {
  const Json doc = parse(text);
  SweepConfig cfg;
  Problems problems;
  reject_unknown(doc, {"base", "cov_ini", "v", "alpha", "eps_ini", "seeds", "threads"}, "sweep",
                 problems);
  if (doc.is_object()) {
    if (doc.contains("base")) read_session(doc.at("base"), base_dir, cfg.base, problems);
    read(doc, "cov_ini", cfg.cov_ini, "sweep", problems);
    read(doc, "v", cfg.v, "sweep", problems);
    read(doc, "alpha", cfg.alpha, "sweep", problems);
    read(doc, "eps_ini", cfg.eps_ini, "sweep", problems);
    read(doc, "seeds", cfg.seeds, "sweep", problems);
    read(doc, "threads", cfg.threads, "sweep", problems);
  }
  if (!problems.empty()) problems.raise("invalid sweep config:");
  validate_sweep(cfg);
  return cfg;
}

SweepConfig load_sweep(const std::string& path) {
  return sweep_from_json(slurp(path), std::filesystem::path(path).parent_path().string());
}

}  // namespace klilqg
