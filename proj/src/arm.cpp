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

#include "klilqg/arm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "klilqg/errors.hpp"

namespace klilqg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::Matrix4d dh_transform(const DhJoint& j, double q) {
  const double theta = j.theta_offset + q;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(j.alpha), sa = std::sin(j.alpha);
  Eigen::Matrix4d m;
  m << ct, -st * ca, st * sa, j.a * ct,
       st, ct * ca, -ct * sa, j.a * st,
       0.0, sa, ca, j.d,
       0.0, 0.0, 0.0, 1.0;
  return m;
}

}  // namespace

double ArmModel::reach() const {
  double total = 0.0;
  for (const auto& j : joints) total += std::abs(j.d) + std::abs(j.a);
  return total;
}

ArmModel iiwa14_model() {
  const double half_pi = std::numbers::pi / 2.0;
  ArmModel m;
  m.joints = {
      {0.360, 0.0, -half_pi, 0.0, -170 * kDeg, 170 * kDeg},
      {0.000, 0.0, half_pi, 0.0, -120 * kDeg, 120 * kDeg},
      {0.420, 0.0, half_pi, 0.0, -170 * kDeg, 170 * kDeg},
      {0.000, 0.0, -half_pi, 0.0, -120 * kDeg, 120 * kDeg},
      {0.400, 0.0, -half_pi, 0.0, -170 * kDeg, 170 * kDeg},
      {0.000, 0.0, half_pi, 0.0, -120 * kDeg, 120 * kDeg},
      {0.126, 0.0, 0.0, 0.0, -175 * kDeg, 175 * kDeg},
  };
  m.rate_limit = 0.2;
  return m;
}

void validate_arm(const ArmModel& model) {
  if (model.joints.empty()) throw UsageError("arm: no joints");
  for (std::size_t i = 0; i < model.joints.size(); ++i) {
    const auto& j = model.joints[i];
    if (!std::isfinite(j.d) || !std::isfinite(j.a) || !std::isfinite(j.alpha) ||
        !std::isfinite(j.theta_offset) || !std::isfinite(j.min_angle) ||
        !std::isfinite(j.max_angle)) {
      throw UsageError("arm: non-finite parameter in joint " + std::to_string(i));
    }
    if (!(j.min_angle < j.max_angle)) {
      throw UsageError("arm: empty joint range in joint " + std::to_string(i));
    }
  }
  if (!(model.rate_limit > 0.0)) throw UsageError("arm: rate_limit must be positive");
}

ArmModel arm_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("arm file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("arm file: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "joints" && key != "rate_limit") throw ConfigError("arm file: unknown key '" + key + "'");
  }
  ArmModel model;
  try {
    for (const auto& row : doc.at("joints")) {
      for (const auto& [key, _] : row.items()) {
        if (key != "d" && key != "a" && key != "alpha" && key != "theta_offset" && key != "min" &&
            key != "max") {
          throw ConfigError("arm file: unknown joint key '" + key + "'");
        }
      }
      DhJoint j;
      j.d = row.at("d").get<double>();
      j.a = row.at("a").get<double>();
      j.alpha = row.at("alpha").get<double>();
      j.theta_offset = row.value("theta_offset", 0.0);
      j.min_angle = row.at("min").get<double>();
      j.max_angle = row.at("max").get<double>();
      model.joints.push_back(j);
    }
    if (!doc.contains("rate_limit") || doc.at("rate_limit").is_null()) {
      model.rate_limit = std::numeric_limits<double>::infinity();
    } else {
      model.rate_limit = doc.at("rate_limit").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("arm file: ") + e.what());
  }
  try {
    validate_arm(model);
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
  return model;
}

ArmModel load_arm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open arm file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return arm_from_json(buf.str());
}

std::string arm_to_json(const ArmModel& model) {
  nlohmann::ordered_json doc;
  doc["joints"] = nlohmann::ordered_json::array();
  for (const auto& j : model.joints) {
    doc["joints"].push_back({{"d", j.d},
                             {"a", j.a},
                             {"alpha", j.alpha},
                             {"theta_offset", j.theta_offset},
                             {"min", j.min_angle},
                             {"max", j.max_angle}});
  }
  if (std::isfinite(model.rate_limit)) {
    doc["rate_limit"] = model.rate_limit;
  } else {
    doc["rate_limit"] = nullptr;
  }
  return doc.dump(2);
}

FkResult fk_position(const ArmModel& model, const State& q) {
  if (q.size() != model.joint_count()) {
    throw UsageError("fk_position: expected " + std::to_string(model.joint_count()) +
                     " joint angles, got " + std::to_string(q.size()));
  }
  FkResult result;
  Eigen::Matrix4d pose = Eigen::Matrix4d::Identity();
  for (int i = 0; i < model.joint_count(); ++i) {
    const auto& j = model.joints[i];
    double angle = q(i);
    if (angle < j.min_angle || angle > j.max_angle) {
      angle = std::clamp(angle, j.min_angle, j.max_angle);
      result.clamped = true;
    }
    pose = pose * dh_transform(j, angle);
  }
  result.position = pose.block<3, 1>(0, 3);
  return result;
}

}  // namespace klilqg
