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

#include <Eigen/Dense>

#include "klilqg/types.hpp"

namespace klilqg {

/// One row of a standard Denavit-Hartenberg table plus the joint's range.
/// Transform i = Rz(theta_offset + q_i) * Tz(d) * Tx(a) * Rx(alpha).
struct DhJoint {
  double d = 0.0;      // meters
  double a = 0.0;      // meters
  double alpha = 0.0;  // radians
  double theta_offset = 0.0;
  double min_angle = -3.14159;
  double max_angle = 3.14159;
};

struct ArmModel {
  std::vector<DhJoint> joints;
  // Largest per-step joint change in radians; +inf disables the limit.
  double rate_limit = 0.2;

  int joint_count() const { return static_cast<int>(joints.size()); }
  // Upper bound on the end-effector distance from the base.
  double reach() const;
};

/// KUKA LBR iiwa 14 R820 geometry with its published joint ranges.
ArmModel iiwa14_model();

/// Throws UsageError if any row is non-finite, a range is empty, or the
/// chain has no joints.
void validate_arm(const ArmModel& model);

/// Parses the JSON arm schema documented in README.md.
ArmModel arm_from_json(const std::string& text);
ArmModel load_arm(const std::string& path);
std::string arm_to_json(const ArmModel& model);

struct FkResult {
  Eigen::Vector3d position;
  // True if any joint was outside its range and got clamped first.
  bool clamped = false;
};

FkResult fk_position(const ArmModel& model, const State& q);

}  // namespace klilqg
