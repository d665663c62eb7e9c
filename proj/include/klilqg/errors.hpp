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

#include <stdexcept>
#include <string>

namespace klilqg {

// Caller passed arguments that break an operation's preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A data invariant (symmetry, positive definiteness, finiteness) was broken.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Environment produced a non-finite state or rejected an action.
class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RolloutError : public std::runtime_error {
 public:
  RolloutError(const std::string& what, int timestep, int rollout_index = -1)
      : std::runtime_error(what), timestep_(timestep), rollout_index_(rollout_index) {}

  int timestep() const noexcept { return timestep_; }
  // -1 when the failing rollout was not part of a batch.
  int rollout_index() const noexcept { return rollout_index_; }

 private:
  int timestep_;
  int rollout_index_;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, int timestep)
      : std::runtime_error(what), timestep_(timestep) {}

  int timestep() const noexcept { return timestep_; }

 private:
  int timestep_;
};

// No multiplier on the eta ladder made the update well posed.
class DualFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace klilqg
