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

#include <nlohmann/json.hpp>

#include "klilqg/model_fit.hpp"

namespace klilqg {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

// Row-major nested arrays.
Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Vector row = m.row(i).transpose();
    rows.push_back(to_json(row));
  }
  return rows;
}

Json to_json(const QuadraticTerm& term) {
  return Json{{"center", to_json(term.center)},
              {"l0", term.l0},
              {"gradient", to_json(term.gradient)},
              {"hessian", to_json(term.hessian)},
              {"residual_rms", term.residual_rms}};
}

}  // namespace

std::string samples_to_json(const SampleSet& samples) {
  Json doc;
  doc["horizon"] = samples.horizon();
  doc["sample_count"] = samples.sample_count();
  Json steps = Json::array();
  for (const auto& bucket : samples.steps) {
    Json tuples = Json::array();
    for (const auto& s : bucket) {
      tuples.push_back(
          {{"x", to_json(s.x)}, {"u", to_json(s.u)}, {"x_next", to_json(s.x_next)}, {"cost", s.cost}});
    }
    steps.push_back(std::move(tuples));
  }
  doc["steps"] = std::move(steps);
  Json terminal = Json::array();
  for (const auto& s : samples.terminal) terminal.push_back({{"x", to_json(s.x)}, {"cost", s.cost}});
  doc["terminal"] = std::move(terminal);
  return doc.dump(1);
}

std::string dynamics_to_json(const LinearDynamicsModel& model) {
  Json steps = Json::array();
  for (const auto& s : model.steps) {
    steps.push_back({{"center", to_json(s.center)},
                     {"bias", to_json(s.bias)},
                     {"F_xu", to_json(s.F_xu)},
                     {"residual_rms", s.residual_rms}});
  }
  return Json{{"horizon", model.horizon()}, {"steps", std::move(steps)}}.dump(1);
}

std::string cost_to_json(const QuadraticCostModel& model) {
  Json steps = Json::array();
  for (const auto& s : model.steps) steps.push_back(to_json(s));
  return Json{{"horizon", model.horizon()}, {"steps", std::move(steps)}, {"terminal", to_json(model.terminal)}}
      .dump(1);
}

}  // namespace klilqg
