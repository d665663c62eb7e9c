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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "klilqg/errors.hpp"
#include "klilqg/model_fit.hpp"

namespace klilqg {

namespace {

struct RidgeFit {
  Matrix coefficients;  // features x outputs
  double residual_rms = 0.0;
};

// Least squares of `targets` on `features` (column 0 is the intercept).
//
// Every other column is scaled to unit RMS before solving and `ridge * rows`
// is added to the scaled Gram diagonal, so the regularizer is relative to the
// spread of each feature. Columns marked unusable (no spread above round-off
// in the data) get a zero coefficient.
RidgeFit ridge_solve(const Matrix& features, const Matrix& targets, double ridge, int timestep,
                     const std::vector<bool>& usable) {
  const Eigen::Index rows = features.rows();
  const Eigen::Index cols = features.cols();

  std::vector<Eigen::Index> active;
  Vector scale = Vector::Ones(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double rms = std::sqrt(features.col(j).squaredNorm() / static_cast<double>(rows));
    if (j == 0 || (usable[j] && rms > 0.0)) {
      active.push_back(j);
      if (j != 0) scale(j) = rms;
    }
  }
  const auto k = static_cast<Eigen::Index>(active.size());
  const bool regularized = ridge > 0.0;
  const Eigen::Index aug_rows = rows + (regularized ? k - 1 : 0);

  Matrix a = Matrix::Zero(aug_rows, k);
  Matrix b = Matrix::Zero(aug_rows, targets.cols());
  for (Eigen::Index c = 0; c < k; ++c) {
    a.block(0, c, rows, 1) = features.col(active[c]) / scale(active[c]);
  }
  b.topRows(rows) = targets;
  if (regularized) {
    const double penalty = std::sqrt(ridge * static_cast<double>(rows));
    for (Eigen::Index c = 1; c < k; ++c) a(rows + c - 1, c) = penalty;
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < k) {
    throw FitError("regression: singular normal equations at timestep " +
                       std::to_string(timestep) + " (" + std::to_string(rows) + " samples, " +
                       std::to_string(k) + " features)",
                   timestep);
  }
  const Matrix solved = qr.solve(b);
  if (!solved.allFinite()) {
    throw FitError("regression: non-finite coefficients at timestep " + std::to_string(timestep),
                   timestep);
  }

  RidgeFit fit;
  fit.coefficients = Matrix::Zero(cols, targets.cols());
  for (Eigen::Index c = 0; c < k; ++c) {
    fit.coefficients.row(active[c]) = solved.row(c) / scale(active[c]);
  }
  const Matrix residual = features * fit.coefficients - targets;
  fit.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()));
  return fit;
}

// Spread of a centered coordinate below this is round-off, not exploration.
constexpr double kSpreadFloor = 1e-12;

// Flags the coordinates of the centered points in `centered` whose RMS exceeds
// the round-off floor relative to the center's magnitude.
std::vector<bool> informative_coordinates(const Matrix& centered, const Vector& center) {
  std::vector<bool> usable(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    const double rms =
        std::sqrt(centered.col(i).squaredNorm() / static_cast<double>(centered.rows()));
    usable[i] = rms > kSpreadFloor * (1.0 + std::abs(center(i)));
  }
  return usable;
}

std::vector<bool> linear_mask(const std::vector<bool>& coords) {
  std::vector<bool> mask{true};
  mask.insert(mask.end(), coords.begin(), coords.end());
  return mask;
}

std::vector<bool> quadratic_mask(const std::vector<bool>& coords) {
  std::vector<bool> mask = linear_mask(coords);
  const auto d = coords.size();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) mask.push_back(coords[i] && coords[j]);
  }
  return mask;
}

// [1, z, z_i z_j for i <= j].
void quadratic_features(const Vector& z, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  const auto d = z.size();
  row(0) = 1.0;
  row.segment(1, d) = z.transpose();
  Eigen::Index c = 1 + d;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) row(c++) = z(i) * z(j);
  }
}

QuadraticTerm unpack_quadratic(const Vector& coef, const Vector& center, double rms) {
  const auto d = center.size();
  QuadraticTerm term;
  term.center = center;
  term.l0 = coef(0);
  term.gradient = coef.segment(1, d);
  term.hessian = Matrix::Zero(d, d);
  Eigen::Index c = 1 + d;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      if (i == j) {
        term.hessian(i, i) = 2.0 * coef(c);
      } else {
        term.hessian(i, j) = coef(c);
        term.hessian(j, i) = coef(c);
      }
      ++c;
    }
  }
  term.residual_rms = rms;
  return term;
}

Vector joint_vector(const State& x, const Action& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

void check_shapes(const SampleSet& samples, const NominalTrajectory& nominal) {
  if (samples.horizon() != nominal.horizon()) {
    throw UsageError("fit: sample horizon " + std::to_string(samples.horizon()) +
                     " does not match nominal horizon " + std::to_string(nominal.horizon()));
  }
  if (static_cast<int>(nominal.mean_states.size()) != nominal.horizon() + 1) {
    throw UsageError("fit: nominal needs T + 1 states");
  }
}

// Timesteps whose samples feed the fit at t.
std::pair<int, int> pool_range(int t, int horizon, int pooling) {
  const int width = std::min(2 * pooling + 1, horizon);
  const int lo = std::clamp(t - pooling, 0, horizon - width);
  return {lo, lo + width - 1};
}

}  // namespace

void validate_exploration(const ExplorationConfig& config) {
  if (config.samples < 1) throw UsageError("exploration: samples must be >= 1");
  if (!(config.cov_ini > 0.0) || !std::isfinite(config.cov_ini)) {
    throw UsageError("exploration: cov_ini must be > 0");
  }
  if (!(config.ridge >= 0.0) || !std::isfinite(config.ridge)) {
    throw UsageError("exploration: ridge must be >= 0");
  }
  if (config.pooling < 0) throw UsageError("exploration: pooling must be >= 0");
}

Vector LinearStepModel::predict(const State& x, const Action& u) const {
  return bias + F_xu * (joint_vector(x, u) - center);
}

double QuadraticTerm::evaluate(const Vector& point) const {
  const Vector z = point - center;
  return l0 + gradient.dot(z) + 0.5 * z.dot(hessian * z);
}

LinearDynamicsModel fit_dynamics(const SampleSet& samples, const NominalTrajectory& nominal,
                                 const ExplorationConfig& config) {
  check_shapes(samples, nominal);
  const int horizon = samples.horizon();
  LinearDynamicsModel model;
  model.steps.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    const Vector center = joint_vector(nominal.mean_states[t], nominal.mean_actions[t]);
    const auto d = center.size();
    const auto n = nominal.mean_states[t + 1].size();
    const auto [lo, hi] = pool_range(t, horizon, config.pooling);
    Eigen::Index rows = 0;
    for (int s = lo; s <= hi; ++s) rows += static_cast<Eigen::Index>(samples.steps[s].size());

    Matrix features(rows, 1 + d);
    Matrix targets(rows, n);
    Eigen::Index r = 0;
    for (int s = lo; s <= hi; ++s) {
      for (const auto& sample : samples.steps[s]) {
        features(r, 0) = 1.0;
        features.block(r, 1, 1, d) = (joint_vector(sample.x, sample.u) - center).transpose();
        targets.row(r) = sample.x_next.transpose();
        ++r;
      }
    }
    const auto usable = informative_coordinates(features.rightCols(d), center);
    const RidgeFit fit = ridge_solve(features, targets, config.ridge, t, linear_mask(usable));
    LinearStepModel step;
    step.center = center;
    step.bias = fit.coefficients.row(0).transpose();
    step.F_xu = fit.coefficients.bottomRows(d).transpose();
    step.residual_rms = fit.residual_rms;
    model.steps.push_back(std::move(step));
  }
  return model;
}

QuadraticCostModel fit_cost(const SampleSet& samples, const NominalTrajectory& nominal,
                            const ExplorationConfig& config) {
  check_shapes(samples, nominal);
  const int horizon = samples.horizon();
  QuadraticCostModel model;
  model.steps.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    const Vector center = joint_vector(nominal.mean_states[t], nominal.mean_actions[t]);
    const auto d = static_cast<int>(center.size());
    const auto [lo, hi] = pool_range(t, horizon, config.pooling);
    Eigen::Index rows = 0;
    for (int s = lo; s <= hi; ++s) rows += static_cast<Eigen::Index>(samples.steps[s].size());

    Matrix features(rows, quadratic_feature_count(d));
    Matrix targets(rows, 1);
    Eigen::Index r = 0;
    for (int s = lo; s <= hi; ++s) {
      for (const auto& sample : samples.steps[s]) {
        quadratic_features(joint_vector(sample.x, sample.u) - center, features.row(r));
        targets(r, 0) = sample.cost;
        ++r;
      }
    }
    const auto usable = informative_coordinates(features.middleCols(1, d), center);
    const RidgeFit fit = ridge_solve(features, targets, config.ridge, t, quadratic_mask(usable));
    model.steps.push_back(unpack_quadratic(fit.coefficients.col(0), center, fit.residual_rms));
  }

  const State& final_center = nominal.mean_states.back();
  const auto n = static_cast<int>(final_center.size());
  const auto rows = static_cast<Eigen::Index>(samples.terminal.size());
  if (rows == 0) throw FitError("fit_cost: no terminal samples", horizon);
  Matrix features(rows, quadratic_feature_count(n));
  Matrix targets(rows, 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    quadratic_features(samples.terminal[r].x - final_center, features.row(r));
    targets(r, 0) = samples.terminal[r].cost;
  }
  const auto usable = informative_coordinates(features.middleCols(1, n), final_center);
  const RidgeFit fit =
      ridge_solve(features, targets, config.ridge, horizon, quadratic_mask(usable));
  model.terminal = unpack_quadratic(fit.coefficients.col(0), final_center, fit.residual_rms);
  return model;
}

}  // namespace klilqg
