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
#include <stdexcept>

#include "klilqg/oracles.hpp"

namespace klilqg::oracle {

FiniteDiffExpansion finite_diff_expansion(const std::function<double(const Vector&)>& f,
                                          const Vector& point, double rel_step) {
  if (!(rel_step > 0.0)) throw std::invalid_argument("finite_diff_expansion: step must be > 0");
  const auto d = point.size();
  auto eval = [&](const Vector& p) {
    const double v = f(p);
    if (!std::isfinite(v)) throw std::domain_error("finite_diff_expansion: non-finite evaluation");
    return v;
  };
  Vector h(d);
  for (Eigen::Index i = 0; i < d; ++i) h(i) = rel_step * (1.0 + std::abs(point(i)));

  FiniteDiffExpansion out;
  out.value = eval(point);
  out.gradient = Vector::Zero(d);
  out.hessian = Matrix::Zero(d, d);
  Vector p = point;
  for (Eigen::Index i = 0; i < d; ++i) {
    p(i) = point(i) + h(i);
    const double fp = eval(p);
    p(i) = point(i) - h(i);
    const double fm = eval(p);
    p(i) = point(i);
    out.gradient(i) = (fp - fm) / (2.0 * h(i));
    out.hessian(i, i) = (fp - 2.0 * out.value + fm) / (h(i) * h(i));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          p(i) = point(i) + si * h(i);
          p(j) = point(j) + sj * h(j);
          acc += si * sj * eval(p);
        }
      }
      p(i) = point(i);
      p(j) = point(j);
      const double mixed = acc / (4.0 * h(i) * h(j));
      out.hessian(i, j) = mixed;
      out.hessian(j, i) = mixed;
    }
  }
  return out;
}

}  // namespace klilqg::oracle
