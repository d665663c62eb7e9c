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

#include "klilqg/linalg.hpp"

#include <cmath>

namespace klilqg {

std::optional<Matrix> cholesky_lower(const Matrix& a) {
  if (a.rows() != a.cols() || !a.allFinite()) return std::nullopt;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) return std::nullopt;
  }
  return l;
}

std::optional<Matrix> spd_inverse(const Matrix& a) {
  if (a.rows() != a.cols() || !a.allFinite()) return std::nullopt;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Matrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) return std::nullopt;
  }
  Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  if (!inv.allFinite()) return std::nullopt;
  return symmetrized(inv);
}

bool is_positive_definite(const Matrix& a, double min_eigenvalue) {
  if (a.rows() != a.cols() || !a.allFinite()) return false;
  if (a.size() == 0) return true;
  if (asymmetry(a) > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff())) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(a), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() > min_eigenvalue;
}

double spd_log_det(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nan("");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace klilqg
