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

#include <optional>

#include "klilqg/types.hpp"

namespace klilqg {

inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline double asymmetry(const Matrix& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

// Inverse of a symmetric matrix via Cholesky; nullopt if not positive definite.
std::optional<Matrix> spd_inverse(const Matrix& a);

// Lower Cholesky factor; nullopt if not positive definite.
std::optional<Matrix> cholesky_lower(const Matrix& a);

// Symmetric within 1e-10 and every eigenvalue strictly above `min_eigenvalue`.
bool is_positive_definite(const Matrix& a, double min_eigenvalue = 0.0);

// log det of a positive definite matrix via Cholesky.
double spd_log_det(const Matrix& a);

}  // namespace klilqg
