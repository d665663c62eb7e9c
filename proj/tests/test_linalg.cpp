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

#include <gtest/gtest.h>

#include "klilqg/linalg.hpp"
#include "test_support.hpp"

namespace klilqg {
namespace {

using testing::random_matrix;
using testing::random_spd;

TEST(Linalg, SpdInverseOfDiagonal) {
  Matrix a = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
  const auto inv = spd_inverse(a);
  ASSERT_TRUE(inv.has_value());
  EXPECT_NEAR((*inv)(2, 2), 1.0 / 3.0, 1e-15);
}

TEST(Linalg, RejectsIndefinite) {
  Matrix a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;
  EXPECT_FALSE(spd_inverse(a).has_value());
  EXPECT_FALSE(cholesky_lower(a).has_value());
  EXPECT_FALSE(is_positive_definite(a));
  EXPECT_FALSE(is_positive_definite(Matrix::Zero(2, 2)));
}

TEST(Linalg, RejectsAsymmetric) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 1e-6;
  EXPECT_FALSE(is_positive_definite(a));
}

TEST(Linalg, LogDetOfDiagonal) {
  Matrix a = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
  EXPECT_NEAR(spd_log_det(a), std::log(6.0), 1e-14);
}

TEST(LinalgProperty, InverseAndFactorRoundTrip) {
  Rng rng(11);
  for (int c = 0; c < 200; ++c) {
    const int n = 1 + c % 6;
    const Matrix a = random_spd(rng, n, 0.05);
    const auto inv = spd_inverse(a);
    const auto l = cholesky_lower(a);
    ASSERT_TRUE(inv && l);
    EXPECT_LT(((*inv) * a - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(((*l) * l->transpose() - a).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(asymmetry(*inv), 0.0);
    EXPECT_NEAR(spd_log_det(a), std::log(a.determinant()), 1e-9);
  }
}

TEST(LinalgProperty, SymmetrizedIsSymmetric) {
  Rng rng(12);
  for (int c = 0; c < 100; ++c) {
    const Matrix a = random_matrix(rng, 4, 4);
    EXPECT_EQ(asymmetry(symmetrized(a)), 0.0);
  }
}

}  // namespace
}  // namespace klilqg
