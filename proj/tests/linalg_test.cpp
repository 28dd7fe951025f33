// Copyright 2026 The Authors.
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
#include <random>

#include <gtest/gtest.h>

#include "leadsel/linalg.hpp"
#include "test_util.hpp"

namespace leadsel {
namespace {

using testing::kronecker_lyapunov;
using testing::lu_inverse;
using testing::random_spd;

TEST(SymEigenvalues, KnownSpectra) {
  EXPECT_TRUE(sym_eigenvalues(Matrix::Identity(2, 2)).eigenvalues.isApprox(Vector::Ones(2)));

  Matrix q(2, 2);
  q << 2, -1, -1, 1;  // Q_{0} of K2: roots of l^2 - 3l + 1
  const Vector ev = sym_eigenvalues(q).eigenvalues;
  EXPECT_NEAR(ev(0), (3 - std::sqrt(5.0)) / 2, 1e-14);
  EXPECT_NEAR(ev(1), (3 + std::sqrt(5.0)) / 2, 1e-14);

  Matrix p3(3, 3);
  p3 << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  const Vector ev3 = sym_eigenvalues(p3).eigenvalues;
  EXPECT_NEAR(ev3(0), 0.0, 1e-14);
  EXPECT_NEAR(ev3(1), 1.0, 1e-14);
  EXPECT_NEAR(ev3(2), 3.0, 1e-14);
}

TEST(SymEigenvalues, RejectsAsymmetric) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  try {
    sym_eigenvalues(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSymmetric);
  }
}

TEST(SymEigenvalues, TraceDeterminantAndReconstruction) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (Eigen::Index n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      Matrix x(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) x(i, j) = z(rng);
      const Matrix m = x + x.transpose();
      const auto d = sym_eigenvalues(m, true);
      for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(d.eigenvalues(i - 1), d.eigenvalues(i));
      EXPECT_NEAR(d.eigenvalues.sum(), m.trace(), 1e-8 * std::max(1.0, std::abs(m.trace())));
      const double det = m.fullPivLu().determinant();
      EXPECT_NEAR(d.eigenvalues.prod(), det, 1e-8 * std::max(1.0, std::abs(det)));
      const Matrix rec = d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
      EXPECT_LE((rec - m).norm(), 1e-10 * m.norm());
    }
  }
}

TEST(SpdInverse, Examples) {
  EXPECT_TRUE(spd_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  Matrix d = Vector{{2.0, 4.0}}.asDiagonal();
  Matrix want = Vector{{0.5, 0.25}}.asDiagonal();
  EXPECT_LT((spd_inverse(d) - want).norm(), 1e-15);

  Matrix q(2, 2);
  q << 2, -1, -1, 1;
  Matrix inv_want(2, 2);
  inv_want << 1, 1, 1, 2;
  EXPECT_LT((spd_inverse(q) - inv_want).norm(), 1e-14);
  EXPECT_LE((q * spd_inverse(q) - Matrix::Identity(2, 2)).norm(), 1e-10 * 2);
}

TEST(SpdInverse, RejectsIndefinite) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_THROW(spd_inverse(m), Error);
  Matrix lap(2, 2);
  lap << 1, -1, -1, 1;  // singular
  try {
    spd_solve(lap + 0.0 * lap, Vector::Ones(2));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(SpdSolve, MatchesLu) {
  std::mt19937_64 rng(5);
  const Matrix m = random_spd(rng, 6);
  const Vector b = Vector::LinSpaced(6, -1.0, 2.0);
  EXPECT_LT((spd_solve(m, b) - m.fullPivLu().solve(b)).norm(), 1e-12);
}

TEST(ShermanMorrison, Scalars) {
  Matrix inv(1, 1);
  inv << 1.0;
  EXPECT_NEAR(sherman_morrison_update(inv, 0, 1.0)(0, 0), 0.5, 1e-15);
}

TEST(ShermanMorrison, AddLeaderToK2) {
  Matrix inv(2, 2);
  inv << 1, 1, 1, 2;  // (Q_{0})^-1 for K2
  Matrix want(2, 2);
  want << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
  EXPECT_LT((sherman_morrison_update(inv, 1, 1.0) - want).norm(), 1e-14);
}

TEST(ShermanMorrison, MatchesDirectInverseOnRandomSpd) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix m = random_spd(rng, 5);
    const auto idx = static_cast<NodeId>(rng() % 5);
    const double s = scale(rng);
    Matrix updated = m;
    updated(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) += s;
    const Matrix want = lu_inverse(updated);
    const Matrix got = sherman_morrison_update(lu_inverse(m), idx, s);
    EXPECT_LE((got - want).norm(), 1e-8 * want.norm());
  }
}

TEST(ShermanMorrison, ComposedUpdatesMatchDirectInversion) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m = random_spd(rng, 7);
    Matrix inv = lu_inverse(m);
    for (int k = 0; k < 6; ++k) {
      const auto idx = static_cast<NodeId>(rng() % 7);
      const double s = scale(rng);
      m(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) += s;
      inv = sherman_morrison_update(inv, idx, s);
    }
    const Matrix want = lu_inverse(m);
    EXPECT_LE((inv - want).norm(), 1e-8 * want.norm());
  }
}

TEST(ShermanMorrison, SingularDenominator) {
  Matrix inv(1, 1);
  inv << 1.0;
  try {
    sherman_morrison_update(inv, 0, -1.0);  // 1 + (-1)(1) = 0
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularUpdate);
  }
}

TEST(Lyapunov, Scalar) {
  Matrix a(1, 1), q(1, 1);
  a << -1;
  q << 1;
  EXPECT_NEAR(lyapunov_solve(a, q)(0, 0), 0.5, 1e-15);
}

TEST(Lyapunov, SecondOrderSingleNode) {
  // A = [[0,1],[-1,-1]], BB^T = diag(0,1): hand solution P = diag(1/2, 1/2).
  Matrix a(2, 2), q(2, 2);
  a << 0, 1, -1, -1;
  q << 0, 0, 0, 1;
  const Matrix p = lyapunov_solve(a, q);
  EXPECT_NEAR(p(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(p(1, 1), 0.5, 1e-14);
  EXPECT_NEAR(p(0, 1), 0.0, 1e-14);
}

TEST(Lyapunov, MatchesKroneckerOracleAndResidual) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> z(0.0, 1.0);
  for (Eigen::Index n = 1; n <= 12; ++n) {
    Matrix x(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) x(i, j) = z(rng);
    // Shift so every eigenvalue has real part <= -0.5.
    const double shift = general_eigenvalues(x).real().maxCoeff() + 0.5;
    const Matrix a = x - shift * Matrix::Identity(n, n);
    Matrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = z(rng);
    const Matrix rhs = r * r.transpose();
    const Matrix p = lyapunov_solve(a, rhs);
    EXPECT_LE((p - p.transpose()).norm(), 1e-10 * std::max(1.0, p.norm()));
    EXPECT_LE((a * p + p * a.transpose() + rhs).norm(), 1e-8 * rhs.norm());
    const Matrix oracle = kronecker_lyapunov(a, rhs);
    EXPECT_LE((p - oracle).norm(), 1e-8 * oracle.norm()) << "n = " << n;
  }
}

TEST(Lyapunov, DimensionCapAndUnstable) {
  Tolerances tol;
  tol.lyapunov_max_dim = 3;
  try {
    lyapunov_solve(-Matrix::Identity(4, 4), Matrix::Identity(4, 4), tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionCap);
  }
  // Purely imaginary pair: lambda + conj(lambda) = 0.
  Matrix a(2, 2);
  a << 0, 1, -1, 0;
  try {
    lyapunov_solve(a, Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnstableMatrix);
  }
}

TEST(GeneralEigenvalues, ComplexPair) {
  Matrix a(2, 2);
  a << 0, 1, -1, -1;  // s^2 + s + 1
  const ComplexVector ev = general_eigenvalues(a);
  for (Eigen::Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(ev(i).real(), -0.5, 1e-12);
    EXPECT_NEAR(std::abs(ev(i).imag()), std::sqrt(3.0) / 2, 1e-12);
  }
}

}  // namespace
}  // namespace leadsel
