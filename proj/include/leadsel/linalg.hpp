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

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "leadsel/error.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/tolerances.hpp"

namespace leadsel {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

struct SpectralDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns; empty unless requested
};

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be square");
  }
}

inline SpectralDecomposition sym_eigenvalues(const Matrix& m, bool with_vectors = false,
                                             const Tolerances& tol = default_tolerances()) {
  require_square(m, "sym_eigenvalues input");
  if ((m - m.transpose()).norm() > tol.symmetry * m.norm()) {
    throw Error(ErrorCode::kNotSymmetric, "matrix is not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver did not converge");
  }
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  if (with_vectors) out.eigenvectors = solver.eigenvectors();
  return out;
}

inline Eigen::LLT<Matrix> spd_factor(const Matrix& m) {
  require_square(m, "SPD input");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky factorization failed");
  }
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0) || !std::isfinite(diag(i))) {
      throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky factorization failed");
    }
  }
  return llt;
}

inline Matrix spd_inverse(const Matrix& m) {
  Matrix inv = spd_factor(m).solve(Matrix::Identity(m.rows(), m.cols()));
  // Symmetrize to remove round-off asymmetry.
  return 0.5 * (inv + inv.transpose());
}

inline Vector spd_solve(const Matrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) throw Error(ErrorCode::kInvalidArgument, "rhs size mismatch");
  return spd_factor(m).solve(rhs);
}

/// Given inv = M^-1 for symmetric M, returns (M + scale * e_i e_i^T)^-1:
///
///   inv - scale / (1 + scale * inv(i,i)) * inv(:,i) * inv(i,:)
///
/// O(n^2). Throws SingularUpdate when the denominator is not safely positive.
inline Matrix sherman_morrison_update(const Matrix& inv, NodeId index, double scale,
                                      const Tolerances& tol = default_tolerances()) {
  require_square(inv, "inverse");
  const auto i = static_cast<Eigen::Index>(index);
  if (i < 0 || i >= inv.rows()) throw Error(ErrorCode::kNodeOutOfRange, "update index out of range");
  const double denom = 1.0 + scale * inv(i, i);
  if (!(denom > tol.singular_update)) {
    throw Error(ErrorCode::kSingularUpdate,
                "denominator " + std::to_string(denom) + " at index " + std::to_string(index));
  }
  const Vector col = inv.col(i);
  const Vector row = inv.row(i).transpose();
  return inv - (scale / denom) * col * row.transpose();
}

// Eigenvalues of a general real matrix (Hessenberg + shifted QR).
inline ComplexVector general_eigenvalues(const Matrix& a) {
  require_square(a, "general_eigenvalues input");
  if (!a.allFinite()) throw Error(ErrorCode::kEigenFailure, "matrix has non-finite entries");
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "nonsymmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

/// Solves A P + P A^T + rhs = 0 for symmetric P (Bartels-Stewart).
///
/// A = U T U^* (complex Schur); with Y = U^* P U and F = -U^* rhs U the
/// equation becomes T Y + Y T^* = F, solved column by column from the last:
///
///   (T + conj(T_jj) I) y_j = f_j - sum_{k>j} conj(T_jk) y_k.
///
/// Each column is a triangular solve, so the whole solve is O(N^3). The
/// system is singular iff lambda_i + conj(lambda_j) = 0 for some pair, which
/// cannot happen for a stable A.
inline Matrix lyapunov_solve(const Matrix& a, const Matrix& rhs,
                             const Tolerances& tol = default_tolerances()) {
  require_square(a, "A");
  if (rhs.rows() != a.rows() || rhs.cols() != a.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "RHS shape must match A");
  }
  const Eigen::Index n = a.rows();
  if (static_cast<std::size_t>(n) > tol.lyapunov_max_dim) {
    throw Error(ErrorCode::kDimensionCap,
                "dimension " + std::to_string(n) + " exceeds Lyapunov cap " +
                    std::to_string(tol.lyapunov_max_dim));
  }
  Eigen::ComplexSchur<Matrix> schur(a);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::kUnstableMatrix, "Schur decomposition failed");
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();
  const ComplexMatrix f = -(u.adjoint() * rhs.cast<std::complex<double>>() * u);

  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    ComplexVector b = f.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) b -= std::conj(t(j, k)) * y.col(k);
    ComplexMatrix shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(shifted(i, i)) <= 1e-14 * scale) {
        throw Error(ErrorCode::kUnstableMatrix, "Lyapunov operator is singular");
      }
    }
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(b);
  }

  Matrix p = (u * y * u.adjoint()).real();
  p = 0.5 * (p + p.transpose());
  const double residual = (a * p + p * a.transpose() + rhs).norm();
  const double bound = tol.lyapunov_residual * std::max(rhs.norm(), 1e-300);
  if (!std::isfinite(residual) || residual > bound) {
    throw Error(ErrorCode::kUnstableMatrix,
                "Lyapunov residual " + std::to_string(residual) + " exceeds bound");
  }
  return p;
}

}  // namespace leadsel
