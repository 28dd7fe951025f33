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

// Test-only helpers: random instances and brute-force oracles that do not
// share code paths with the library routines they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "leadsel/graph.hpp"

namespace leadsel::testing {

inline Graph random_connected_graph(std::mt19937_64& rng, std::size_t n_min, std::size_t n_max,
                                    double p_min = 0.3, double p_max = 0.8) {
  std::uniform_int_distribution<std::size_t> size(n_min, n_max);
  std::uniform_real_distribution<double> prob(p_min, p_max);
  const std::size_t n = size(rng);
  const double p = prob(rng);
  return erdos_renyi_connected(n, p, rng()).graph;
}

inline Graph random_weighted_connected_graph(std::mt19937_64& rng, std::size_t n_min,
                                             std::size_t n_max) {
  const Graph base = random_connected_graph(rng, n_min, n_max);
  std::uniform_real_distribution<double> w(0.2, 3.0);
  std::vector<Edge> edges = base.edges();
  for (auto& e : edges) e.weight = w(rng);
  return build_graph(base.size(), edges);
}

inline LeaderSet random_nonempty_subset(std::mt19937_64& rng, std::size_t n) {
  std::vector<NodeId> ids;
  while (ids.empty()) {
    for (NodeId v = 0; v < n; ++v) {
      if (rng() & 1U) ids.push_back(v);
    }
  }
  return LeaderSet(std::move(ids));
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = z(rng);
  return x * x.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
}

// Dense inverse through full-pivot LU (independent of Cholesky).
inline Eigen::MatrixXd lu_inverse(const Eigen::MatrixXd& m) { return m.fullPivLu().inverse(); }

// Kronecker-vectorized Lyapunov solve: (I (x) A + A (x) I) vec(P) = -vec(RHS).
inline Eigen::MatrixXd kronecker_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // vec is column-major: index (r, c) -> c * n + r.
      for (Eigen::Index r = 0; r < n; ++r) {
        k(j * n + r, j * n + i) += a(r, i);  // (A P)(r, j) += A(r, i) P(i, j)
        k(i * n + r, j * n + r) += a(i, j);  // (P A^T)(r, i) += P(r, j) A(i, j)
      }
    }
  }
  Eigen::VectorXd b = -Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * n);
  Eigen::VectorXd x = k.fullPivLu().solve(b);
  return Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
}

// Hurwitz determinants of the monic polynomial s^m + c[m-1] s^{m-1} + ... + c[0],
// from the generic Hurwitz matrix H(i, j) = coefficient of s^{m - (2j - i)}
// (1-based i, j), with the leading coefficient 1.
inline std::vector<double> generic_hurwitz(const std::vector<double>& c) {
  const int m = static_cast<int>(c.size());
  auto coeff = [&](int power_from_top) -> double {
    // power_from_top = 0 -> leading coefficient.
    if (power_from_top == 0) return 1.0;
    if (power_from_top < 0 || power_from_top > m) return 0.0;
    return c[static_cast<std::size_t>(m - power_from_top)];
  };
  Eigen::MatrixXd h(m, m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) h(i - 1, j - 1) = coeff(2 * j - i);
  std::vector<double> dets;
  for (int j = 1; j <= m; ++j) dets.push_back(h.topLeftCorner(j, j).determinant());
  return dets;
}

// Roots of the monic polynomial via its companion matrix.
inline Eigen::VectorXcd polynomial_roots(const std::vector<double>& c) {
  const auto m = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) comp(i + 1, i) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) comp(i, m - 1) = -c[static_cast<std::size_t>(i)];
  return Eigen::EigenSolver<Eigen::MatrixXd>(comp, false).eigenvalues();
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace leadsel::testing
