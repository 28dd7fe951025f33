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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "leadsel/error.hpp"
#include "leadsel/gains.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/linalg.hpp"
#include "leadsel/system.hpp"
#include "leadsel/tolerances.hpp"

namespace leadsel {

struct StabilityCondition {
  std::string name;
  // Inequality with the evaluated numbers, e.g. "a2*a3/a1*lambda = 1.5 > 1".
  std::string rendered;
  // lhs - rhs of the inequality.
  double slack = 0.0;
  bool satisfied = false;
};

struct StabilityReport {
  bool stable = false;
  // Some condition has |slack| within the strictness tolerance.
  bool marginal = false;
  std::vector<StabilityCondition> conditions;
  // Hurwitz determinants Delta_1..Delta_m at lambda_min.
  std::vector<double> hurwitz;
  double lambda_min = 0.0;
  // Smallest slack among all conditions.
  double margin = 0.0;
};

/// Hurwitz determinants of s^m + a_m l s^{m-1} + ... + a_1 l for l = lambda.
inline std::vector<double> hurwitz_determinants(const GainVector& g, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  const double l = lambda;
  switch (g.order()) {
    case 1:
      return {g.a(1) * l};
    case 2:
      return {g.a(2) * l, g.a(1) * g.a(2) * l * l};
    case 3: {
      const double a1 = g.a(1), a2 = g.a(2), a3 = g.a(3);
      return {a3 * l, a2 * a3 * l * l - a1 * l, a1 * a2 * a3 * l * l * l - a1 * a1 * l * l};
    }
    case 4: {
      const double a1 = g.a(1), a2 = g.a(2), a3 = g.a(3), a4 = g.a(4);
      const double l2 = l * l, l3 = l2 * l, l4 = l3 * l;
      return {a4 * l, a3 * a4 * l2 - a2 * l,
              a2 * a3 * a4 * l3 - a1 * a4 * a4 * l3 - a2 * a2 * l2,
              a1 * a2 * a3 * a4 * l4 - a1 * a1 * a4 * a4 * l4 - a1 * a2 * a2 * l3};
    }
    default:
      throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
}

namespace detail {

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline StabilityCondition make_condition(std::string name, std::string lhs_text, double lhs,
                                         double rhs, const Tolerances& tol) {
  StabilityCondition c;
  c.slack = lhs - rhs;
  c.satisfied = c.slack > tol.stability_slack;
  c.rendered = lhs_text + " = " + format_number(lhs) + " > " + format_number(rhs);
  c.name = std::move(name);
  return c;
}

}  // namespace detail

/// Order-specific stability conditions evaluated at `lambda_min`. Every
/// ratio condition has the form c * lambda > 1 with c > 0 once the gains are
/// positive, so the smallest eigenvalue of Q_S is the binding one.
inline StabilityReport check_stability(const GainVector& g, double lambda_min,
                                       const Tolerances& tol = default_tolerances()) {
  if (!(lambda_min > 0.0)) {
    throw Error(ErrorCode::kEmptyLeaderSet, "Q_S must be positive definite");
  }
  StabilityReport r;
  r.lambda_min = lambda_min;
  r.hurwitz = hurwitz_determinants(g, lambda_min);
  for (int j = 1; j <= g.order(); ++j) {
    const std::string aj = "a" + std::to_string(j);
    r.conditions.push_back(detail::make_condition(aj + " > 0", aj, g.a(j), 0.0, tol));
  }
  const auto ratios = gain_ratios(g);
  if (g.order() == 3) {
    r.conditions.push_back(detail::make_condition("a2*a3/a1*lambda > 1", "a2*a3/a1*lambda",
                                                  ratios.third * lambda_min, 1.0, tol));
  }
  if (g.order() == 4) {
    r.conditions.push_back(detail::make_condition("a3*a4/a2*lambda > 1", "a3*a4/a2*lambda",
                                                  ratios.fourth_outer * lambda_min, 1.0, tol));
    r.conditions.push_back(detail::make_condition(
        "(a3*a4/a2 - a1*a4^2/a2^2)*lambda > 1", "(a3*a4/a2 - a1*a4^2/a2^2)*lambda",
        (ratios.fourth_outer - ratios.fourth_inner) * lambda_min, 1.0, tol));
  }
  r.stable = true;
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& c : r.conditions) {
    r.stable = r.stable && c.satisfied;
    r.margin = std::min(r.margin, c.slack);
    if (std::abs(c.slack) <= tol.stability_slack) r.marginal = true;
  }
  return r;
}

inline StabilityReport check_stability(const GroundedSystem& system,
                                       const Tolerances& tol = default_tolerances()) {
  if (system.leaders().empty()) {
    throw Error(ErrorCode::kEmptyLeaderSet, "stability needs at least one leader");
  }
  return check_stability(system.gains(), system.lambda_min(), tol);
}

// True when the equal-gain theorem proves instability (every m >= 4);
// false means the theorem does not decide the case.
constexpr bool equal_gain_verdict(int order, double /*a*/) { return order >= 4; }

struct StateMatrices {
  Matrix a;  // nm x nm
  Matrix b;  // nm x n
  Matrix c;  // n x nm
};

/// Companion-block layout: identity blocks on the super-diagonal, last block
/// row [-a1 Q, ..., -am Q]; B selects the last block, C the first.
inline StateMatrices build_state_matrices(const Matrix& q, const GainVector& g) {
  const Eigen::Index n = q.rows();
  const Eigen::Index m = g.order();
  StateMatrices s;
  s.a = Matrix::Zero(n * m, n * m);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    s.a.block(j * n, (j + 1) * n, n, n).setIdentity();
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    s.a.block((m - 1) * n, j * n, n, n) = -g.a(static_cast<int>(j) + 1) * q;
  }
  s.b = Matrix::Zero(n * m, n);
  s.b.block((m - 1) * n, 0, n, n).setIdentity();
  s.c = Matrix::Zero(n, n * m);
  s.c.block(0, 0, n, n).setIdentity();
  return s;
}

inline StateMatrices build_state_matrices(const GroundedSystem& system) {
  return build_state_matrices(system.q(), system.gains());
}

struct SpectralVerdict {
  bool stable = false;
  double max_real_part = 0.0;
  ComplexVector eigenvalues;
};

inline SpectralVerdict spectral_stability_oracle(const Matrix& a,
                                                 const Tolerances& tol = default_tolerances()) {
  SpectralVerdict v;
  v.eigenvalues = general_eigenvalues(a);
  v.max_real_part = v.eigenvalues.real().maxCoeff();
  v.stable = v.max_real_part < -tol.spectral_margin;
  return v;
}

// Smallest lambda_min(Q_v) over singleton leader sets. By eigenvalue
// interlacing under PSD updates this lower-bounds lambda_min(Q_S) for every
// nonempty S.
inline double min_singleton_lambda(const Graph& graph, const KappaWeights& kappa) {
  if (!is_connected(graph)) {
    throw Error(ErrorCode::kPreconditionViolated, "graph must be connected");
  }
  const Matrix lap = laplacian(graph);
  double lo = std::numeric_limits<double>::infinity();
  for (NodeId v = 0; v < graph.size(); ++v) {
    const Matrix q = grounded_laplacian(lap, kappa, LeaderSet{v});
    lo = std::min(lo, sym_eigenvalues(q).eigenvalues(0));
  }
  return lo;
}

/// Gain rule for experiments. Base scalar a = ceil(max_v 1/lambda_min(Q_v)).
///  m <= 2: all gains a.
///  m == 3: all gains a, incremented until the strict condition holds.
///  m == 4: (a, 2a, 2a, 2a), doubling a until both ratio slacks exceed 0.5.
inline GainVector auto_gains(const Graph& graph, const KappaWeights& kappa, int order,
                             const Tolerances& tol = default_tolerances()) {
  if (order < 1 || order > kMaxOrder) {
    throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
  const double lambda = min_singleton_lambda(graph, kappa);
  double a = std::ceil(1.0 / lambda);
  if (order <= 2) return GainVector::equal(order, a);
  if (order == 3) {
    while (!check_stability(GainVector::equal(3, a), lambda, tol).stable) a += 1.0;
    return GainVector::equal(3, a);
  }
  for (;;) {
    GainVector g{a, 2 * a, 2 * a, 2 * a};
    const auto r = gain_ratios(g);
    const double outer = r.fourth_outer * lambda - 1.0;
    const double inner = (r.fourth_outer - r.fourth_inner) * lambda - 1.0;
    if (outer > 0.5 && inner > 0.5) return g;
    a *= 2.0;
  }
}

}  // namespace leadsel
