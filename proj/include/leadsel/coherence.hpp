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
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leadsel/error.hpp"
#include "leadsel/gains.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/linalg.hpp"
#include "leadsel/stability.hpp"
#include "leadsel/system.hpp"
#include "leadsel/tolerances.hpp"

namespace leadsel {

enum class CoherenceMethod { kClosedEig, kClosedInv, kLyapunov, kSimulation };

constexpr std::string_view to_string(CoherenceMethod m) {
  switch (m) {
    case CoherenceMethod::kClosedEig: return "closed_eig";
    case CoherenceMethod::kClosedInv: return "closed_inv";
    case CoherenceMethod::kLyapunov: return "lyapunov";
    case CoherenceMethod::kSimulation: return "simulation";
  }
  return "unknown";
}

struct CoherenceReport {
  int order = 0;
  // Total steady-state variance of the first-order states.
  double value = 0.0;
  CoherenceMethod method = CoherenceMethod::kClosedEig;
  LeaderSet leaders;
  GainVector gains;
};

// Normalization rho_m making rho_m * H_m a gain-free trace where possible.
inline double coherence_scale(const GainVector& g) {
  switch (g.order()) {
    case 1: return 2.0 * g.a(1);
    case 2: return 2.0 * g.a(1) * g.a(2);
    case 3: return 2.0 * g.a(1) * g.a(1) / g.a(3);
    case 4: return 2.0 * g.a(1) * g.a(2);
    default: throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
}

// Coefficient c of the shifted matrix (c Q - I) whose inverse enters H_3 and
// H_4; zero for m <= 2.
inline double shift_coefficient(const GainVector& g) {
  const auto r = gain_ratios(g);
  if (g.order() == 3) return r.third;
  if (g.order() == 4) return r.fourth_outer - r.fourth_inner;
  return 0.0;
}

/// rho_m * g_m(lambda): contribution of one eigenvalue of Q_S to rho_m H_m.
///   m=1: 1/l   m=2: 1/l^2   m=3: 1/(l (c l - 1))
///   m=4: (b l - 1) / (l^2 ((b - d) l - 1)),  b = a3a4/a2, d = a1a4^2/a2^2
inline double scaled_eigen_term(const GainVector& g, double l) {
  const auto r = gain_ratios(g);
  switch (g.order()) {
    case 1: return 1.0 / l;
    case 2: return 1.0 / (l * l);
    case 3: return 1.0 / (l * (r.third * l - 1.0));
    case 4:
      return (r.fourth_outer * l - 1.0) /
             (l * l * ((r.fourth_outer - r.fourth_inner) * l - 1.0));
    default: throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
}

inline double scaled_coherence_from_spectrum(const GainVector& g, const Vector& eigenvalues) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) sum += scaled_eigen_term(g, eigenvalues(i));
  return sum;
}

// tr(X Y) in O(n^2).
inline double trace_product(const Matrix& x, const Matrix& y) {
  return x.cwiseProduct(y.transpose()).sum();
}

/// rho_m H_m from Q_S^-1 and R = (c Q_S - I)^-1 (R unused for m <= 2), using
/// the rearranged fourth-order form
///   tr(Q^-2 (bQ - I)((b-d)Q - I)^-1) = tr(Q^-2) + d tr(Q^-1 ((b-d)Q - I)^-1).
/// Every term is a trace of a product, so this is O(n^2) given the inverses.
inline double scaled_coherence_from_inverses(const GainVector& g, const Matrix& q_inv,
                                             const Matrix& shifted_inv) {
  switch (g.order()) {
    case 1: return q_inv.trace();
    case 2: return trace_product(q_inv, q_inv);
    case 3: return trace_product(q_inv, shifted_inv);
    case 4:
      return trace_product(q_inv, q_inv) +
             gain_ratios(g).fourth_inner * trace_product(q_inv, shifted_inv);
    default: throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
}

inline Matrix shifted_inverse(const Matrix& q, double c) {
  return spd_inverse(c * q - Matrix::Identity(q.rows(), q.cols()));
}

namespace detail {

inline void require_evaluable(const GroundedSystem& s, const Tolerances& tol) {
  if (s.leaders().empty()) throw Error(ErrorCode::kEmptyLeaderSet, "coherence needs leaders");
  const auto report = check_stability(s, tol);
  if (!report.stable || report.margin < tol.marginal_slack) {
    throw Error(ErrorCode::kUnstableSystem,
                "system is unstable or too close to the stability boundary (margin " +
                    std::to_string(report.margin) + ")");
  }
}

// Literal trace expression for rho_m H_m, one explicit inverse per factor.
inline double scaled_coherence_literal(const GroundedSystem& s) {
  const Matrix& q_inv = s.q_inverse();
  const auto& g = s.gains();
  const auto r = gain_ratios(g);
  const Matrix id = Matrix::Identity(q_inv.rows(), q_inv.cols());
  switch (g.order()) {
    case 1: return q_inv.trace();
    case 2: return (q_inv * q_inv).trace();
    case 3: return (q_inv * shifted_inverse(s.q(), r.third)).trace();
    case 4:
      return (q_inv * q_inv * (r.fourth_outer * s.q() - id) *
              shifted_inverse(s.q(), r.fourth_outer - r.fourth_inner))
          .trace();
    default: throw Error(ErrorCode::kUnsupportedOrder, "order must be in [1, 4]");
  }
}

}  // namespace detail

/// Closed-form H_m(S), m = 1..4. The eigenvalue path sums per-eigenvalue
/// terms of Q_S; the inverse path evaluates the trace formulas literally.
inline CoherenceReport coherence_closed(const GroundedSystem& s,
                                        CoherenceMethod method = CoherenceMethod::kClosedEig,
                                        const Tolerances& tol = default_tolerances()) {
  detail::require_evaluable(s, tol);
  const double rho = coherence_scale(s.gains());
  double scaled = 0.0;
  switch (method) {
    case CoherenceMethod::kClosedEig:
      scaled = scaled_coherence_from_spectrum(s.gains(), s.eigenvalues());
      break;
    case CoherenceMethod::kClosedInv:
      scaled = detail::scaled_coherence_literal(s);
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument, "coherence_closed supports closed_eig/closed_inv");
  }
  return {s.order(), scaled / rho, method, s.leaders(), s.gains()};
}

/// H_m(S) = tr(C P C^T) with P the controllability Gramian of (A, B).
inline CoherenceReport coherence_lyapunov_oracle(const GroundedSystem& s,
                                                 const Tolerances& tol = default_tolerances()) {
  if (s.leaders().empty()) throw Error(ErrorCode::kEmptyLeaderSet, "coherence needs leaders");
  if (!check_stability(s, tol).stable) throw Error(ErrorCode::kUnstableSystem, "system is unstable");
  const std::size_t dim = s.size() * static_cast<std::size_t>(s.order());
  if (dim > tol.lyapunov_max_dim) {
    throw Error(ErrorCode::kDimensionCap, "n*m = " + std::to_string(dim) + " exceeds oracle cap");
  }
  const auto sm = build_state_matrices(s);
  const Matrix p = lyapunov_solve(sm.a, sm.b * sm.b.transpose(), tol);
  const double value = (sm.c * p * sm.c.transpose()).trace();
  return {s.order(), value, CoherenceMethod::kLyapunov, s.leaders(), s.gains()};
}

// Fourth-order coherence through the rearranged trace used by the greedy.
inline double h4_rearranged(const GroundedSystem& s, const Tolerances& tol = default_tolerances()) {
  if (s.order() != 4) throw Error(ErrorCode::kUnsupportedOrder, "h4_rearranged needs m = 4");
  detail::require_evaluable(s, tol);
  const Matrix r = shifted_inverse(s.q(), shift_coefficient(s.gains()));
  return scaled_coherence_from_inverses(s.gains(), s.q_inverse(), r) /
         coherence_scale(s.gains());
}

/// Set function f_m(S) = C_m - rho_m H_m(S), f_m({}) = 0, with
/// C_m = 2 max_v rho_m H_m({v}). Holds the graph, kappa, and gains shared by
/// every evaluation, plus the per-singleton values behind C_m.
class CoherenceObjective {
 public:
  CoherenceObjective(Graph graph, KappaWeights kappa, GainVector gains,
                     const Tolerances& tol = default_tolerances())
      : graph_(std::move(graph)), kappa_(std::move(kappa)), gains_(std::move(gains)), tol_(tol) {
    if (kappa_.size() != graph_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "kappa length must equal node count");
    }
    laplacian_ = laplacian(graph_);
    rho_ = coherence_scale(gains_);
    // Every nonempty S has lambda_min(Q_S) >= min_v lambda_min(Q_v), and the
    // stability conditions are monotone in lambda, so one check covers all S.
    binding_lambda_ = min_singleton_lambda(graph_, kappa_);
    const auto report = check_stability(gains_, binding_lambda_, tol_);
    if (!report.stable || report.margin < tol_.marginal_slack) {
      throw Error(ErrorCode::kUnstableSystem, "gains are not stable for every singleton leader set");
    }
    singleton_.resize(graph_.size());
    for (NodeId v = 0; v < graph_.size(); ++v) singleton_[v] = scaled_coherence(LeaderSet{v});
    offset_ = 2.0 * *std::max_element(singleton_.begin(), singleton_.end());
  }

  const Graph& graph() const noexcept { return graph_; }
  const KappaWeights& kappa() const noexcept { return kappa_; }
  const GainVector& gains() const noexcept { return gains_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const Matrix& laplacian_matrix() const noexcept { return laplacian_; }
  int order() const noexcept { return gains_.order(); }
  std::size_t size() const noexcept { return graph_.size(); }
  double rho() const noexcept { return rho_; }
  // C_m.
  double offset() const noexcept { return offset_; }
  double binding_lambda() const noexcept { return binding_lambda_; }
  // rho_m H_m({v}), as computed for C_m.
  double singleton_scaled(NodeId v) const { return singleton_.at(v); }

  Matrix q(const LeaderSet& s) const { return grounded_laplacian(laplacian_, kappa_, s); }

  // rho_m H_m(S) via the spectrum of Q_S.
  double scaled_coherence(const LeaderSet& s) const {
    if (s.empty()) throw Error(ErrorCode::kEmptyLeaderSet, "coherence needs leaders");
    s.validate(size());
    return scaled_coherence_from_spectrum(gains_, sym_eigenvalues(q(s)).eigenvalues);
  }

  double coherence(const LeaderSet& s) const { return scaled_coherence(s) / rho_; }

  // f_m(S).
  double value(const LeaderSet& s) const {
    if (s.empty()) return 0.0;
    return offset_ - scaled_coherence(s);
  }

  double value_from_scaled(double scaled) const { return offset_ - scaled; }

  GroundedSystem system(const LeaderSet& s) const { return {graph_, kappa_, s, gains_}; }

 private:
  Graph graph_;
  KappaWeights kappa_;
  GainVector gains_;
  Tolerances tol_;
  Matrix laplacian_;
  double rho_ = 0.0;
  double offset_ = 0.0;
  double binding_lambda_ = 0.0;
  std::vector<double> singleton_;
};

inline double set_function_value(const CoherenceObjective& objective, const LeaderSet& s) {
  return objective.value(s);
}

enum class LemmaMode {
  // C - tr((b1 Q)^-1 (b2 Q - b3 I)^-1), b1, b2 > 0, b3 >= 0, b2 lambda > b3.
  kInverseProduct,
  // C - tr(Q^-2 (b1 Q - I)((b1 - b2) Q - I)^-1), b1 > b2 > 0, (b1-b2) lambda > 1.
  kFourthOrder,
};

struct LemmaParameters {
  LemmaMode mode = LemmaMode::kInverseProduct;
  double b1 = 1.0;
  double b2 = 1.0;
  double b3 = 0.0;
};

/// Parametric set function family whose monotonicity and submodularity
/// imply those of f_2, f_3 (kInverseProduct) and f_4 (kFourthOrder).
/// Evaluated through explicit matrix inverses, independently of the
/// spectral path used by CoherenceObjective.
class LemmaSetFunction {
 public:
  LemmaSetFunction(Graph graph, KappaWeights kappa, LemmaParameters params)
      : graph_(std::move(graph)), kappa_(std::move(kappa)), params_(params) {
    if (kappa_.size() != graph_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "kappa length must equal node count");
    }
    laplacian_ = laplacian(graph_);
    const double lambda = min_singleton_lambda(graph_, kappa_);
    const auto violated = [](const std::string& what) {
      return Error(ErrorCode::kPreconditionViolated, what);
    };
    if (params_.mode == LemmaMode::kInverseProduct) {
      if (!(params_.b1 > 0 && params_.b2 > 0 && params_.b3 >= 0)) {
        throw violated("need b1, b2 > 0 and b3 >= 0");
      }
      if (!(params_.b2 * lambda > params_.b3)) throw violated("need b2 * lambda_min > b3");
    } else {
      if (!(params_.b1 > params_.b2 && params_.b2 > 0)) throw violated("need b1 > b2 > 0");
      if (!((params_.b1 - params_.b2) * lambda > 1.0)) {
        throw violated("need (b1 - b2) * lambda_min > 1");
      }
    }
    double worst = 0.0;
    for (NodeId v = 0; v < graph_.size(); ++v) worst = std::max(worst, trace_term(LeaderSet{v}));
    offset_ = 2.0 * worst;
  }

  double offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return graph_.size(); }

  double trace_term(const LeaderSet& s) const {
    if (s.empty()) throw Error(ErrorCode::kEmptyLeaderSet, "trace term needs leaders");
    const Matrix q = grounded_laplacian(laplacian_, kappa_, s);
    const Matrix id = Matrix::Identity(q.rows(), q.cols());
    if (params_.mode == LemmaMode::kInverseProduct) {
      return (spd_inverse(params_.b1 * q) * spd_inverse(params_.b2 * q - params_.b3 * id)).trace();
    }
    const Matrix q_inv = spd_inverse(q);
    return (q_inv * q_inv * (params_.b1 * q - id) *
            spd_inverse((params_.b1 - params_.b2) * q - id))
        .trace();
  }

  double operator()(const LeaderSet& s) const { return s.empty() ? 0.0 : offset_ - trace_term(s); }

 private:
  Graph graph_;
  KappaWeights kappa_;
  LemmaParameters params_;
  Matrix laplacian_;
  double offset_ = 0.0;
};

inline double generalized_lemma_function(const LemmaSetFunction& f, const LeaderSet& s) {
  return f(s);
}

}  // namespace leadsel
