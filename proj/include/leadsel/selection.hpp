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
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "leadsel/coherence.hpp"
#include "leadsel/error.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/linalg.hpp"
#include "leadsel/tolerances.hpp"

namespace leadsel {

enum class SelectionMethod { kGreedy, kNaiveGreedy, kExhaustive };

constexpr std::string_view to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::kGreedy: return "greedy";
    case SelectionMethod::kNaiveGreedy: return "naive_greedy";
    case SelectionMethod::kExhaustive: return "exhaustive";
  }
  return "unknown";
}

struct SelectionResult {
  int order = 0;
  // Greedy: nodes in pick order. Exhaustive: the optimal set, ascending.
  std::vector<NodeId> chosen;
  // f_m and H_m after each pick (one entry for exhaustive).
  std::vector<double> f_values;
  std::vector<double> h_values;
  std::size_t evaluations = 0;
  SelectionMethod method = SelectionMethod::kGreedy;

  LeaderSet leader_set() const { return LeaderSet(chosen); }
  double final_f() const { return f_values.empty() ? 0.0 : f_values.back(); }
  double final_h() const { return h_values.empty() ? 0.0 : h_values.back(); }
};

namespace detail {

// True when `candidate` beats `best` by more than the tie tolerance, for a
// quantity being minimized.
inline bool strictly_better(double candidate, double best, const Tolerances& tol) {
  return candidate < best - tol.tie_relative * std::max(std::abs(best), 1e-300);
}

inline void require_budget(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "budget k must be at least 1");
}

// Shared driver: `scaled_after(v)` returns rho_m H_m(S + v) for the current
// S; `accept(v)` commits v.
template <class Evaluate, class Accept>
SelectionResult run_greedy(const CoherenceObjective& obj, std::size_t k, SelectionMethod method,
                           Evaluate&& scaled_after, Accept&& accept) {
  require_budget(k);
  const auto& tol = obj.tolerances();
  SelectionResult result;
  result.order = obj.order();
  result.method = method;
  std::vector<bool> taken(obj.size(), false);
  double current_f = 0.0;
  for (std::size_t round = 0; round < std::min(k, obj.size()); ++round) {
    bool found = false;
    NodeId best_v = 0;
    double best_scaled = 0.0;
    for (NodeId v = 0; v < obj.size(); ++v) {
      if (taken[v]) continue;
      const double scaled = round == 0 ? obj.singleton_scaled(v) : scaled_after(v);
      ++result.evaluations;
      if (!found || strictly_better(scaled, best_scaled, tol)) {
        found = true;
        best_v = v;
        best_scaled = scaled;
      }
    }
    const double best_f = obj.value_from_scaled(best_scaled);
    if (!found || !(best_f - current_f > tol.greedy_improvement)) break;
    taken[best_v] = true;
    accept(best_v);
    current_f = best_f;
    result.chosen.push_back(best_v);
    result.f_values.push_back(best_f);
    result.h_values.push_back(best_scaled / obj.rho());
  }
  return result;
}

}  // namespace detail

/// Greedy maximization of f_m under |S| <= k with rank-one updates.
///
/// Round 1 scores every singleton by direct eigendecomposition. Afterwards
/// Q_S^-1 and, for m >= 3, R = (c Q_S - I)^-1 are carried along; a candidate
/// v is scored from their Sherman-Morrison updates (scales kappa_v and
/// c kappa_v), so each round costs O(n^3) and the run O(k n^3). Ties go to
/// the smallest id; the run stops early when no candidate improves f_m.
inline SelectionResult greedy_select(const CoherenceObjective& obj, std::size_t k) {
  const auto& g = obj.gains();
  const auto& tol = obj.tolerances();
  const double c = shift_coefficient(g);
  const bool shifted = g.order() >= 3;
  LeaderSet current;
  Matrix q_inv;
  Matrix r_inv;
  auto candidate_inverses = [&](NodeId v) {
    const double kv = obj.kappa()[v];
    Matrix qi = sherman_morrison_update(q_inv, v, kv, tol);
    Matrix ri = shifted ? sherman_morrison_update(r_inv, v, c * kv, tol) : Matrix{};
    return std::pair{std::move(qi), std::move(ri)};
  };
  return detail::run_greedy(
      obj, k, SelectionMethod::kGreedy,
      [&](NodeId v) {
        const auto [qi, ri] = candidate_inverses(v);
        return scaled_coherence_from_inverses(g, qi, ri);
      },
      [&](NodeId v) {
        if (current.empty()) {
          const Matrix q = obj.q(LeaderSet{v});
          q_inv = spd_inverse(q);
          if (shifted) r_inv = shifted_inverse(q, c);
        } else {
          auto [qi, ri] = candidate_inverses(v);
          q_inv = std::move(qi);
          r_inv = std::move(ri);
        }
        current = current.with(v);
      });
}

// Reference greedy that re-evaluates every candidate set from scratch.
inline SelectionResult naive_greedy_select(const CoherenceObjective& obj, std::size_t k) {
  LeaderSet current;
  return detail::run_greedy(
      obj, k, SelectionMethod::kNaiveGreedy,
      [&](NodeId v) { return obj.scaled_coherence(current.with(v)); },
      [&](NodeId v) { current = current.with(v); });
}

inline double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

inline double subset_count(std::size_t n, std::size_t k) {
  double total = 0.0;
  for (std::size_t s = 1; s <= std::min(k, n); ++s) total += binomial(n, s);
  return total;
}

/// Exact minimizer of H_m over nonempty |S| <= k. Subsets are visited by size,
/// then lexicographically; the first of tied minima wins.
inline SelectionResult exhaustive_select(const CoherenceObjective& obj, std::size_t k) {
  detail::require_budget(k);
  const auto& tol = obj.tolerances();
  const std::size_t n = obj.size();
  const double total = subset_count(n, k);
  if (total > static_cast<double>(tol.exhaustive_cap)) {
    throw Error(ErrorCode::kCombinatorialCap,
                std::to_string(static_cast<long long>(total)) + " subsets exceed cap " +
                    std::to_string(tol.exhaustive_cap));
  }
  SelectionResult result;
  result.order = obj.order();
  result.method = SelectionMethod::kExhaustive;
  bool found = false;
  double best_scaled = 0.0;
  std::vector<NodeId> best;
  for (std::size_t size = 1; size <= std::min(k, n); ++size) {
    std::vector<NodeId> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      const double scaled =
          size == 1 ? obj.singleton_scaled(idx[0]) : obj.scaled_coherence(LeaderSet(idx));
      ++result.evaluations;
      if (!found || detail::strictly_better(scaled, best_scaled, tol)) {
        found = true;
        best_scaled = scaled;
        best = idx;
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  result.chosen = best;
  result.f_values.push_back(obj.value_from_scaled(best_scaled));
  result.h_values.push_back(best_scaled / obj.rho());
  return result;
}

struct BoundCertificate {
  std::size_t k = 0;
  double f_star = 0.0;
  double f_greedy = 0.0;
  // (f* - f(S^g)) / f*.
  double ratio = 0.0;
  // ((k-1)/k)^k, which never exceeds 1/e.
  double k_bound = 0.0;
  double bound = 1.0 / std::numbers::e;
  bool holds = false;
  // H_m(S^g) <= C_m / (rho_m e) + (1 - 1/e) H_m(S*).
  double coherence_lhs = 0.0;
  double coherence_rhs = 0.0;
  bool coherence_holds = false;
  SelectionResult greedy;
  SelectionResult optimal;
};

inline BoundCertificate certify_bound(const CoherenceObjective& obj, std::size_t k) {
  BoundCertificate cert;
  cert.k = k;
  cert.greedy = greedy_select(obj, k);
  cert.optimal = exhaustive_select(obj, k);
  cert.f_star = cert.optimal.final_f();
  cert.f_greedy = cert.greedy.final_f();
  cert.ratio = (cert.f_star - cert.f_greedy) / cert.f_star;
  const double kk = static_cast<double>(k);
  cert.k_bound = std::pow((kk - 1.0) / kk, kk);
  cert.holds = cert.ratio <= cert.k_bound + 1e-12 && cert.ratio <= cert.bound + 1e-12;
  cert.coherence_lhs = cert.greedy.final_h();
  cert.coherence_rhs = obj.offset() / (obj.rho() * std::numbers::e) +
                       (1.0 - 1.0 / std::numbers::e) * cert.optimal.final_h();
  cert.coherence_holds = cert.coherence_lhs <= cert.coherence_rhs * (1.0 + 1e-12);
  return cert;
}

enum class PropertyKind { kSubmodular, kMonotone, kDerivedNonIncreasing };

constexpr std::string_view to_string(PropertyKind k) {
  switch (k) {
    case PropertyKind::kSubmodular: return "submodular";
    case PropertyKind::kMonotone: return "monotone";
    case PropertyKind::kDerivedNonIncreasing: return "derived_non_increasing";
  }
  return "unknown";
}

struct PropertyViolation {
  PropertyKind kind = PropertyKind::kSubmodular;
  std::uint64_t first = 0;   // A, S1 (bitmask)
  std::uint64_t second = 0;  // B, S2 (bitmask)
  NodeId element = 0;        // a, for derived-function checks
  // lhs - rhs of the inequality that should be >= -slack.
  double gap = 0.0;
};

struct PropertyCheckResult {
  std::vector<PropertyViolation> violations;  // first few only
  std::size_t violation_count = 0;
  std::size_t checks = 0;

  bool ok() const noexcept { return violation_count == 0; }
};

enum class PropertyMode { kExhaustive, kSampled };

/// Checks on a set function over {0..n-1}, all as "gap >= -slack":
///   submodular: f(A) + f(B) - f(A|B) - f(A&B)
///   monotone:   f(B) - f(A) for A subset of B
///   derived:    (f(S1+a) - f(S1)) - (f(S2+a) - f(S2)) for S1 in S2, a not in S2
/// Exhaustive mode enumerates every case (n <= 8); sampled mode draws
/// `samples` cases of each kind from std::mt19937_64(seed).
template <class SetFunction>
PropertyCheckResult check_monotone_submodular(const SetFunction& f, std::size_t n,
                                              PropertyMode mode, std::size_t samples = 0,
                                              std::uint64_t seed = 0,
                                              double slack = default_tolerances().property_slack) {
  constexpr std::size_t kMaxReported = 64;
  if (n == 0 || n > 63) throw Error(ErrorCode::kInvalidArgument, "n must be in [1, 63]");
  if (mode == PropertyMode::kExhaustive && n > 8) {
    throw Error(ErrorCode::kPreconditionViolated, "exhaustive property check needs n <= 8");
  }
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::unordered_map<std::uint64_t, double> cache;
  auto value = [&](std::uint64_t mask) {
    auto it = cache.find(mask);
    if (it != cache.end()) return it->second;
    const double v = f(LeaderSet::from_mask(mask));
    cache.emplace(mask, v);
    return v;
  };

  PropertyCheckResult out;
  auto record = [&](PropertyKind kind, std::uint64_t a, std::uint64_t b, NodeId e, double gap) {
    ++out.checks;
    if (gap >= -slack) return;
    ++out.violation_count;
    if (out.violations.size() < kMaxReported) out.violations.push_back({kind, a, b, e, gap});
  };
  auto submodular = [&](std::uint64_t a, std::uint64_t b) {
    record(PropertyKind::kSubmodular, a, b, 0,
           value(a) + value(b) - value(a | b) - value(a & b));
  };
  auto monotone = [&](std::uint64_t a, std::uint64_t b) {
    record(PropertyKind::kMonotone, a, b, 0, value(b) - value(a));
  };
  auto derived = [&](std::uint64_t s1, std::uint64_t s2, NodeId e) {
    const std::uint64_t bit = std::uint64_t{1} << e;
    record(PropertyKind::kDerivedNonIncreasing, s1, s2, e,
           (value(s1 | bit) - value(s1)) - (value(s2 | bit) - value(s2)));
  };

  if (mode == PropertyMode::kExhaustive) {
    for (std::uint64_t a = 0; a <= full; ++a) {
      for (std::uint64_t b = a; b <= full; ++b) submodular(a, b);
    }
    for (std::uint64_t b = 0; b <= full; ++b) {
      // Every submask a of b, including b itself and 0.
      for (std::uint64_t a = b;; a = (a - 1) & b) {
        monotone(a, b);
        if (a == 0) break;
      }
    }
    for (NodeId e = 0; e < n; ++e) {
      const std::uint64_t rest = full & ~(std::uint64_t{1} << e);
      for (std::uint64_t s2 = rest;; s2 = (s2 - 1) & rest) {
        for (std::uint64_t s1 = s2;; s1 = (s1 - 1) & s2) {
          derived(s1, s2, e);
          if (s1 == 0) break;
        }
        if (s2 == 0) break;
      }
    }
    return out;
  }

  std::mt19937_64 rng(seed);
  auto draw = [&] { return rng() & full; };
  for (std::size_t i = 0; i < samples; ++i) {
    submodular(draw(), draw());
    const std::uint64_t b = draw();
    monotone(b & draw(), b);
    const auto e = static_cast<NodeId>(rng() % n);
    const std::uint64_t s2 = draw() & ~(std::uint64_t{1} << e);
    derived(s2 & draw(), s2, e);
  }
  return out;
}

}  // namespace leadsel
