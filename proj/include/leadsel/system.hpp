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

#include <utility>

#include "leadsel/error.hpp"
#include "leadsel/gains.hpp"
#include "leadsel/graph.hpp"
#include "leadsel/linalg.hpp"

namespace leadsel {

// Immutable snapshot of graph + kappa + leaders + gains with Q_S, its
// spectrum, and (for nonempty leader sets) Q_S^-1 precomputed.
class GroundedSystem {
 public:
  GroundedSystem(Graph graph, KappaWeights kappa, LeaderSet leaders, GainVector gains)
      : graph_(std::move(graph)),
        kappa_(std::move(kappa)),
        leaders_(std::move(leaders)),
        gains_(std::move(gains)) {
    if (kappa_.size() != graph_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "kappa length must equal node count");
    }
    leaders_.validate(graph_.size());
    laplacian_ = laplacian(graph_);
    q_ = grounded_laplacian(laplacian_, kappa_, leaders_);
    eigenvalues_ = sym_eigenvalues(q_).eigenvalues;
    if (!leaders_.empty()) q_inverse_ = spd_inverse(q_);
  }

  const Graph& graph() const noexcept { return graph_; }
  const KappaWeights& kappa() const noexcept { return kappa_; }
  const LeaderSet& leaders() const noexcept { return leaders_; }
  const GainVector& gains() const noexcept { return gains_; }
  int order() const noexcept { return gains_.order(); }
  std::size_t size() const noexcept { return graph_.size(); }

  const Matrix& laplacian_matrix() const noexcept { return laplacian_; }
  const Matrix& q() const noexcept { return q_; }
  // Ascending eigenvalues of Q_S.
  const Vector& eigenvalues() const noexcept { return eigenvalues_; }
  double lambda_min() const { return eigenvalues_(0); }

  const Matrix& q_inverse() const {
    if (leaders_.empty()) throw Error(ErrorCode::kEmptyLeaderSet, "Q_S is singular without leaders");
    return q_inverse_;
  }

  // New snapshot with v added; Q_S^-1 follows by a rank-one update.
  GroundedSystem with_leader(NodeId v) const {
    if (v >= size()) throw Error(ErrorCode::kNodeOutOfRange, "leader out of range");
    if (leaders_.contains(v)) return *this;
    GroundedSystem next = *this;
    next.leaders_ = leaders_.with(v);
    const auto i = static_cast<Eigen::Index>(v);
    next.q_(i, i) += kappa_[v];
    next.eigenvalues_ = sym_eigenvalues(next.q_).eigenvalues;
    next.q_inverse_ = leaders_.empty() ? spd_inverse(next.q_)
                                       : sherman_morrison_update(q_inverse_, v, kappa_[v]);
    return next;
  }

  GroundedSystem with_gains(GainVector gains) const {
    GroundedSystem next = *this;
    next.gains_ = std::move(gains);
    return next;
  }

 private:
  Graph graph_;
  KappaWeights kappa_;
  LeaderSet leaders_;
  GainVector gains_;
  Matrix laplacian_;
  Matrix q_;
  Vector eigenvalues_;
  Matrix q_inverse_;
};

}  // namespace leadsel
