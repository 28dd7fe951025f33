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
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "leadsel/error.hpp"

namespace leadsel {

using NodeId = std::size_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted undirected graph with positive weights. Edges are stored with
// u < v and sorted lexicographically, so two graphs with the same edge set
// compare equal regardless of input order.
class Graph {
 public:
  Graph() = default;

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph build_graph(std::size_t n, std::vector<Edge> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

inline Graph build_graph(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw Error(ErrorCode::kNodeOutOfRange, "graph needs at least one node");
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kNodeOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") outside [0," + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw Error(ErrorCode::kSelfLoop, "self-loop at node " + std::to_string(e.u));
    if (!(e.weight > 0.0)) {
      throw Error(ErrorCode::kNonPositiveWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") has non-positive weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "duplicate edge (" + std::to_string(edges[i].u) + "," +
                      std::to_string(edges[i].v) + ")");
    }
  }
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  return g;
}

// Diagonal of D_kappa: one positive weight per node.
class KappaWeights {
 public:
  KappaWeights() = default;
  explicit KappaWeights(std::vector<double> values) : values_(std::move(values)) {
    for (double k : values_) {
      if (!(k > 0.0)) throw Error(ErrorCode::kNonPositiveWeight, "kappa entries must be positive");
    }
  }

  static KappaWeights ones(std::size_t n) { return KappaWeights(std::vector<double>(n, 1.0)); }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](NodeId i) const { return values_.at(i); }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const KappaWeights&, const KappaWeights&) = default;

 private:
  std::vector<double> values_;
};

// Sorted, duplicate-free set of node ids.
class LeaderSet {
 public:
  LeaderSet() = default;
  LeaderSet(std::initializer_list<NodeId> ids) : LeaderSet(std::vector<NodeId>(ids)) {}
  explicit LeaderSet(std::vector<NodeId> ids) : members_(std::move(ids)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  // Bitmask view, bit i set iff node i is a member. Only for n <= 64.
  static LeaderSet from_mask(std::uint64_t mask) {
    LeaderSet s;
    for (NodeId i = 0; mask != 0; ++i, mask >>= 1) {
      if (mask & 1U) s.members_.push_back(i);
    }
    return s;
  }

  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(NodeId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  const std::vector<NodeId>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  LeaderSet with(NodeId v) const {
    LeaderSet s = *this;
    auto it = std::lower_bound(s.members_.begin(), s.members_.end(), v);
    if (it == s.members_.end() || *it != v) s.members_.insert(it, v);
    return s;
  }

  void validate(std::size_t n) const {
    if (!members_.empty() && members_.back() >= n) {
      throw Error(ErrorCode::kNodeOutOfRange,
                  "leader " + std::to_string(members_.back()) + " outside [0," +
                      std::to_string(n) + ")");
    }
  }

  friend bool operator==(const LeaderSet&, const LeaderSet&) = default;

 private:
  std::vector<NodeId> members_;
};

inline Matrix laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix lap = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    lap(u, v) -= e.weight;
    lap(v, u) -= e.weight;
    lap(u, u) += e.weight;
    lap(v, v) += e.weight;
  }
  return lap;
}

// Q_S = L + D_kappa D_S.
inline Matrix grounded_laplacian(const Matrix& lap, const KappaWeights& kappa,
                                 const LeaderSet& leaders) {
  Matrix q = lap;
  for (NodeId v : leaders) {
    const auto i = static_cast<Eigen::Index>(v);
    q(i, i) += kappa[v];
  }
  return q;
}

inline bool is_connected(const Graph& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeId cur = frontier.front();
    frontier.pop();
    for (NodeId next : adj[cur]) {
      if (!seen[next]) {
        seen[next] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == n;
}

/// G(n, p) sample with every edge weight set to `weight`.
///
/// Stream order (fixed, so samples replicate across implementations):
/// std::mt19937_64 seeded with `seed`; unordered pairs (i, j), i < j, visited
/// in lexicographic order; each pair consumes one 64-bit output r, and the
/// edge is kept iff (r >> 11) * 2^-53 < p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed, double weight = 1.0) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "p must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) edges.push_back({i, j, weight});
    }
  }
  return build_graph(n, std::move(edges));
}

struct ConnectedSample {
  Graph graph;
  std::uint64_t seed_used = 0;
  // Number of rejected disconnected draws before `graph`.
  std::size_t resamples = 0;
};

// Draws erdos_renyi(n, p, seed + attempt) for attempt = 0, 1, ... until the
// sample is connected.
inline ConnectedSample erdos_renyi_connected(std::size_t n, double p, std::uint64_t seed,
                                             double weight = 1.0,
                                             std::size_t max_attempts = 1000) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Graph g = erdos_renyi(n, p, seed + attempt, weight);
    if (is_connected(g)) return {std::move(g), seed + attempt, attempt};
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no connected G(n,p) sample within " + std::to_string(max_attempts) + " attempts");
}

}  // namespace leadsel
