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
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "leadsel/graph_io.hpp"
#include "leadsel/selection.hpp"
#include "test_util.hpp"

namespace leadsel {
namespace {

GraphFile fig3() { return read_graph(LEADSEL_DATA_DIR "/fig3.json"); }

CoherenceObjective fig3_objective(int m) {
  const auto f = fig3();
  return {f.graph, f.kappa, auto_gains(f.graph, f.kappa, m)};
}

TEST(Selection, Fig3SingletonPicks) {
  // Paper labels are 1-based; node label 2 is id 1, label 4 is id 3.
  EXPECT_EQ(greedy_select(fig3_objective(1), 1).chosen, std::vector<NodeId>{1});
  EXPECT_EQ(exhaustive_select(fig3_objective(1), 1).chosen, std::vector<NodeId>{1});
  for (int m : {2, 3}) {
    EXPECT_EQ(greedy_select(fig3_objective(m), 1).chosen, std::vector<NodeId>{3});
    EXPECT_EQ(exhaustive_select(fig3_objective(m), 1).chosen, std::vector<NodeId>{3});
  }
}

TEST(Selection, Fig3FirstOrderTieIsExact) {
  const auto obj = fig3_objective(1);
  // tr Q^-1 = 40/3 for both label 2 and label 4.
  EXPECT_NEAR(obj.singleton_scaled(1), 40.0 / 3.0, 1e-12);
  EXPECT_NEAR(obj.singleton_scaled(3), 40.0 / 3.0, 1e-12);
  EXPECT_NEAR(obj.coherence(LeaderSet{1}), 20.0 / 51.0, 1e-14);
}

TEST(Selection, PathGraphPicksMiddle) {
  const Graph p3 = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const CoherenceObjective obj(p3, KappaWeights::ones(3), GainVector{1});
  EXPECT_NEAR(obj.coherence(LeaderSet{0}), 3.0, 1e-12);
  EXPECT_NEAR(obj.coherence(LeaderSet{1}), 2.5, 1e-12);
  EXPECT_NEAR(obj.coherence(LeaderSet{2}), 3.0, 1e-12);
  const auto r = greedy_select(obj, 1);
  EXPECT_EQ(r.chosen, std::vector<NodeId>{1});
  EXPECT_NEAR(r.final_h(), 2.5, 1e-12);
}

TEST(Selection, SymmetricTieGoesToSmallestId) {
  const Graph k2 = build_graph(2, {{0, 1, 1.0}});
  const CoherenceObjective obj(k2, KappaWeights::ones(2), GainVector{1, 1});
  for (const auto& r : {greedy_select(obj, 1), naive_greedy_select(obj, 1), exhaustive_select(obj, 1)}) {
    EXPECT_EQ(r.chosen, std::vector<NodeId>{0});
    EXPECT_NEAR(r.final_h(), 3.5, 1e-10);
  }
}

TEST(Selection, GreedyIsExactAtBudgetOne) {
  std::mt19937_64 rng(89);
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = testing::random_weighted_connected_graph(rng, 2, 10);
    const auto kappa = KappaWeights::ones(g.size());
    const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, 1 + rep % 4));
    const auto gr = greedy_select(obj, 1);
    const auto ex = exhaustive_select(obj, 1);
    EXPECT_EQ(gr.chosen, ex.chosen);
    EXPECT_DOUBLE_EQ(certify_bound(obj, 1).ratio, 0.0);
  }
}

TEST(Selection, IncrementalGreedyMatchesNaive) {
  std::mt19937_64 rng(97);
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = testing::random_weighted_connected_graph(rng, 3, 15);
    const auto kappa = KappaWeights::ones(g.size());
    const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, 1 + rep % 4));
    const std::size_t k = 1 + rng() % 5;
    const auto fast = greedy_select(obj, k);
    const auto slow = naive_greedy_select(obj, k);
    ASSERT_EQ(fast.chosen, slow.chosen);
    for (std::size_t i = 0; i < fast.f_values.size(); ++i) {
      EXPECT_NEAR(fast.f_values[i], slow.f_values[i], 1e-9);
      EXPECT_NEAR(fast.h_values[i], obj.coherence(LeaderSet(std::vector<NodeId>(
                                         fast.chosen.begin(), fast.chosen.begin() + i + 1))),
                  1e-9 * fast.h_values[i]);
    }
    EXPECT_EQ(fast.method, SelectionMethod::kGreedy);
    EXPECT_EQ(slow.method, SelectionMethod::kNaiveGreedy);
  }
}

TEST(Selection, TrajectoryIsMonotone) {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const Graph g = testing::random_connected_graph(rng, 6, 12);
    const auto kappa = KappaWeights::ones(g.size());
    const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, 2 + rep % 3));
    const auto r = greedy_select(obj, g.size());
    for (std::size_t i = 1; i < r.f_values.size(); ++i) {
      EXPECT_GT(r.f_values[i], r.f_values[i - 1]);
      EXPECT_LT(r.h_values[i], r.h_values[i - 1]);
    }
  }
}

TEST(Selection, ExhaustiveFindsTrueOptimum) {
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 10; ++rep) {
    const Graph g = testing::random_connected_graph(rng, 3, 8);
    const auto kappa = KappaWeights::ones(g.size());
    const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, 1 + rep % 4));
    const std::size_t k = 1 + rng() % 3;
    const auto ex = exhaustive_select(obj, k);
    double best = obj.coherence(ex.leader_set());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.size()); ++mask) {
      const LeaderSet s = LeaderSet::from_mask(mask);
      if (s.size() > k) continue;
      EXPECT_GE(obj.coherence(s), best * (1.0 - 1e-10));
    }
    EXPECT_NEAR(ex.final_h(), best, 1e-12 * best);
  }
}

TEST(Selection, BudgetAndCapErrors) {
  const auto obj = fig3_objective(2);
  EXPECT_THROW(greedy_select(obj, 0), Error);
  EXPECT_THROW(exhaustive_select(obj, 0), Error);
  const Graph big = erdos_renyi_connected(60, 0.3, 5).graph;
  const CoherenceObjective huge(big, KappaWeights::ones(60), auto_gains(big, KappaWeights::ones(60), 1));
  try {
    exhaustive_select(huge, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCombinatorialCap);
  }
  EXPECT_DOUBLE_EQ(binomial(5, 2), 10.0);
  EXPECT_DOUBLE_EQ(subset_count(5, 2), 15.0);
}

TEST(Selection, BudgetLargerThanGraph) {
  const auto obj = fig3_objective(2);
  const auto r = greedy_select(obj, 50);
  EXPECT_LE(r.chosen.size(), 6u);
  EXPECT_EQ(exhaustive_select(obj, 50).chosen.size(), 6u);
}

TEST(Certificate, SingleNodeAndBounds) {
  const CoherenceObjective one(build_graph(1, {}), KappaWeights::ones(1), GainVector{1, 1});
  const auto c1 = certify_bound(one, 3);
  EXPECT_DOUBLE_EQ(c1.ratio, 0.0);
  EXPECT_TRUE(c1.holds);

  std::mt19937_64 rng(107);
  for (int rep = 0; rep < 8; ++rep) {
    const Graph g = testing::random_connected_graph(rng, 6, 10);
    const auto kappa = KappaWeights::ones(g.size());
    const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, 1 + rep % 4));
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto c = certify_bound(obj, k);
      EXPECT_GE(c.ratio, -1e-12);
      EXPECT_LE(c.ratio, 1.0 / std::numbers::e);
      EXPECT_TRUE(c.holds);
      EXPECT_TRUE(c.coherence_holds);
      EXPECT_LE(c.k_bound, c.bound);
    }
  }
}

TEST(Properties, IdenticalArgumentsNeverViolate) {
  const auto obj = fig3_objective(3);
  auto f = [&](const LeaderSet& s) { return obj.value(s); };
  const auto r = check_monotone_submodular(f, 6, PropertyMode::kSampled, 0);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.checks, 0u);
}

TEST(Properties, CoherenceSetFunctionsExhaustive) {
  std::mt19937_64 rng(109);
  for (int rep = 0; rep < 4; ++rep) {
    const Graph g = testing::random_weighted_connected_graph(rng, 3, 7);
    const auto kappa = KappaWeights::ones(g.size());
    for (int m = 1; m <= 4; ++m) {
      const CoherenceObjective obj(g, kappa, auto_gains(g, kappa, m));
      const auto r = check_monotone_submodular([&](const LeaderSet& s) { return obj.value(s); },
                                               g.size(), PropertyMode::kExhaustive);
      EXPECT_TRUE(r.ok()) << "m=" << m << " violations " << r.violation_count;
      EXPECT_GT(r.checks, 0u);
    }
  }
}

TEST(Properties, LemmaFunctionRandomParameters) {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int rep = 0; rep < 6; ++rep) {
    const Graph g = testing::random_connected_graph(rng, 3, 7);
    const auto kappa = KappaWeights::ones(g.size());
    const double lam = min_singleton_lambda(g, kappa);
    const double b2 = u(rng);
    const LemmaSetFunction l1(g, kappa, {LemmaMode::kInverseProduct, u(rng), b2, 0.9 * b2 * lam});
    EXPECT_TRUE(check_monotone_submodular(l1, g.size(), PropertyMode::kExhaustive).ok());
    const double b2b = u(rng);
    const LemmaSetFunction l2(g, kappa, {LemmaMode::kFourthOrder, b2b + (1.0 + u(rng)) / lam, b2b});
    EXPECT_TRUE(check_monotone_submodular(l2, g.size(), PropertyMode::kSampled, 2000, 7).ok());
  }
}

TEST(Properties, DetectsViolations) {
  // |S|^2 is monotone but supermodular.
  auto f = [](const LeaderSet& s) { return static_cast<double>(s.size() * s.size()); };
  const auto r = check_monotone_submodular(f, 4, PropertyMode::kExhaustive);
  EXPECT_FALSE(r.ok());
  bool saw_sub = false, saw_mono = false;
  for (const auto& v : r.violations) {
    saw_sub |= v.kind == PropertyKind::kSubmodular;
    saw_mono |= v.kind == PropertyKind::kMonotone;
  }
  EXPECT_TRUE(saw_sub);
  EXPECT_FALSE(saw_mono);
  auto g = [](const LeaderSet& s) { return -static_cast<double>(s.size()); };
  EXPECT_FALSE(check_monotone_submodular(g, 3, PropertyMode::kExhaustive).ok());
  EXPECT_THROW(check_monotone_submodular(f, 9, PropertyMode::kExhaustive), Error);
}

}  // namespace
}  // namespace leadsel
