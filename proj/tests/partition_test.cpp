// Copyright 2026 The greenlan Authors
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

#include "greenlan/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "greenlan/error.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace greenlan {
namespace {

using Groups = std::vector<std::vector<std::size_t>>;

SymmetricGraph case_study_graph() {
  return symmetrize(TrafficMatrix::create(testing::case_study_combined()));
}

std::set<std::set<std::size_t>> as_sets(const Groups& groups) {
  std::set<std::set<std::size_t>> out;
  for (const auto& g : groups)
    if (!g.empty()) out.emplace(g.begin(), g.end());
  return out;
}

// Two triangles of weight 10 joined by a single unit edge 2-3.
SymmetricGraph two_cliques() {
  SquareMatrix a(6);
  auto edge = [&](std::size_t i, std::size_t j, double w) { a(i, j) = a(j, i) = w; };
  edge(0, 1, 10); edge(0, 2, 10); edge(1, 2, 10);
  edge(3, 4, 10); edge(3, 5, 10); edge(4, 5, 10);
  edge(2, 3, 1);
  return SymmetricGraph::create(a);
}

// Minimum cut over every assignment of n labels to d groups of <= cap.
double exhaustive_min_cut(const SquareMatrix& adj, std::size_t cap, std::size_t d) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> count(d, 0);
    bool ok = true;
    for (std::size_t v : label) ok &= ++count[v] <= cap;
    if (ok) best = std::min(best, testing::crossing_sum(adj, label));
    std::size_t k = 0;
    while (k < n && ++label[k] == d) label[k++] = 0;
    if (k == n) break;
  }
  return best;
}

TEST(PartitionTest, Validation) {
  EXPECT_THROW(Partition::create(3, {{0, 1}, {1, 2}}, 3), Error);
  EXPECT_THROW(Partition::create(3, {{0, 1}}, 3), Error);
  EXPECT_THROW(Partition::create(3, {{0, 1, 2}}, 2), Error);
  EXPECT_THROW(Partition::create(3, {{0, 1, 5}}, 3), Error);
  const auto p = Partition::create(3, {{2}, {0, 1}}, 2);
  EXPECT_EQ(p.group_of(2), 0u);
  const std::vector<std::size_t> serial = {2, 0, 1};
  EXPECT_EQ(p.serialization(), serial);
}

TEST(PartitionTest, Blocks) {
  const auto p = Partition::blocks(7, 3);
  const Groups expected = {{0, 1, 2}, {3, 4, 5}, {6}};
  EXPECT_EQ(p.groups(), expected);
}

TEST(CutSizeTest, CaseStudyBaselineAndOptimized) {
  const auto g = case_study_graph();
  const auto baseline = Partition::blocks(9, 3);
  EXPECT_DOUBLE_EQ(cut_size(g, baseline).cut_size, 3408.0);
  const auto optimized = Partition::create(9, {{2, 5, 6}, {1, 4, 8}, {7, 0, 3}}, 3);
  const auto report = cut_size(g, optimized);
  EXPECT_DOUBLE_EQ(report.cut_size, 96.0);
  EXPECT_DOUBLE_EQ(report.cut_size,
                   testing::crossing_sum(g.adjacency(),
                                         testing::labels_from_groups(9, optimized.groups())));
  double flows = 0.0;
  for (const auto& [pair, w] : report.pair_flows) {
    EXPECT_LT(pair.first, pair.second);
    flows += w;
  }
  EXPECT_DOUBLE_EQ(flows, 96.0);
  EXPECT_FALSE(report.ratio.has_value());
}

TEST(CutSizeTest, SingleGroupAndRatio) {
  const auto g = two_cliques();
  EXPECT_DOUBLE_EQ(cut_size(g, Partition::create(6, {{0, 1, 2, 3, 4, 5}}, 6)).cut_size, 0.0);
  const auto r = cut_size(g, Partition::create(6, {{0, 1, 2}, {3, 4, 5}}, 3));
  EXPECT_DOUBLE_EQ(r.cut_size, 1.0);
  ASSERT_TRUE(r.ratio.has_value());
  EXPECT_DOUBLE_EQ(*r.ratio, 1.0 / 3.0);
}

TEST(CutSizeTest, MatchesDirectSum) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto adj = testing::random_adjacency(n, 0.5, rng);
    std::vector<std::size_t> label(n);
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    Groups groups(3);
    for (std::size_t v = 0; v < n; ++v) groups[label[v] = pick(rng)].push_back(v);
    const auto p = Partition::create(n, groups, n);
    EXPECT_NEAR(cut_size(SymmetricGraph::create(adj), p).cut_size,
                testing::crossing_sum(adj, label), 1e-9);
  }
}

TEST(SplitTest, SignThreshold) {
  FiedlerResult f;
  f.vector = {0.6, -0.2, -0.4, 0.1};
  f.ordering = sorted_ordering(f.vector);
  const auto g = SymmetricGraph::create(SquareMatrix(4, 0.0));
  const auto s = split(f, SplitStrategy::kSign, g);
  EXPECT_EQ(s.upper, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(s.lower, (std::vector<std::size_t>{1, 2}));
  EXPECT_FALSE(s.fell_back);
}

TEST(SplitTest, BisectionMedian) {
  FiedlerResult f;
  f.vector = {0.5, -0.1, -0.3, 0.2, 0.0};
  f.ordering = sorted_ordering(f.vector);
  const auto g = SymmetricGraph::create(SquareMatrix(5));
  const auto s = split(f, SplitStrategy::kBisection, g);
  EXPECT_DOUBLE_EQ(s.threshold, 0.0);
  EXPECT_EQ(s.upper, (std::vector<std::size_t>{0, 3}));
}

TEST(SplitTest, GapPicksWidestJump) {
  FiedlerResult f;
  f.vector = {-0.5, -0.4, 0.3, 0.4};
  f.ordering = sorted_ordering(f.vector);
  const auto g = SymmetricGraph::create(SquareMatrix(4));
  const auto s = split(f, SplitStrategy::kGap, g);
  EXPECT_NEAR(s.threshold, -0.05, 1e-12);
  EXPECT_EQ(s.lower, (std::vector<std::size_t>{0, 1}));
}

TEST(SplitTest, RatioMatchesPrefixEnumeration) {
  const auto g = case_study_graph();
  const auto outcome = fiedler(laplacian(g));
  const auto& f = std::get<FiedlerResult>(outcome);
  const auto s = split(f, SplitStrategy::kRatio, g);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 1; k < 9; ++k) {
    std::vector<std::size_t> label(9, 1);
    for (std::size_t i = 0; i < k; ++i) label[f.ordering[i]] = 0;
    const double phi = testing::crossing_sum(g.adjacency(), label) /
                       static_cast<double>(std::min(k, 9 - k));
    if (phi < best) best = phi, best_k = k;
  }
  EXPECT_EQ(s.lower.size(), best_k);
  EXPECT_FALSE(s.fell_back);
  std::vector<std::size_t> label(9, 1);
  for (std::size_t v : s.lower) label[v] = 0;
  EXPECT_NEAR(testing::crossing_sum(g.adjacency(), label) /
                  static_cast<double>(std::min(best_k, 9 - best_k)),
              best, 1e-9);
}

TEST(SplitTest, FallsBackToBisection) {
  FiedlerResult f;
  f.vector = {0.5, 0.5, 0.5};
  f.ordering = sorted_ordering(f.vector);
  const auto g = SymmetricGraph::create(SquareMatrix(3));
  const auto s = split(f, SplitStrategy::kSign, g);
  EXPECT_TRUE(s.fell_back);
  EXPECT_EQ(s.lower.size(), 2u);
  EXPECT_EQ(s.upper.size(), 1u);
}

TEST(RsbTest, CaseStudyGroups) {
  const auto p = rsb_optimized(case_study_graph(), 3, 3);
  const std::set<std::set<std::size_t>> expected = {{2, 5, 6}, {1, 4, 8}, {0, 3, 7}};
  EXPECT_EQ(as_sets(p.groups()), expected);
  EXPECT_DOUBLE_EQ(cut_size(case_study_graph(), p).cut_size, 96.0);
  EXPECT_FALSE(p.disconnected_input());
}

TEST(RsbTest, SingleSwitchHoldsEverything) {
  const auto p = rsb_optimized(case_study_graph(), 9, 1);
  EXPECT_EQ(p.group_count(), 1u);
  EXPECT_EQ(p.groups()[0].size(), 9u);
}

TEST(RsbTest, SeparatesCliques) {
  const auto p = rsb_optimized(two_cliques(), 3, 2);
  const std::set<std::set<std::size_t>> expected = {{0, 1, 2}, {3, 4, 5}};
  EXPECT_EQ(as_sets(p.groups()), expected);
}

TEST(RsbTest, DisconnectedCliquesAreKeptWhole) {
  SquareMatrix a = two_cliques().adjacency();
  a(2, 3) = a(3, 2) = 0.0;
  const auto p = rsb_optimized(SymmetricGraph::create(a), 3, 2);
  EXPECT_TRUE(p.disconnected_input());
  EXPECT_DOUBLE_EQ(cut_size(SymmetricGraph::create(a), p).cut_size, 0.0);
}

TEST(RsbTest, UnpackableComponentsSplitTheLightest) {
  // Four two-vertex components cannot share three switches of three ports.
  SquareMatrix a(8);
  const double weights[] = {5, 1, 7, 9};
  for (std::size_t k = 0; k < 4; ++k) a(2 * k, 2 * k + 1) = a(2 * k + 1, 2 * k) = weights[k];
  const auto g = SymmetricGraph::create(a);
  const auto p = rsb_optimized(g, 3, 3);
  EXPECT_DOUBLE_EQ(cut_size(g, p).cut_size, 1.0);
  EXPECT_TRUE(p.disconnected_input());
}

TEST(RsbTest, InfeasibleCapacity) {
  try {
    rsb_optimized(case_study_graph(), 3, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
  EXPECT_THROW(rsb_optimized(case_study_graph(), 0, 3), Error);
}

TEST(RsbTest, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t ports = 1 + trial % 4;
    const std::size_t d = 1 + (trial / 4) % 5;
    const std::size_t n = 1 + rng() % (ports * d);
    const auto adj = testing::random_adjacency(n, 0.1 + 0.1 * (trial % 9), rng);
    const auto p = rsb_optimized(SymmetricGraph::create(adj), ports, d);
    EXPECT_LE(p.group_count(), d);
    std::vector<std::size_t> seen(n, 0);
    for (const auto& group : p.groups()) {
      EXPECT_LE(group.size(), ports);
      for (std::size_t v : group) ++seen[v];
    }
    for (std::size_t c : seen) EXPECT_EQ(c, 1u);
  }
}

TEST(BruteForceTest, CaseStudyOptimum) {
  const auto g = case_study_graph();
  const auto p = brute_force_min_cut(g, 3, 3);
  EXPECT_DOUBLE_EQ(cut_size(g, p).cut_size, 96.0);
}

TEST(BruteForceTest, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t ports = 2 + trial % 3;
    const std::size_t d = 2 + (trial / 3) % 2;
    const std::size_t n = 2 + rng() % (ports * d - 1);
    const auto adj = testing::random_adjacency(n, 0.5, rng);
    const auto g = SymmetricGraph::create(adj);
    const auto p = brute_force_min_cut(g, ports, d);
    EXPECT_NEAR(cut_size(g, p).cut_size, exhaustive_min_cut(adj, ports, d), 1e-9);
    const auto rsb = rsb_optimized(g, ports, d);
    EXPECT_LE(cut_size(g, p).cut_size, cut_size(g, rsb).cut_size + 1e-9);
  }
}

TEST(BruteForceTest, Limits) {
  EXPECT_THROW(brute_force_min_cut(SymmetricGraph::create(SquareMatrix(13)), 13, 1),
               Error);
  try {
    brute_force_min_cut(SymmetricGraph::create(SquareMatrix(5)), 2, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

}  // namespace
}  // namespace greenlan
