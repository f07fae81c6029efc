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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "greenlan/spectral.hpp"

namespace greenlan {

/// Assignment of devices to switch groups. Vertices are 0-based internally;
/// group order is the serialization order.
class Partition {
 public:
  /// Throws unless groups are disjoint, cover 0..n-1 and each fits capacity.
  static Partition create(std::size_t n, std::vector<std::vector<std::size_t>> groups,
                          std::size_t capacity);
  /// Consecutive index blocks of `capacity` devices.
  static Partition blocks(std::size_t n, std::size_t capacity);

  std::size_t size() const { return n_; }
  std::size_t capacity() const { return capacity_; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  std::size_t group_count() const { return groups_.size(); }
  std::size_t group_of(std::size_t vertex) const { return group_of_[vertex]; }
  /// Concatenation of the groups.
  std::vector<std::size_t> serialization() const;

  /// Set when some subgraph on the recursion path was disconnected.
  bool disconnected_input() const { return disconnected_input_; }
  void set_disconnected_input(bool v) { disconnected_input_ = v; }

 private:
  std::size_t n_ = 0;
  std::size_t capacity_ = 0;
  std::vector<std::vector<std::size_t>> groups_;
  std::vector<std::size_t> group_of_;
  bool disconnected_input_ = false;
};

using GroupPair = std::pair<std::size_t, std::size_t>;

struct CutReport {
  double cut_size = 0.0;
  /// Keyed by (a, b) with a < b; only pairs with crossing weight > 0.
  std::map<GroupPair, double> pair_flows;
  /// cut / min(|V1|, |V2|); present for two-group partitions only.
  std::optional<double> ratio;
};

CutReport cut_size(const SymmetricGraph& g, const Partition& p);

enum class SplitStrategy { kBisection, kSign, kRatio, kGap };

struct FiedlerSplit {
  /// Vertices with u_i > threshold.
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  double threshold = 0.0;
  /// The requested strategy emptied one side; bisection was used instead.
  bool fell_back = false;
};

FiedlerSplit split(const FiedlerResult& f, SplitStrategy strategy,
                   const SymmetricGraph& g);

/// Recursive spectral bisection that peels off n_ports * floor(d/2) devices
/// per level until every group fits one switch.
Partition rsb_optimized(const SymmetricGraph& g, std::size_t n_ports,
                        std::size_t d_switches);

inline constexpr std::size_t kBruteForceMaxVertices = 12;

/// Exhaustive minimum cut over assignments into at most d_switches groups of
/// at most n_ports devices. Ties go to the lexicographically smallest
/// assignment with groups numbered by first appearance.
Partition brute_force_min_cut(const SymmetricGraph& g, std::size_t n_ports,
                              std::size_t d_switches);

}  // namespace greenlan
