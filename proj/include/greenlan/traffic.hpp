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
#include <string>
#include <string_view>
#include <vector>

#include "greenlan/matrix.hpp"

namespace greenlan {

enum class TrafficUnit { kAbstractLoad, kMbps };

std::string_view to_string(TrafficUnit unit);
TrafficUnit parse_traffic_unit(std::string_view text);

/// Directed, nonnegative device-to-device traffic with an empty diagonal.
/// Indices are 0-based here; every user-facing format is 1-based.
class TrafficMatrix {
 public:
  /// Validates squareness, nonnegativity and the zero diagonal.
  static TrafficMatrix create(SquareMatrix weights,
                              TrafficUnit unit = TrafficUnit::kAbstractLoad);
  static TrafficMatrix zeros(std::size_t n,
                             TrafficUnit unit = TrafficUnit::kAbstractLoad);

  std::size_t size() const { return weights_.size(); }
  double operator()(std::size_t from, std::size_t to) const {
    return weights_(from, to);
  }
  const SquareMatrix& weights() const { return weights_; }
  TrafficUnit unit() const { return unit_; }
  double total() const;

  /// Rows and columns permuted so that entry (a, b) is (order[a], order[b]).
  TrafficMatrix reordered(std::span<const std::size_t> order) const;

  friend bool operator==(const TrafficMatrix&, const TrafficMatrix&) = default;

 private:
  TrafficMatrix(SquareMatrix weights, TrafficUnit unit)
      : weights_(std::move(weights)), unit_(unit) {}

  SquareMatrix weights_;
  TrafficUnit unit_ = TrafficUnit::kAbstractLoad;
};

struct PeriodProfile {
  std::string name;
  double hours_per_day = 0.0;
  TrafficMatrix matrix;
};

/// Throws unless every profile lasts (0, 24] hours and together they cover
/// exactly one day.
void validate_day_coverage(std::span<const PeriodProfile> profiles);

struct LoadClass {
  int frame_bytes = 0;
  int packets_per_second = 0;

  double mbps() const {
    return static_cast<double>(frame_bytes) * 8.0 * packets_per_second / 1e6;
  }
};

/// Maps abstract load symbols ("10", "1", ...) onto offered bandwidth.
class LoadClassTable {
 public:
  LoadClassTable() = default;
  explicit LoadClassTable(std::map<std::string, LoadClass> entries);

  /// Large (1125 B x 10000 pps) and small (1125 B x 1000 pps) transmissions.
  static LoadClassTable case_study();

  const std::map<std::string, LoadClass>& entries() const { return entries_; }
  /// The class whose symbol parses to exactly `value`, if any.
  std::optional<LoadClass> find(double value) const;

 private:
  std::map<std::string, LoadClass> entries_;
};

/// C[i][j] = sum_k hours_k * matrix_k[i][j].
TrafficMatrix combine(std::span<const PeriodProfile> profiles);

TrafficMatrix load_to_bandwidth(const TrafficMatrix& loads,
                                const LoadClassTable& table);

enum class MatrixFormat { kCsv, kJson };

TrafficMatrix parse_matrix(std::string_view text, MatrixFormat format,
                           TrafficUnit unit = TrafficUnit::kAbstractLoad);
std::string serialize_matrix(const TrafficMatrix& m, MatrixFormat format);

}  // namespace greenlan
