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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenlan/energy.hpp"
#include "greenlan/partition.hpp"
#include "greenlan/traffic.hpp"

namespace greenlan {

/// Everything one optimize/energy run needs, loaded from a scenario file.
struct Scenario {
  std::vector<std::string> devices;
  std::vector<PeriodProfile> periods;
  /// Pre-combined matrix; when present it replaces combine(periods) as the
  /// graph to partition.
  std::optional<TrafficMatrix> combined;
  std::optional<LoadClassTable> load_classes;
  FabricConfig fabric;
  PowerModel power;
  std::optional<double> emission_kg_per_kwh;
  std::optional<Partition> baseline_partition;

  std::size_t device_count() const { return devices.size(); }
  TrafficMatrix optimization_matrix() const;
  /// Period matrices converted to mbps through the load classes.
  std::vector<PeriodProfile> periods_in_mbps() const;
  /// The configured baseline, or consecutive blocks of device ports.
  Partition baseline() const;
};

/// Matrix entries may be inline arrays or CSV paths relative to `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc,
                        const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Partition files hold 1-based groups: {"capacity": 3, "groups": [[...]]}.
Partition parse_partition(const nlohmann::json& doc, std::size_t n,
                          std::size_t capacity);
Partition load_partition(const std::filesystem::path& path, std::size_t n,
                         std::size_t capacity);
nlohmann::ordered_json partition_to_json(const Partition& p);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace greenlan
