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

#include "greenlan/scenario.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "greenlan/error.hpp"

namespace greenlan {
namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    fail_invalid(fmt::format("{}: missing \"{}\"", where, key));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail_invalid(fmt::format("{}: \"{}\" has the wrong type", where, key));
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  return obj.contains(key) ? get_field<T>(obj, key, where) : fallback;
}

TrafficMatrix read_matrix(const json& node, TrafficUnit unit,
                          const std::filesystem::path& base_dir,
                          const std::string& where) {
  try {
    if (node.is_string()) {
      const auto path = base_dir / node.get<std::string>();
      const auto format = path.extension() == ".json" ? MatrixFormat::kJson
                                                      : MatrixFormat::kCsv;
      return parse_matrix(read_text_file(path), format, unit);
    }
    return parse_matrix(node.dump(), MatrixFormat::kJson, unit);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", where, e.what()));
  }
}

FabricConfig parse_fabric(const json& node) {
  const std::string where = "fabric";
  FabricConfig f;
  f.d_switches = get_field<std::size_t>(node, "switches", where);
  f.device_ports_per_switch =
      get_field<std::size_t>(node, "device_ports_per_switch", where);
  f.ports_per_switch = get_field<std::size_t>(node, "ports_per_switch", where);
  if (node.contains("link_rates")) {
    for (const auto& r : node.at("link_rates")) {
      f.link_rates.push_back({get_field<std::string>(r, "name", "link_rates"),
                              get_field<double>(r, "capacity_mbps", "link_rates")});
    }
  } else {
    f.link_rates = {{"100M", 100.0}, {"1G", 1000.0}};
  }
  f.trunk_capacity_mbps =
      get_or(node, "trunk_capacity_mbps", f.trunk_capacity_mbps, where);
  f.min_trunks_per_link =
      get_or(node, "min_trunks_per_link", f.min_trunks_per_link, where);
  f.topology = parse_trunk_topology(
      get_or<std::string>(node, "trunk_topology", "chain", where));
  f.wake_from_hibernate_s =
      get_or(node, "wake_from_hibernate_s", f.wake_from_hibernate_s, where);
  f.wake_from_off_s = get_or(node, "wake_from_off_s", f.wake_from_off_s, where);
  f.validate();
  return f;
}

PowerModel parse_power(const json& node) {
  const std::string where = "power";
  PowerModel pm = PowerModel::calibrated_default();
  pm.base_w = get_or(node, "base_w", pm.base_w, where);
  if (node.contains("port_w")) {
    pm.port_w_by_rate =
        get_field<std::map<std::string, double>>(node, "port_w", where);
  }
  pm.hibernate_w = get_or(node, "hibernate_w", pm.hibernate_w, where);
  return pm;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_invalid(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TrafficMatrix Scenario::optimization_matrix() const {
  if (combined) return *combined;
  return combine(periods);
}

std::vector<PeriodProfile> Scenario::periods_in_mbps() const {
  std::vector<PeriodProfile> out;
  for (const auto& p : periods) {
    if (p.matrix.unit() == TrafficUnit::kMbps) {
      out.push_back(p);
      continue;
    }
    if (!load_classes) {
      fail_invalid(fmt::format(
          "period '{}' is in abstract-load units but no load_classes are given",
          p.name));
    }
    out.push_back({p.name, p.hours_per_day,
                   load_to_bandwidth(p.matrix, *load_classes)});
  }
  return out;
}

Partition Scenario::baseline() const {
  if (baseline_partition) return *baseline_partition;
  return Partition::blocks(device_count(), fabric.device_ports_per_switch);
}

Scenario parse_scenario(const nlohmann::json& doc,
                        const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail_invalid("scenario: expected a JSON object");
  Scenario s;

  if (doc.contains("periods")) {
    for (const auto& node : doc.at("periods")) {
      const auto name = get_field<std::string>(node, "name", "period");
      const std::string where = fmt::format("period '{}'", name);
      const auto unit = parse_traffic_unit(
          get_or<std::string>(node, "unit", "abstract-load", where));
      if (!node.contains("matrix")) {
        fail_invalid(fmt::format("{}: missing \"matrix\"", where));
      }
      s.periods.push_back({name, get_field<double>(node, "hours", where),
                           read_matrix(node.at("matrix"), unit, base_dir, where)});
    }
  }
  if (doc.contains("combined")) {
    const auto unit = parse_traffic_unit(
        get_or<std::string>(doc, "combined_unit", "abstract-load", "scenario"));
    s.combined = read_matrix(doc.at("combined"), unit, base_dir, "combined");
  }
  if (s.periods.empty() && !s.combined) {
    fail_invalid("scenario: needs \"periods\" or a \"combined\" matrix");
  }
  if (!s.periods.empty()) validate_day_coverage(s.periods);

  std::size_t n = s.combined ? s.combined->size() : s.periods.front().matrix.size();
  for (const auto& p : s.periods) {
    if (p.matrix.size() != n) {
      fail_invalid(fmt::format(
          "device count mismatch: period '{}' has {} devices, expected {}",
          p.name, p.matrix.size(), n));
    }
  }
  if (doc.contains("devices")) {
    s.devices = get_field<std::vector<std::string>>(doc, "devices", "scenario");
    if (s.devices.size() != n) {
      fail_invalid(fmt::format(
          "device count mismatch: {} labels for {} matrix rows",
          s.devices.size(), n));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s.devices.push_back(std::to_string(i + 1));
  }

  if (doc.contains("load_classes")) {
    std::map<std::string, LoadClass> entries;
    for (const auto& [symbol, node] : doc.at("load_classes").items()) {
      const std::string where = fmt::format("load class '{}'", symbol);
      entries[symbol] = {get_field<int>(node, "frame_bytes", where),
                         get_field<int>(node, "pps", where)};
    }
    s.load_classes = LoadClassTable(std::move(entries));
  }

  if (!doc.contains("fabric")) fail_invalid("scenario: missing \"fabric\"");
  s.fabric = parse_fabric(doc.at("fabric"));
  s.power = doc.contains("power") ? parse_power(doc.at("power"))
                                  : PowerModel::calibrated_default();
  s.power.validate(s.fabric);
  if (doc.contains("power") && doc.at("power").contains("emission_kg_per_kwh")) {
    s.emission_kg_per_kwh =
        get_field<double>(doc.at("power"), "emission_kg_per_kwh", "power");
  }

  if (doc.contains("baseline_partition")) {
    s.baseline_partition = parse_partition(doc.at("baseline_partition"), n,
                                           s.fabric.device_ports_per_switch);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail_invalid(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_scenario(doc, path.parent_path());
}

Partition parse_partition(const nlohmann::json& doc, std::size_t n,
                          std::size_t capacity) {
  const json& groups_node = doc.is_object() ? doc.value("groups", json()) : doc;
  if (!groups_node.is_array()) {
    fail_invalid("partition: expected an array of groups");
  }
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& g : groups_node) {
    std::vector<std::size_t> members;
    for (const auto& v : g) {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        fail_invalid("partition: device numbers are 1-based integers");
      }
      members.push_back(v.get<std::size_t>() - 1);
    }
    groups.push_back(std::move(members));
  }
  return Partition::create(n, std::move(groups), capacity);
}

Partition load_partition(const std::filesystem::path& path, std::size_t n,
                         std::size_t capacity) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail_invalid(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_partition(doc, n, capacity);
}

nlohmann::ordered_json partition_to_json(const Partition& p) {
  nlohmann::ordered_json out;
  out["capacity"] = p.capacity();
  auto groups = nlohmann::ordered_json::array();
  for (const auto& g : p.groups()) {
    auto members = nlohmann::ordered_json::array();
    for (std::size_t v : g) members.push_back(v + 1);
    groups.push_back(std::move(members));
  }
  out["groups"] = std::move(groups);
  out["disconnected_input"] = p.disconnected_input();
  return out;
}

}  // namespace greenlan
