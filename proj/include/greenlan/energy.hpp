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

#include "greenlan/partition.hpp"
#include "greenlan/traffic.hpp"

namespace greenlan {

struct LinkRate {
  std::string name;
  double capacity_mbps = 0.0;
};

/// How trunk links are cabled between switches. In a chain, switch k links
/// only to k-1 and k+1 and traffic between distant switches transits the ones
/// in between. In a mesh every pair of switches links directly.
enum class TrunkTopology { kChain, kMesh };

std::string_view to_string(TrunkTopology t);
TrunkTopology parse_trunk_topology(std::string_view text);

struct FabricConfig {
  std::size_t d_switches = 0;
  std::size_t ports_per_switch = 0;
  std::size_t device_ports_per_switch = 0;
  std::vector<LinkRate> link_rates;
  /// Capacity of one trunk link when sizing inter-switch bundles.
  double trunk_capacity_mbps = 1000.0;
  /// Trunks kept between two powered switches even without traffic.
  int min_trunks_per_link = 1;
  TrunkTopology topology = TrunkTopology::kChain;
  double wake_from_hibernate_s = 260.0;
  double wake_from_off_s = 290.0;

  void validate() const;
  const LinkRate& rate(std::string_view name) const;
};

struct PowerModel {
  double base_w = 0.0;
  std::map<std::string, double> port_w_by_rate;
  double hibernate_w = 0.0;
  double off_w = 0.0;

  /// Chassis and per-port draw fitted to the measured 2960-X fleet.
  static PowerModel calibrated_default();

  /// Checks 0 = off <= hibernate <= active at every rate, and per-port draw
  /// non-decreasing with the rate capacities in `fabric`.
  void validate(const FabricConfig& fabric) const;
};

enum class IdlePolicy { kAlwaysActive, kHibernateIdle, kOffIdle };

std::string_view to_string(IdlePolicy p);
IdlePolicy parse_idle_policy(std::string_view text);

struct SwitchState {
  enum class Mode { kActive, kHibernate, kOff };

  Mode mode = Mode::kOff;
  std::size_t active_ports = 0;
  std::string rate;

  static SwitchState active(std::size_t ports, std::string rate) {
    return {Mode::kActive, ports, std::move(rate)};
  }
  static SwitchState hibernate() { return {Mode::kHibernate, 0, {}}; }
  static SwitchState off() { return {Mode::kOff, 0, {}}; }

  friend bool operator==(const SwitchState&, const SwitchState&) = default;
};

std::string_view to_string(SwitchState::Mode m);

using TrunkMap = std::map<GroupPair, int>;

/// ceil(F / capacity) trunks for every group pair with direct crossing flow
/// F > 0 (both directions summed); zero-flow pairs map to 0.
TrunkMap required_trunks(const Partition& p, const TrafficMatrix& m,
                         double capacity_mbps);

struct GroupActivity {
  bool has_traffic = false;
  double intra = 0.0;
  double inter = 0.0;
};

/// One entry per group of `p`.
std::vector<GroupActivity> switch_activity(const Partition& p,
                                           const TrafficMatrix& m);

/// Per-switch view of one period: which switches must be powered and how
/// many trunks each powered link needs. Switches beyond the partition's
/// groups carry no devices.
struct TrunkPlan {
  std::vector<bool> powered;
  /// Links between powered switches; chain links are (k, k+1).
  TrunkMap trunks;
  /// Mbps carried per link, including transit in a chain.
  std::map<GroupPair, double> link_load_mbps;
};

TrunkPlan plan_trunks(const Partition& p, const TrafficMatrix& mbps,
                      const FabricConfig& fabric, IdlePolicy policy);

/// Powered switches become active with members + trunk ports; idle ones
/// hibernate or switch off per policy.
std::vector<SwitchState> plan_states(const Partition& p, const TrunkPlan& plan,
                                     IdlePolicy policy,
                                     const FabricConfig& fabric,
                                     const std::string& rate);

double fleet_power(std::span<const SwitchState> states, const PowerModel& pm);

struct PeriodPower {
  std::string name;
  double hours_per_day = 0.0;
  double power_w = 0.0;
};

/// sum hours * watts * 365 / 1000; durations must cover 24 h.
double yearly_energy(std::span<const PeriodPower> periods);

struct PeriodReport {
  std::string name;
  double hours_per_day = 0.0;
  std::vector<SwitchState> states;
  TrunkMap trunks;
  std::map<GroupPair, double> link_load_mbps;
  TrunkMap pair_trunks;
  std::vector<GroupActivity> activity;
  double power_w = 0.0;
  double yearly_kwh = 0.0;
};

struct WakeEvent {
  std::size_t switch_index = 0;
  /// Period that starts at the boundary.
  std::string period;
  double boundary_hour = 0.0;
  double lead_time_s = 0.0;
};

struct EnergyReport {
  std::string policy;
  std::string rate;
  std::vector<PeriodReport> periods;
  double yearly_kwh = 0.0;
  std::optional<double> savings_vs_baseline_kwh;
  std::optional<double> emission_kgco2;
  std::vector<WakeEvent> wake_events;
};

/// baseline.yearly_kwh - optimized.yearly_kwh; the periods must match.
double savings(const EnergyReport& baseline, const EnergyReport& optimized);

/// Wake-up lead times for every switch leaving hibernate/off at a period
/// boundary, with the day treated as a cycle.
std::vector<WakeEvent> wake_feasibility(
    std::span<const PeriodReport> periods, const FabricConfig& fabric);

struct EnergyInputs {
  /// Per-period matrices in mbps.
  std::span<const PeriodProfile> periods;
  const FabricConfig& fabric;
  const PowerModel& power;
  std::optional<double> emission_kg_per_kwh;
};

EnergyReport evaluate_energy(const Partition& p, const EnergyInputs& in,
                             IdlePolicy policy, const std::string& rate);

}  // namespace greenlan
