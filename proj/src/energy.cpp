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

#include "greenlan/energy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "greenlan/error.hpp"

namespace greenlan {
namespace {

constexpr double kDaysPerYear = 365.0;

int trunks_for(double load_mbps, double capacity_mbps) {
  if (load_mbps <= 0.0) return 0;
  return static_cast<int>(std::ceil(load_mbps / capacity_mbps));
}

// flows[a][b] = directed traffic from devices of switch a to devices of
// switch b, over all d switches.
std::vector<std::vector<double>> switch_flows(const Partition& p,
                                              const TrafficMatrix& m,
                                              std::size_t d) {
  std::vector<std::vector<double>> flows(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      flows[p.group_of(i)][p.group_of(j)] += m(i, j);
  return flows;
}

void check_partition(const Partition& p, const TrafficMatrix& m) {
  if (p.size() != m.size()) {
    fail_invalid(fmt::format("partition covers {} devices, matrix has {}",
                             p.size(), m.size()));
  }
}

}  // namespace

std::string_view to_string(TrunkTopology t) {
  return t == TrunkTopology::kChain ? "chain" : "mesh";
}

TrunkTopology parse_trunk_topology(std::string_view text) {
  if (text == "chain") return TrunkTopology::kChain;
  if (text == "mesh") return TrunkTopology::kMesh;
  fail_invalid(fmt::format("unknown trunk topology '{}'", text));
}

void FabricConfig::validate() const {
  if (d_switches < 1) fail_invalid("fabric: at least one switch required");
  if (device_ports_per_switch < 1) {
    fail_invalid("fabric: device_ports_per_switch must be >= 1");
  }
  if (device_ports_per_switch > ports_per_switch) {
    fail_invalid(fmt::format(
        "fabric: device_ports_per_switch {} exceeds ports_per_switch {}",
        device_ports_per_switch, ports_per_switch));
  }
  if (link_rates.empty()) fail_invalid("fabric: no link rates");
  for (std::size_t k = 0; k < link_rates.size(); ++k) {
    if (!(link_rates[k].capacity_mbps > 0.0)) {
      fail_invalid(fmt::format("fabric: rate '{}' capacity must be positive",
                               link_rates[k].name));
    }
    if (k > 0 && !(link_rates[k].capacity_mbps > link_rates[k - 1].capacity_mbps)) {
      fail_invalid("fabric: link rate capacities must be strictly increasing");
    }
  }
  if (!(trunk_capacity_mbps > 0.0)) {
    fail_invalid("fabric: trunk_capacity_mbps must be positive");
  }
  if (min_trunks_per_link < 0) fail_invalid("fabric: min_trunks_per_link < 0");
  if (wake_from_hibernate_s < 0.0 || wake_from_off_s < 0.0) {
    fail_invalid("fabric: wake latencies must be nonnegative");
  }
}

const LinkRate& FabricConfig::rate(std::string_view name) const {
  for (const auto& r : link_rates)
    if (r.name == name) return r;
  fail_invalid(fmt::format("unknown link rate '{}'", name));
}

PowerModel PowerModel::calibrated_default() {
  PowerModel pm;
  pm.base_w = 33.74;
  pm.port_w_by_rate = {{"100M", 0.09}, {"1G", 0.31}};
  pm.hibernate_w = 20.15;
  pm.off_w = 0.0;
  return pm;
}

void PowerModel::validate(const FabricConfig& fabric) const {
  if (off_w != 0.0) fail_invalid("power: off_w must be 0");
  if (hibernate_w < 0.0) fail_invalid("power: hibernate_w must be >= 0");
  if (hibernate_w > base_w) {
    fail_invalid(fmt::format("power: hibernate_w {} exceeds base_w {}",
                             hibernate_w, base_w));
  }
  double previous = 0.0;
  for (const auto& r : fabric.link_rates) {
    const auto it = port_w_by_rate.find(r.name);
    if (it == port_w_by_rate.end()) {
      fail_invalid(fmt::format("power: no per-port draw for rate '{}'", r.name));
    }
    if (it->second < previous) {
      fail_invalid(fmt::format(
          "power: per-port draw at '{}' is below a slower rate", r.name));
    }
    previous = it->second;
  }
}

std::string_view to_string(IdlePolicy p) {
  switch (p) {
    case IdlePolicy::kAlwaysActive: return "always-active";
    case IdlePolicy::kHibernateIdle: return "hibernate-idle";
    case IdlePolicy::kOffIdle: return "off-idle";
  }
  return "";
}

IdlePolicy parse_idle_policy(std::string_view text) {
  if (text == "always-active") return IdlePolicy::kAlwaysActive;
  if (text == "hibernate-idle") return IdlePolicy::kHibernateIdle;
  if (text == "off-idle") return IdlePolicy::kOffIdle;
  fail_invalid(fmt::format(
      "unknown policy '{}'; expected always-active, hibernate-idle or off-idle",
      text));
}

std::string_view to_string(SwitchState::Mode m) {
  switch (m) {
    case SwitchState::Mode::kActive: return "active";
    case SwitchState::Mode::kHibernate: return "hibernate";
    case SwitchState::Mode::kOff: return "off";
  }
  return "";
}

TrunkMap required_trunks(const Partition& p, const TrafficMatrix& m,
                         double capacity_mbps) {
  if (!(capacity_mbps > 0.0)) {
    fail_invalid(fmt::format("trunk capacity must be positive, got {}",
                             capacity_mbps));
  }
  check_partition(p, m);
  const std::size_t groups = p.group_count();
  const auto flows = switch_flows(p, m, groups);
  TrunkMap out;
  for (std::size_t a = 0; a < groups; ++a)
    for (std::size_t b = a + 1; b < groups; ++b)
      out[{a, b}] = trunks_for(flows[a][b] + flows[b][a], capacity_mbps);
  return out;
}

std::vector<GroupActivity> switch_activity(const Partition& p,
                                           const TrafficMatrix& m) {
  check_partition(p, m);
  std::vector<GroupActivity> out(p.group_count());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double w = m(i, j);
      if (w == 0.0) continue;
      const std::size_t a = p.group_of(i);
      const std::size_t b = p.group_of(j);
      if (a == b) {
        out[a].intra += w;
      } else {
        out[a].inter += w;
        out[b].inter += w;
      }
    }
  }
  for (auto& g : out) g.has_traffic = g.intra + g.inter > 0.0;
  return out;
}

TrunkPlan plan_trunks(const Partition& p, const TrafficMatrix& mbps,
                      const FabricConfig& fabric, IdlePolicy policy) {
  check_partition(p, mbps);
  if (mbps.unit() != TrafficUnit::kMbps) {
    fail_invalid("trunk planning needs a matrix in mbps");
  }
  const std::size_t d = fabric.d_switches;
  if (p.group_count() > d) {
    throw Error(ErrorKind::kInfeasible,
                fmt::format("partition has {} groups but the fabric only {} "
                            "switches",
                            p.group_count(), d));
  }
  const auto flows = switch_flows(p, mbps, d);
  auto both_ways = [&](std::size_t a, std::size_t b) {
    return flows[a][b] + flows[b][a];
  };

  std::vector<bool> busy(d, false);
  for (std::size_t s = 0; s < d; ++s) {
    for (std::size_t t = 0; t < d; ++t) {
      if (flows[s][t] > 0.0 || flows[t][s] > 0.0) busy[s] = true;
    }
  }

  TrunkPlan plan;
  if (fabric.topology == TrunkTopology::kChain) {
    // Traffic between switches a < b crosses every link in [a, b).
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 2; b < d; ++b) {
        if (both_ways(a, b) > 0.0)
          for (std::size_t s = a + 1; s < b; ++s) busy[s] = true;
      }
    }
    for (std::size_t k = 0; k + 1 < d; ++k) {
      double load = 0.0;
      for (std::size_t a = 0; a <= k; ++a)
        for (std::size_t b = k + 1; b < d; ++b) load += both_ways(a, b);
      plan.link_load_mbps[{k, k + 1}] = load;
    }
  } else {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b)
        plan.link_load_mbps[{a, b}] = both_ways(a, b);
  }

  plan.powered.assign(d, policy == IdlePolicy::kAlwaysActive);
  for (std::size_t s = 0; s < d; ++s)
    if (busy[s]) plan.powered[s] = true;

  for (const auto& [link, load] : plan.link_load_mbps) {
    if (!plan.powered[link.first] || !plan.powered[link.second]) continue;
    plan.trunks[link] = std::max(fabric.min_trunks_per_link,
                                 trunks_for(load, fabric.trunk_capacity_mbps));
  }
  return plan;
}

std::vector<SwitchState> plan_states(const Partition& p, const TrunkPlan& plan,
                                     IdlePolicy policy,
                                     const FabricConfig& fabric,
                                     const std::string& rate) {
  fabric.rate(rate);
  const std::size_t d = fabric.d_switches;
  if (plan.powered.size() != d) fail_invalid("trunk plan does not match fabric");
  std::vector<std::size_t> trunk_ports(d, 0);
  for (const auto& [link, count] : plan.trunks) {
    trunk_ports[link.first] += count;
    trunk_ports[link.second] += count;
  }

  std::vector<SwitchState> states;
  states.reserve(d);
  for (std::size_t s = 0; s < d; ++s) {
    if (!plan.powered[s]) {
      states.push_back(policy == IdlePolicy::kOffIdle ? SwitchState::off()
                                                      : SwitchState::hibernate());
      continue;
    }
    const std::size_t members = s < p.group_count() ? p.groups()[s].size() : 0;
    const std::size_t ports = members + trunk_ports[s];
    if (ports > fabric.ports_per_switch) {
      throw Error(ErrorKind::kInfeasible,
                  fmt::format("switch {} needs {} ports but has {}", s + 1,
                              ports, fabric.ports_per_switch));
    }
    states.push_back(SwitchState::active(ports, rate));
  }
  return states;
}

double fleet_power(std::span<const SwitchState> states, const PowerModel& pm) {
  double total = 0.0;
  for (const auto& s : states) {
    switch (s.mode) {
      case SwitchState::Mode::kActive: {
        const auto it = pm.port_w_by_rate.find(s.rate);
        if (it == pm.port_w_by_rate.end()) {
          fail_invalid(fmt::format("no per-port draw for rate '{}'", s.rate));
        }
        total += pm.base_w + static_cast<double>(s.active_ports) * it->second;
        break;
      }
      case SwitchState::Mode::kHibernate:
        total += pm.hibernate_w;
        break;
      case SwitchState::Mode::kOff:
        total += pm.off_w;
        break;
    }
  }
  return total;
}

double yearly_energy(std::span<const PeriodPower> periods) {
  double hours = 0.0;
  double kwh = 0.0;
  for (const auto& p : periods) {
    if (p.power_w < 0.0) {
      fail_invalid(fmt::format("period '{}' has negative power", p.name));
    }
    hours += p.hours_per_day;
    kwh += p.hours_per_day * p.power_w * kDaysPerYear / 1000.0;
  }
  if (std::abs(hours - 24.0) > 1e-9) {
    fail_invalid(fmt::format("period durations sum to {} h, not 24 h", hours));
  }
  return kwh;
}

double savings(const EnergyReport& baseline, const EnergyReport& optimized) {
  const auto& a = baseline.periods;
  const auto& b = optimized.periods;
  bool same = a.size() == b.size();
  for (std::size_t k = 0; same && k < a.size(); ++k)
    same = a[k].name == b[k].name && a[k].hours_per_day == b[k].hours_per_day;
  if (!same) fail_invalid("savings: reports cover different periods");
  return baseline.yearly_kwh - optimized.yearly_kwh;
}

std::vector<WakeEvent> wake_feasibility(std::span<const PeriodReport> periods,
                                        const FabricConfig& fabric) {
  std::vector<WakeEvent> events;
  const std::size_t count = periods.size();
  double boundary = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& prev = periods[(k + count - 1) % count];
    const auto& cur = periods[k];
    const std::size_t switches = std::min(prev.states.size(), cur.states.size());
    for (std::size_t s = 0; s < switches; ++s) {
      if (cur.states[s].mode != SwitchState::Mode::kActive) continue;
      switch (prev.states[s].mode) {
        case SwitchState::Mode::kHibernate:
          events.push_back({s, cur.name, boundary, fabric.wake_from_hibernate_s});
          break;
        case SwitchState::Mode::kOff:
          events.push_back({s, cur.name, boundary, fabric.wake_from_off_s});
          break;
        case SwitchState::Mode::kActive:
          break;
      }
    }
    boundary += cur.hours_per_day;
  }
  return events;
}

EnergyReport evaluate_energy(const Partition& p, const EnergyInputs& in,
                             IdlePolicy policy, const std::string& rate) {
  EnergyReport report;
  report.policy = std::string(to_string(policy));
  report.rate = rate;
  std::vector<PeriodPower> powers;
  for (const auto& period : in.periods) {
    const TrunkPlan plan = plan_trunks(p, period.matrix, in.fabric, policy);
    PeriodReport r;
    r.name = period.name;
    r.hours_per_day = period.hours_per_day;
    r.states = plan_states(p, plan, policy, in.fabric, rate);
    r.trunks = plan.trunks;
    r.link_load_mbps = plan.link_load_mbps;
    r.pair_trunks =
        required_trunks(p, period.matrix, in.fabric.trunk_capacity_mbps);
    r.activity = switch_activity(p, period.matrix);
    r.power_w = fleet_power(r.states, in.power);
    r.yearly_kwh = r.hours_per_day * r.power_w * kDaysPerYear / 1000.0;
    powers.push_back({r.name, r.hours_per_day, r.power_w});
    report.periods.push_back(std::move(r));
  }
  report.yearly_kwh = yearly_energy(powers);
  if (in.emission_kg_per_kwh) {
    report.emission_kgco2 = report.yearly_kwh * *in.emission_kg_per_kwh;
  }
  report.wake_events = wake_feasibility(report.periods, in.fabric);
  return report;
}

}  // namespace greenlan
