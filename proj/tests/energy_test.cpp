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

#include <random>

#include "greenlan/error.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace greenlan {
namespace {

FabricConfig case_study_fabric() {
  FabricConfig f;
  f.d_switches = 3;
  f.ports_per_switch = 8;
  f.device_ports_per_switch = 3;
  f.link_rates = {{"100M", 100.0}, {"1G", 1000.0}};
  return f;
}

std::vector<PeriodProfile> case_study_periods() {
  const auto table = LoadClassTable::case_study();
  return {{"working", 16,
           load_to_bandwidth(TrafficMatrix::create(testing::case_study_working_loads()),
                             table)},
          {"nonworking", 8,
           load_to_bandwidth(
               TrafficMatrix::create(testing::case_study_nonworking_loads()), table)}};
}

Partition optimized() {
  return Partition::create(9, {{2, 5, 6}, {1, 4, 8}, {7, 0, 3}}, 3);
}

TrafficMatrix mbps(SquareMatrix m) {
  return TrafficMatrix::create(std::move(m), TrafficUnit::kMbps);
}

std::size_t total_ports(const std::vector<SwitchState>& states) {
  std::size_t n = 0;
  for (const auto& s : states) n += s.active_ports;
  return n;
}

TEST(RequiredTrunksTest, CeilOfLoad) {
  SquareMatrix m(2);
  m(0, 1) = 1800;
  const auto p = Partition::create(2, {{0}, {1}}, 1);
  EXPECT_EQ((required_trunks(p, mbps(m), 1000.0).at({0, 1})), 2);
  m(0, 1) = 90;
  EXPECT_EQ((required_trunks(p, mbps(m), 100.0).at({0, 1})), 1);
  m(0, 1) = 60;
  m(1, 0) = 60;
  EXPECT_EQ((required_trunks(p, mbps(m), 100.0).at({0, 1})), 2);
  EXPECT_EQ((required_trunks(p, mbps(SquareMatrix(2)), 100.0).at({0, 1})), 0);
  EXPECT_THROW(required_trunks(p, mbps(m), 0.0), Error);
}

TEST(RequiredTrunksTest, CaseStudyOneGigabitLink) {
  const auto periods = case_study_periods();
  const auto base = required_trunks(Partition::blocks(9, 3), periods[0].matrix, 1000.0);
  const auto opt = required_trunks(optimized(), periods[0].matrix, 1000.0);
  int base_total = 0, opt_total = 0;
  for (const auto& [pair, n] : base) base_total += n;
  for (const auto& [pair, n] : opt) opt_total += n;
  EXPECT_GE(base_total, opt_total);
}

TEST(SwitchActivityTest, IntraAndInter) {
  SquareMatrix m(4);
  m(0, 1) = 5;
  m(1, 2) = 7;
  const auto p = Partition::create(4, {{0, 1}, {2}, {3}}, 2);
  const auto act = switch_activity(p, mbps(m));
  EXPECT_DOUBLE_EQ(act[0].intra, 5.0);
  EXPECT_DOUBLE_EQ(act[0].inter, 7.0);
  EXPECT_DOUBLE_EQ(act[1].inter, 7.0);
  EXPECT_TRUE(act[1].has_traffic);
  EXPECT_FALSE(act[2].has_traffic);
}

TEST(SwitchActivityTest, ConservesTraffic) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto m = mbps(testing::random_adjacency(n, 0.5, rng));
    const auto p = Partition::blocks(n, 3);
    double total = 0.0;
    for (const auto& a : switch_activity(p, m)) total += a.intra + 0.5 * a.inter;
    EXPECT_NEAR(total, m.total(), 1e-9 * (1.0 + m.total()));
  }
}

TEST(PlanTrunksTest, ChainTransitKeepsMiddleSwitchPowered) {
  SquareMatrix m(3);
  m(0, 2) = 1500;
  const auto p = Partition::create(3, {{0}, {1}, {2}}, 1);
  auto fabric = case_study_fabric();
  const auto plan = plan_trunks(p, mbps(m), fabric, IdlePolicy::kHibernateIdle);
  EXPECT_EQ(plan.powered, (std::vector<bool>{true, true, true}));
  EXPECT_DOUBLE_EQ((plan.link_load_mbps.at({0, 1})), 1500.0);
  EXPECT_DOUBLE_EQ((plan.link_load_mbps.at({1, 2})), 1500.0);
  EXPECT_EQ((plan.trunks.at({0, 1})), 2);
  EXPECT_EQ((plan.trunks.at({1, 2})), 2);

  fabric.topology = TrunkTopology::kMesh;
  const auto mesh = plan_trunks(p, mbps(m), fabric, IdlePolicy::kHibernateIdle);
  EXPECT_EQ(mesh.powered, (std::vector<bool>{true, false, true}));
  EXPECT_EQ((mesh.trunks.at({0, 2})), 2);
  EXPECT_EQ(mesh.trunks.count({0, 1}), 0u);
}

TEST(PlanTrunksTest, IdleLinksKeepMinimumTrunk) {
  const auto p = Partition::create(3, {{0}, {1}, {2}}, 1);
  const auto plan = plan_trunks(p, mbps(SquareMatrix(3)), case_study_fabric(),
                                IdlePolicy::kAlwaysActive);
  EXPECT_EQ((plan.trunks.at({0, 1})), 1);
  EXPECT_EQ((plan.trunks.at({1, 2})), 1);
  const auto idle = plan_trunks(p, mbps(SquareMatrix(3)), case_study_fabric(),
                                IdlePolicy::kOffIdle);
  EXPECT_TRUE(idle.trunks.empty());
}

TEST(PlanTrunksTest, RejectsLoadsAndTooManyGroups) {
  const auto p = Partition::blocks(3, 1);
  EXPECT_THROW(plan_trunks(p, TrafficMatrix::zeros(3), case_study_fabric(),
                           IdlePolicy::kAlwaysActive),
               Error);
  const auto four = Partition::blocks(4, 1);
  try {
    plan_trunks(four, mbps(SquareMatrix(4)), case_study_fabric(),
                IdlePolicy::kAlwaysActive);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(PlanStatesTest, PortsAndModes) {
  const auto periods = case_study_periods();
  const auto fabric = case_study_fabric();
  const auto working = plan_trunks(optimized(), periods[0].matrix, fabric,
                                   IdlePolicy::kHibernateIdle);
  const auto states = plan_states(optimized(), working, IdlePolicy::kHibernateIdle,
                                  fabric, "100M");
  EXPECT_EQ(total_ports(states), 13u);

  const auto night = plan_trunks(optimized(), periods[1].matrix, fabric,
                                 IdlePolicy::kOffIdle);
  const auto off = plan_states(optimized(), night, IdlePolicy::kOffIdle, fabric, "1G");
  EXPECT_EQ(off[0], SwitchState::off());
  EXPECT_EQ(off[1], SwitchState::active(3, "1G"));
  EXPECT_EQ(off[2], SwitchState::off());
  EXPECT_THROW(plan_states(optimized(), night, IdlePolicy::kOffIdle, fabric, "10G"),
               Error);
}

TEST(PlanStatesTest, PortOverflowIsInfeasible) {
  auto fabric = case_study_fabric();
  fabric.ports_per_switch = 3;
  const auto plan = plan_trunks(optimized(), case_study_periods()[0].matrix, fabric,
                                IdlePolicy::kAlwaysActive);
  try {
    plan_states(optimized(), plan, IdlePolicy::kAlwaysActive, fabric, "100M");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(FleetPowerTest, Examples) {
  const auto pm = PowerModel::calibrated_default();
  const std::vector<SwitchState> three(3, SwitchState::active(5, "100M"));
  EXPECT_NEAR(fleet_power(three, pm), 102.57, 1e-9);
  const std::vector<SwitchState> one = {SwitchState::active(5, "100M")};
  EXPECT_NEAR(fleet_power(one, pm), 34.19, 1e-9);
  const std::vector<SwitchState> idle = {SwitchState::hibernate(), SwitchState::off()};
  EXPECT_NEAR(fleet_power(idle, pm), 20.15, 1e-12);
  const std::vector<SwitchState> bad = {SwitchState::active(1, "10G")};
  EXPECT_THROW(fleet_power(bad, pm), Error);
}

TEST(PowerModelTest, Validation) {
  const auto fabric = case_study_fabric();
  EXPECT_NO_THROW(PowerModel::calibrated_default().validate(fabric));
  auto pm = PowerModel::calibrated_default();
  pm.hibernate_w = 40.0;
  EXPECT_THROW(pm.validate(fabric), Error);
  pm = PowerModel::calibrated_default();
  pm.port_w_by_rate["1G"] = 0.01;
  EXPECT_THROW(pm.validate(fabric), Error);
  pm = PowerModel::calibrated_default();
  pm.port_w_by_rate.erase("1G");
  EXPECT_THROW(pm.validate(fabric), Error);
}

TEST(YearlyEnergyTest, Examples) {
  const std::vector<PeriodPower> a = {{"w", 16, 102.5}, {"n", 8, 102.6}};
  EXPECT_NEAR(yearly_energy(a), 898.192, 1e-9);
  const std::vector<PeriodPower> b = {{"w", 16, 106.3}, {"n", 8, 105.8}};
  EXPECT_NEAR(yearly_energy(b), 929.728, 1e-9);
  const std::vector<PeriodPower> zero = {{"all", 24, 0.0}};
  EXPECT_DOUBLE_EQ(yearly_energy(zero), 0.0);
  const std::vector<PeriodPower> short_day = {{"w", 16, 100.0}};
  EXPECT_THROW(yearly_energy(short_day), Error);
}

class CaseStudyEnergyTest : public ::testing::Test {
 protected:
  std::vector<PeriodProfile> periods = case_study_periods();
  FabricConfig fabric = case_study_fabric();
  PowerModel power = PowerModel::calibrated_default();

  EnergyReport run(const Partition& p, IdlePolicy policy, const std::string& rate) {
    return evaluate_energy(p, {periods, fabric, power, 0.5}, policy, rate);
  }
};

TEST_F(CaseStudyEnergyTest, BaselineAlwaysActive) {
  const auto r = run(Partition::blocks(9, 3), IdlePolicy::kAlwaysActive, "100M");
  EXPECT_EQ(total_ports(r.periods[0].states), 17u);
  EXPECT_EQ(total_ports(r.periods[1].states), 13u);
  EXPECT_NEAR(r.periods[0].power_w, 3 * 33.74 + 17 * 0.09, 1e-9);
  EXPECT_NEAR(r.yearly_kwh, (102.75 * 16 + 102.39 * 8) * 0.365, 1e-9);
  ASSERT_TRUE(r.emission_kgco2.has_value());
  EXPECT_NEAR(*r.emission_kgco2, 0.5 * r.yearly_kwh, 1e-9);
  EXPECT_TRUE(r.wake_events.empty());
}

TEST_F(CaseStudyEnergyTest, OptimizedPolicies) {
  const auto always = run(optimized(), IdlePolicy::kAlwaysActive, "100M");
  const auto hib = run(optimized(), IdlePolicy::kHibernateIdle, "100M");
  const auto off = run(optimized(), IdlePolicy::kOffIdle, "100M");
  const double working = (3 * 33.74 + 13 * 0.09) * 16 * 0.365;
  EXPECT_NEAR(always.periods[0].yearly_kwh, working, 1e-9);
  EXPECT_NEAR(hib.periods[1].power_w, 33.74 + 3 * 0.09 + 2 * 20.15, 1e-9);
  EXPECT_NEAR(off.periods[1].power_w, 33.74 + 3 * 0.09, 1e-9);
  EXPECT_NEAR(off.yearly_kwh, working + 34.01 * 8 * 0.365, 1e-9);

  const auto baseline = run(Partition::blocks(9, 3), IdlePolicy::kAlwaysActive, "100M");
  EXPECT_NEAR(savings(baseline, hib), baseline.yearly_kwh - hib.yearly_kwh, 1e-12);
  EXPECT_GT(savings(baseline, hib), 0.0);
}

TEST_F(CaseStudyEnergyTest, WakeLeadTimes) {
  const auto hib = run(optimized(), IdlePolicy::kHibernateIdle, "1G");
  ASSERT_EQ(hib.wake_events.size(), 2u);
  for (const auto& e : hib.wake_events) {
    EXPECT_EQ(e.period, "working");
    EXPECT_DOUBLE_EQ(e.boundary_hour, 0.0);
    EXPECT_DOUBLE_EQ(e.lead_time_s, 260.0);
    EXPECT_NE(e.switch_index, 1u);
  }
  const auto off = run(optimized(), IdlePolicy::kOffIdle, "1G");
  ASSERT_EQ(off.wake_events.size(), 2u);
  EXPECT_DOUBLE_EQ(off.wake_events[0].lead_time_s, 290.0);
}

TEST_F(CaseStudyEnergyTest, SavingsNeedMatchingPeriods) {
  auto a = run(optimized(), IdlePolicy::kAlwaysActive, "1G");
  auto b = a;
  b.periods.pop_back();
  EXPECT_THROW(savings(a, b), Error);
}

TEST(EnergyOrderingTest, PoliciesAndRatesAreMonotone) {
  std::mt19937_64 rng(47);
  auto fabric = case_study_fabric();
  fabric.ports_per_switch = 48;
  const auto power = PowerModel::calibrated_default();
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 8;
    std::vector<PeriodProfile> periods = {
        {"day", 10, mbps(testing::random_adjacency(n, 0.4, rng))},
        {"night", 14, mbps(testing::random_adjacency(n, 0.1, rng))}};
    const auto p = Partition::blocks(n, 3);
    const EnergyInputs in{periods, fabric, power, std::nullopt};
    for (const char* rate : {"100M", "1G"}) {
      const double always = evaluate_energy(p, in, IdlePolicy::kAlwaysActive, rate).yearly_kwh;
      const double hib = evaluate_energy(p, in, IdlePolicy::kHibernateIdle, rate).yearly_kwh;
      const double off = evaluate_energy(p, in, IdlePolicy::kOffIdle, rate).yearly_kwh;
      EXPECT_GE(always + 1e-9, hib);
      EXPECT_GE(hib + 1e-9, off);
      EXPECT_GE(off, 0.0);
    }
    EXPECT_GE(evaluate_energy(p, in, IdlePolicy::kOffIdle, "1G").yearly_kwh + 1e-9,
              evaluate_energy(p, in, IdlePolicy::kOffIdle, "100M").yearly_kwh);
  }
}

}  // namespace
}  // namespace greenlan
