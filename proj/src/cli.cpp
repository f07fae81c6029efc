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

#include "greenlan/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <fmt/format.h>

#include "greenlan/energy.hpp"
#include "greenlan/error.hpp"
#include "greenlan/json_out.hpp"
#include "greenlan/partition.hpp"
#include "greenlan/scenario.hpp"
#include "greenlan/spectral.hpp"

namespace greenlan::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kOptimizeFile = "optimize.json";
constexpr const char* kPartitionFile = "partition.json";
constexpr const char* kEnergyFile = "energy.json";

constexpr IdlePolicy kPolicies[] = {IdlePolicy::kAlwaysActive,
                                    IdlePolicy::kHibernateIdle,
                                    IdlePolicy::kOffIdle};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_invalid(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail_invalid(fmt::format("cannot create '{}': {}", dir, ec.message()));
  return fs::path(dir);
}

Json one_based(std::span<const std::size_t> vertices) {
  Json out = Json::array();
  for (std::size_t v : vertices) out.push_back(v + 1);
  return out;
}

Json matrix_json(const TrafficMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json cut_json(const CutReport& c) {
  Json out;
  out["cut_size"] = c.cut_size;
  Json flows = Json::array();
  for (const auto& [pair, w] : c.pair_flows) {
    flows.push_back({{"groups", {pair.first + 1, pair.second + 1}}, {"weight", w}});
  }
  out["pair_flows"] = std::move(flows);
  if (c.ratio) out["ratio"] = *c.ratio;
  return out;
}

std::string file_stem(std::size_t index, const std::string& name) {
  std::string clean;
  for (char ch : name) {
    clean += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')
                 ? ch
                 : '_';
  }
  return fmt::format("reordered_{}_{}.csv", index + 1, clean);
}

Partition optimize_partition(const Scenario& s) {
  const SymmetricGraph g = symmetrize(s.optimization_matrix());
  return rsb_optimized(g, s.fabric.device_ports_per_switch, s.fabric.d_switches);
}

int cmd_optimize(const std::string& scenario_path, const std::string& out_dir,
                 std::ostream& out) {
  const Scenario s = load_scenario(scenario_path);
  const TrafficMatrix c = s.optimization_matrix();
  const SymmetricGraph g = symmetrize(c);
  const LaplacianMatrix l = laplacian(g);
  const Partition p =
      rsb_optimized(g, s.fabric.device_ports_per_switch, s.fabric.d_switches);
  const auto order = p.serialization();

  Json doc;
  doc["devices"] = s.devices;
  doc["switches"] = s.fabric.d_switches;
  doc["device_ports_per_switch"] = s.fabric.device_ports_per_switch;
  doc["laplacian_degrees"] = l.degrees;
  if (g.size() < 2) {
    doc["fiedler"] = nullptr;
  } else {
    const auto outcome = fiedler(l);
    Json f;
    if (const auto* r = std::get_if<FiedlerResult>(&outcome)) {
      f["connected"] = true;
      f["lambda2"] = r->lambda2;
      f["degenerate"] = r->degenerate;
      f["vector"] = r->vector;
      f["ordering"] = one_based(r->ordering);
    } else {
      const auto& d = std::get<DisconnectedGraph>(outcome);
      f["connected"] = false;
      f["lambda2"] = d.lambda2;
      Json comps = Json::array();
      for (const auto& comp : d.components) comps.push_back(one_based(comp));
      f["components"] = std::move(comps);
    }
    doc["fiedler"] = std::move(f);
  }
  doc["partition"] = partition_to_json(p);
  doc["serialization"] = one_based(order);
  doc["cut"] = cut_json(cut_size(g, p));
  const Partition baseline = s.baseline();
  doc["baseline"] = {{"partition", partition_to_json(baseline)},
                     {"cut", cut_json(cut_size(g, baseline))}};

  const fs::path dir = ensure_dir(out_dir);
  Json reordered = Json::array();
  std::vector<std::string> labels;
  for (std::size_t v : order) labels.push_back(s.devices[v]);
  for (std::size_t k = 0; k < s.periods.size(); ++k) {
    const auto& period = s.periods[k];
    const TrafficMatrix m = period.matrix.reordered(order);
    reordered.push_back({{"name", period.name},
                         {"devices", labels},
                         {"matrix", matrix_json(m)}});
    std::string csv;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      csv += (i ? "," : "") + labels[i];
    }
    csv += "\n" + serialize_matrix(m, MatrixFormat::kCsv);
    write_file(dir / file_stem(k, period.name), csv);
  }
  doc["reordered_periods"] = std::move(reordered);

  write_file(dir / kPartitionFile, dump_fixed(partition_to_json(p)));
  write_file(dir / kOptimizeFile, dump_fixed(doc));

  out << "partition:";
  for (const auto& grp : p.groups()) {
    out << " {";
    for (std::size_t i = 0; i < grp.size(); ++i) out << (i ? "," : "") << grp[i] + 1;
    out << "}";
  }
  out << "\nwrote " << (dir / kOptimizeFile).string() << "\n";
  return 0;
}

Json trunks_json(const TrunkMap& trunks,
                 const std::map<GroupPair, double>* loads) {
  Json out = Json::array();
  for (const auto& [pair, count] : trunks) {
    Json t;
    t["switches"] = {pair.first + 1, pair.second + 1};
    t["count"] = count;
    if (loads) {
      const auto it = loads->find(pair);
      t["load_mbps"] = it == loads->end() ? 0.0 : it->second;
    }
    out.push_back(std::move(t));
  }
  return out;
}

Json energy_json(const EnergyReport& r) {
  Json periods = Json::array();
  for (const auto& p : r.periods) {
    Json pj;
    pj["name"] = p.name;
    pj["hours"] = p.hours_per_day;
    pj["power_w"] = p.power_w;
    pj["yearly_kwh"] = p.yearly_kwh;
    Json states = Json::array();
    for (std::size_t s = 0; s < p.states.size(); ++s) {
      Json st;
      st["switch"] = s + 1;
      st["mode"] = std::string(to_string(p.states[s].mode));
      st["active_ports"] = p.states[s].active_ports;
      states.push_back(std::move(st));
    }
    pj["states"] = std::move(states);
    pj["trunks"] = trunks_json(p.trunks, &p.link_load_mbps);
    pj["pair_trunks"] = trunks_json(p.pair_trunks, nullptr);
    Json activity = Json::array();
    for (std::size_t g = 0; g < p.activity.size(); ++g) {
      activity.push_back({{"group", g + 1},
                          {"has_traffic", p.activity[g].has_traffic},
                          {"intra", p.activity[g].intra},
                          {"inter", p.activity[g].inter}});
    }
    pj["activity"] = std::move(activity);
    periods.push_back(std::move(pj));
  }
  Json out;
  out["policy"] = r.policy;
  out["rate"] = r.rate;
  out["periods"] = std::move(periods);
  out["yearly_kwh"] = r.yearly_kwh;
  if (r.emission_kgco2) out["emission_kgco2"] = *r.emission_kgco2;
  Json wakes = Json::array();
  for (const auto& w : r.wake_events) {
    wakes.push_back({{"switch", w.switch_index + 1},
                     {"period", w.period},
                     {"boundary_hour", w.boundary_hour},
                     {"lead_time_s", w.lead_time_s}});
  }
  out["wake_events"] = std::move(wakes);
  return out;
}

int cmd_energy(const std::string& scenario_path, const std::string& partition_arg,
               const std::string& policy_arg,
               const std::optional<std::string>& baseline_arg,
               const std::optional<std::string>& rate_arg,
               const std::string& out_dir, std::ostream& out) {
  const IdlePolicy policy = parse_idle_policy(policy_arg);
  const Scenario s = load_scenario(scenario_path);
  if (s.periods.empty()) {
    fail_invalid("energy: scenario has no periods to evaluate");
  }
  const std::string rate = rate_arg ? *rate_arg : s.fabric.link_rates.front().name;
  s.fabric.rate(rate);

  const std::size_t n = s.device_count();
  const std::size_t cap = s.fabric.device_ports_per_switch;
  const Partition p = partition_arg == "auto"
                          ? optimize_partition(s)
                          : load_partition(partition_arg, n, cap);
  std::optional<Partition> baseline;
  if (baseline_arg) {
    baseline = *baseline_arg == "scenario" ? s.baseline()
                                           : load_partition(*baseline_arg, n, cap);
  }

  const auto periods = s.periods_in_mbps();
  const EnergyInputs inputs{periods, s.fabric, s.power, s.emission_kg_per_kwh};
  const EnergyReport report = evaluate_energy(p, inputs, policy, rate);

  Json doc;
  doc["partition"] = partition_to_json(p);
  const Json body = energy_json(report);
  for (const auto& [key, value] : body.items()) doc[key] = value;

  std::optional<EnergyReport> base_report;
  if (baseline) {
    base_report =
        evaluate_energy(*baseline, inputs, IdlePolicy::kAlwaysActive, rate);
    const double saved = savings(*base_report, report);
    Json b = energy_json(*base_report);
    b["partition"] = partition_to_json(*baseline);
    doc["baseline"] = std::move(b);
    doc["savings_kwh"] = saved;
  }

  Json summary = Json::array();
  for (const auto& lr : s.fabric.link_rates) {
    std::optional<EnergyReport> base_at_rate;
    if (baseline) {
      base_at_rate =
          evaluate_energy(*baseline, inputs, IdlePolicy::kAlwaysActive, lr.name);
    }
    for (IdlePolicy pol : kPolicies) {
      const EnergyReport r = evaluate_energy(p, inputs, pol, lr.name);
      Json row;
      row["policy"] = std::string(to_string(pol));
      row["rate"] = lr.name;
      Json per_period;
      for (const auto& pr : r.periods) per_period[pr.name] = pr.yearly_kwh;
      row["period_kwh"] = std::move(per_period);
      row["yearly_kwh"] = r.yearly_kwh;
      if (base_at_rate) {
        row["baseline_kwh"] = base_at_rate->yearly_kwh;
        row["savings_kwh"] = savings(*base_at_rate, r);
      }
      summary.push_back(std::move(row));
    }
  }
  doc["summary"] = std::move(summary);

  const fs::path dir = ensure_dir(out_dir);
  write_file(dir / kEnergyFile, dump_fixed(doc));
  out << fmt::format("{} @ {}: {:.4f} kWh/year", report.policy, rate,
                     report.yearly_kwh);
  if (base_report) {
    out << fmt::format(" (baseline {:.4f}, savings {:.4f})",
                       base_report->yearly_kwh, doc["savings_kwh"].get<double>());
  }
  out << "\nwrote " << (dir / kEnergyFile).string() << "\n";
  return 0;
}

std::optional<nlohmann::json> read_json_if_present(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail_invalid(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string groups_line(const nlohmann::json& groups) {
  std::string s;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    s += fmt::format("  S{}:", g + 1);
    for (const auto& v : groups[g]) s += fmt::format(" {}", v.get<int>());
    s += "\n";
  }
  return s;
}

void render_text(const std::optional<nlohmann::json>& opt,
                 const std::optional<nlohmann::json>& energy, std::ostream& out) {
  if (opt) {
    const auto& part = opt->at("partition");
    out << fmt::format("Partition ({} groups, capacity {})\n",
                       part.at("groups").size(), part.at("capacity").get<int>());
    out << groups_line(part.at("groups"));
    out << fmt::format("Cut size: {:.4f} (baseline {:.4f})\n",
                       opt->at("cut").at("cut_size").get<double>(),
                       opt->at("baseline").at("cut").at("cut_size").get<double>());
    const auto& f = opt->at("fiedler");
    if (!f.is_null() && f.at("connected").get<bool>()) {
      out << fmt::format("Fiedler value: {:.4f}\n", f.at("lambda2").get<double>());
      out << "  vertex  component\n";
      const auto& vec = f.at("vector");
      for (std::size_t i = 0; i < vec.size(); ++i) {
        out << fmt::format("  {:>6}  {:>9.4f}\n", i + 1, vec[i].get<double>());
      }
      out << "  sorted:";
      for (const auto& v : f.at("ordering")) out << " " << v.get<int>();
      out << "\n";
    } else if (!f.is_null()) {
      out << "Graph is disconnected; components handled independently\n";
    }
  }
  if (energy) {
    if (opt) out << "\n";
    out << fmt::format("Energy ({}, {})\n", energy->at("policy").get<std::string>(),
                       energy->at("rate").get<std::string>());
    out << fmt::format("  {:<14} {:>6} {:>10} {:>10}  states\n", "period", "hours",
                       "power_w", "kwh/year");
    for (const auto& p : energy->at("periods")) {
      std::string states;
      for (const auto& st : p.at("states")) {
        states += fmt::format(" {}", st.at("mode").get<std::string>());
      }
      out << fmt::format("  {:<14} {:>6.1f} {:>10.4f} {:>10.4f} {}\n",
                         p.at("name").get<std::string>(),
                         p.at("hours").get<double>(), p.at("power_w").get<double>(),
                         p.at("yearly_kwh").get<double>(), states);
    }
    out << fmt::format("  total {:.4f} kWh/year\n",
                       energy->at("yearly_kwh").get<double>());
    if (energy->contains("savings_kwh")) {
      out << fmt::format("  savings vs baseline {:.4f} kWh/year\n",
                         energy->at("savings_kwh").get<double>());
    }

    std::vector<std::string> rates;
    std::vector<std::string> policies;
    std::map<std::pair<std::string, std::string>, nlohmann::json> cells;
    for (const auto& row : energy->at("summary")) {
      const auto pol = row.at("policy").get<std::string>();
      const auto rate = row.at("rate").get<std::string>();
      if (std::find(rates.begin(), rates.end(), rate) == rates.end()) rates.push_back(rate);
      if (std::find(policies.begin(), policies.end(), pol) == policies.end()) {
        policies.push_back(pol);
      }
      cells[{pol, rate}] = row;
    }
    auto table = [&](const char* title, const char* field) {
      out << "\n" << title << "\n" << fmt::format("  {:<16}", "policy");
      for (const auto& r : rates) out << fmt::format(" {:>12}", r);
      out << "\n";
      for (const auto& pol : policies) {
        out << fmt::format("  {:<16}", pol);
        for (const auto& r : rates) {
          const auto& cell = cells[{pol, r}];
          out << (cell.contains(field)
                      ? fmt::format(" {:>12.4f}", cell.at(field).get<double>())
                      : fmt::format(" {:>12}", "-"));
        }
        out << "\n";
      }
    };
    table("Yearly energy (kWh/year)", "yearly_kwh");
    if (!energy->at("summary").empty() &&
        energy->at("summary").front().contains("savings_kwh")) {
      table("Savings vs baseline (kWh/year)", "savings_kwh");
    }
  }
}

void render_csv(const std::optional<nlohmann::json>& opt,
                const std::optional<nlohmann::json>& energy, std::ostream& out) {
  if (energy) {
    out << "policy,rate,yearly_kwh,baseline_kwh,savings_kwh\n";
    for (const auto& row : energy->at("summary")) {
      out << fmt::format("{},{},{:.4f}", row.at("policy").get<std::string>(),
                         row.at("rate").get<std::string>(),
                         row.at("yearly_kwh").get<double>());
      if (row.contains("savings_kwh")) {
        out << fmt::format(",{:.4f},{:.4f}\n", row.at("baseline_kwh").get<double>(),
                           row.at("savings_kwh").get<double>());
      } else {
        out << ",,\n";
      }
    }
    return;
  }
  out << "device,group,fiedler\n";
  const auto& groups = opt->at("partition").at("groups");
  const auto& f = opt->at("fiedler");
  const bool has_vector = !f.is_null() && f.contains("vector");
  std::map<int, std::size_t> group_of;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto& v : groups[g]) group_of[v.get<int>()] = g + 1;
  for (const auto& [device, g] : group_of) {
    out << fmt::format("{},{}", device, g);
    if (has_vector) {
      out << fmt::format(",{:.4f}", f.at("vector")[device - 1].get<double>());
    }
    out << "\n";
  }
}

int cmd_report(const std::string& dir, const std::string& format,
               std::ostream& out) {
  if (format != "text" && format != "json" && format != "csv") {
    fail_invalid(fmt::format("unknown format '{}'; expected text, json or csv",
                             format));
  }
  const auto opt = read_json_if_present(fs::path(dir) / kOptimizeFile);
  const auto energy = read_json_if_present(fs::path(dir) / kEnergyFile);
  if (!opt && !energy) {
    fail_invalid(fmt::format("no {} or {} in '{}'", kOptimizeFile, kEnergyFile, dir));
  }
  if (format == "json") {
    Json doc;
    if (opt) doc["optimize"] = Json::parse(opt->dump());
    if (energy) doc["energy"] = Json::parse(energy->dump());
    out << dump_fixed(doc);
  } else if (format == "csv") {
    render_csv(opt, energy, out);
  } else {
    render_text(opt, energy, out);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Spectral re-cabling and energy accounting for switched LANs",
               "greenlan"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  auto* optimize = app.add_subcommand(
      "optimize", "Partition devices onto switches by recursive spectral bisection");
  optimize->add_option("scenario", scenario, "Scenario JSON file")->required();
  optimize->add_option("--out", out_dir, "Output directory");

  std::string partition_arg;
  std::string policy_arg;
  std::optional<std::string> baseline_arg;
  std::optional<std::string> rate_arg;
  auto* energy = app.add_subcommand("energy", "Evaluate yearly switch energy");
  energy->add_option("scenario", scenario, "Scenario JSON file")->required();
  energy->add_option("--partition", partition_arg,
                     "Partition JSON file, or 'auto' to optimize first")
      ->required();
  energy->add_option("--policy", policy_arg,
                     "always-active | hibernate-idle | off-idle")
      ->required();
  energy->add_option("--baseline", baseline_arg,
                     "Baseline partition file, or 'scenario' for the scenario's");
  energy->add_option("--rate", rate_arg, "Link rate name (default: first listed)");
  energy->add_option("--out", out_dir, "Output directory");

  std::string report_dir;
  std::string format = "text";
  auto* report = app.add_subcommand("report", "Render results from an output directory");
  report->add_option("dir", report_dir, "Directory with optimize/energy output")
      ->required();
  report->add_option("--format", format, "text | json | csv");

  if (args.empty()) {
    err << app.help();
    return 1;
  }
  std::vector<std::string> argv_storage{"greenlan"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*optimize) return cmd_optimize(scenario, out_dir, out);
    if (*energy) {
      return cmd_energy(scenario, partition_arg, policy_arg, baseline_arg, rate_arg,
                        out_dir, out);
    }
    return cmd_report(report_dir, format, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace greenlan::cli
