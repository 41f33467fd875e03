// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/psm_model.hpp"

#include <algorithm>
#include <set>

#include "bevpsm/errors.hpp"

namespace bevpsm {

using lp::Entry;
using lp::IndexRange;
using lp::kInf;
using lp::RowSense;

namespace {

std::string hour_name(std::string_view prefix, int t) {
  std::string s(prefix);
  s += '_';
  s += std::to_string(t);
  return s;
}

// H variables named `<prefix>_<t>` registered as one block.
IndexRange add_hourly(lp::LpProblem& p, const std::string& key, const std::string& prefix, int horizon,
                      double lower, double upper, double cost) {
  const int first = p.num_variables();
  for (int t = 0; t < horizon; ++t) p.add_variable(hour_name(prefix, t), lower, upper, cost);
  const IndexRange r{first, horizon};
  p.variable_blocks().add(key, r);
  return r;
}

int add_capacity(lp::LpProblem& p, const std::string& key, const std::string& name, double lower,
                 double upper, double cost) {
  const int v = p.add_variable(name, lower, upper, cost);
  p.variable_blocks().add(key, IndexRange{v, 1});
  return v;
}

// x_t - factor_t * capacity <= 0 for every hour.
void add_capacity_rows(lp::LpProblem& p, const std::string& prefix, IndexRange x, int capacity,
                       const std::vector<double>* factor) {
  for (int t = 0; t < x.count; ++t) {
    const double f = factor ? (*factor)[factor->size() == 1 ? 0 : static_cast<std::size_t>(t)] : 1.0;
    std::vector<Entry> e{{x[t], 1.0}};
    if (f != 0.0) e.push_back({capacity, -f});
    p.add_row(hour_name(prefix, t), RowSense::kLessEqual, 0.0, std::move(e));
  }
}

int previous(int t, int horizon) { return t == 0 ? horizon - 1 : t - 1; }

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kNone: return "reference";
    case Strategy::kSmart: return "smart";
    case Strategy::kBidirectional: return "bidirectional";
  }
  return "reference";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "reference" || name == "none") return Strategy::kNone;
  if (name == "smart") return Strategy::kSmart;
  if (name == "bidirectional") return Strategy::kBidirectional;
  throw ConfigError("unknown charging strategy '" + std::string(name) + "'");
}

PsmModel build_node_model(const Node& node, int horizon, double carbon_price) {
  if (horizon < 2) throw InputError("horizon must be at least 2 hours");
  if (static_cast<int>(node.load.size()) != horizon) {
    throw InputError("load of node " + node.id + " does not match the horizon");
  }
  PsmModel m;
  m.horizon = horizon;
  m.nodes = {node.id};
  auto& p = m.lp;
  p.set_name(node.id);
  const double share = horizon / kHoursPerYear;
  const std::string& n = node.id;

  const int balance_first = p.num_rows();
  for (int t = 0; t < horizon; ++t) {
    p.add_row(hour_name("bal_" + n, t), RowSense::kEqual, node.load[static_cast<std::size_t>(t)]);
  }
  const IndexRange balance{balance_first, horizon};
  p.row_blocks().add("balance/" + n, balance);

  for (const auto& g : node.generators) {
    if (g.availability.size() != 1 && static_cast<int>(g.availability.size()) != horizon) {
      throw InputError("availability of " + n + "/" + g.name + " does not match the horizon");
    }
    const std::string tag = n + "_" + g.name;
    const int cap = add_capacity(p, "cap/" + n + "/" + g.name, "K_" + tag, g.min_capacity,
                                 g.max_capacity, share * (g.investment_cost + g.fixed_om));
    const IndexRange x = add_hourly(p, "gen/" + n + "/" + g.name, "g_" + tag, horizon, 0.0, kInf,
                                    g.variable_cost + carbon_price * g.co2_intensity);
    add_capacity_rows(p, "gcap_" + tag, x, cap, &g.availability);
    for (int t = 0; t < horizon; ++t) p.add_to_row(balance[t], x[t], 1.0);
  }

  for (const auto& s : node.storage) {
    const std::string tag = n + "_" + s.name;
    const std::string key = n + "/" + s.name;
    if (!s.inflow.empty() && static_cast<int>(s.inflow.size()) != horizon) {
      throw InputError("inflow of " + key + " does not match the horizon");
    }
    const int power = add_capacity(p, "cap/" + key + "/power", "P_" + tag, s.min_power, s.max_power,
                                   share * s.power_cost);
    const int energy = add_capacity(p, "cap/" + key + "/energy", "E_" + tag, s.min_energy,
                                    s.max_energy, share * s.energy_cost);
    IndexRange ch{0, 0};
    if (s.can_charge) ch = add_hourly(p, "charge/" + key, "ch_" + tag, horizon, 0.0, kInf, 0.0);
    const IndexRange dis = add_hourly(p, "discharge/" + key, "dis_" + tag, horizon, 0.0, kInf, 0.0);
    const IndexRange soc = add_hourly(p, "soc/" + key, "soc_" + tag, horizon, 0.0, kInf, 0.0);
    IndexRange spill{0, 0};
    if (!s.inflow.empty()) spill = add_hourly(p, "spill/" + key, "sp_" + tag, horizon, 0.0, kInf, 0.0);
    const int first_row = p.num_rows();
    for (int t = 0; t < horizon; ++t) {
      std::vector<Entry> e{{soc[t], 1.0}, {soc[previous(t, horizon)], -1.0},
                           {dis[t], 1.0 / s.discharge_efficiency}};
      if (s.can_charge) e.push_back({ch[t], -s.charge_efficiency});
      if (!s.inflow.empty()) e.push_back({spill[t], 1.0});
      const double inflow = s.inflow.empty() ? 0.0 : s.inflow[static_cast<std::size_t>(t)];
      p.add_row(hour_name("sbal_" + tag, t), RowSense::kEqual, inflow, std::move(e));
    }
    p.row_blocks().add("storage_balance/" + key, IndexRange{first_row, horizon});
    if (s.can_charge) add_capacity_rows(p, "chcap_" + tag, ch, power, nullptr);
    add_capacity_rows(p, "discap_" + tag, dis, power, nullptr);
    add_capacity_rows(p, "socap_" + tag, soc, energy, nullptr);
    for (int t = 0; t < horizon; ++t) {
      p.add_to_row(balance[t], dis[t], 1.0);
      if (s.can_charge) p.add_to_row(balance[t], ch[t], -1.0);
    }
  }

  if (node.hydrogen.enabled) {
    const auto& h = node.hydrogen;
    const std::string tag = n + "_h2";
    const int el_cap = add_capacity(p, "cap/" + n + "/electrolyzer", "P_" + n + "_electrolyzer", 0.0,
                                    kInf, share * h.electrolyzer_cost);
    const int cavern = add_capacity(p, "cap/" + n + "/h2_cavern", "E_" + n + "_h2_cavern", 0.0, kInf,
                                    share * h.cavern_cost);
    const int tu_cap = add_capacity(p, "cap/" + n + "/h2_turbine", "P_" + n + "_h2_turbine", 0.0,
                                    kInf, share * h.turbine_cost);
    const IndexRange el = add_hourly(p, "h2/" + n + "/electrolysis", "el_" + tag, horizon, 0.0, kInf, 0.0);
    const IndexRange level = add_hourly(p, "h2/" + n + "/level", "lv_" + tag, horizon, 0.0, kInf, 0.0);
    const IndexRange tu = add_hourly(p, "h2/" + n + "/reconversion", "tu_" + tag, horizon, 0.0, kInf, 0.0);
    const int first_row = p.num_rows();
    for (int t = 0; t < horizon; ++t) {
      p.add_row(hour_name("h2bal_" + n, t), RowSense::kEqual, 0.0,
                {{level[t], 1.0},
                 {level[previous(t, horizon)], -(1.0 - h.cavern_loss)},
                 {el[t], -h.electrolyzer_efficiency},
                 {tu[t], 1.0 / h.turbine_efficiency}});
    }
    p.row_blocks().add("h2_balance/" + n, IndexRange{first_row, horizon});
    add_capacity_rows(p, "elcap_" + tag, el, el_cap, nullptr);
    add_capacity_rows(p, "lvcap_" + tag, level, cavern, nullptr);
    add_capacity_rows(p, "tucap_" + tag, tu, tu_cap, nullptr);
    for (int t = 0; t < horizon; ++t) {
      p.add_to_row(balance[t], el[t], -1.0);
      p.add_to_row(balance[t], tu[t], 1.0);
    }
  }
  return m;
}

PsmModel link_nodes(std::vector<PsmModel> models, const std::vector<Ntc>& ntc) {
  if (models.empty()) throw InputError("link_nodes needs at least one model");
  PsmModel out;
  out.horizon = models.front().horizon;
  out.lp.set_name(models.size() == 1 ? models.front().lp.name() : "system");
  std::set<std::string> ids;
  for (auto& m : models) {
    if (m.horizon != out.horizon) throw InputError("node models have different horizons");
    if (m.bev_profiles != 0) throw InputError("link nodes before attaching BEV blocks");
    for (const auto& id : m.nodes) {
      if (!ids.insert(id).second) throw InputError("node '" + id + "' appears in two models");
      out.nodes.push_back(id);
    }
    if (models.size() == 1) {
      out.lp = std::move(m.lp);
    } else {
      out.lp.append(m.lp);
    }
  }
  for (const auto& link : ntc) {
    if (!ids.count(link.from) || !ids.count(link.to)) {
      throw InputError("NTC " + link.from + "->" + link.to + " references a node without a model");
    }
    if (!(link.capacity >= 0.0)) throw InputError("NTC must be non-negative");
    const IndexRange f = add_hourly(out.lp, "flow/" + link.from + "/" + link.to,
                                    "f_" + link.from + "_" + link.to, out.horizon, 0.0,
                                    link.capacity, 0.0);
    const IndexRange from = out.lp.row_blocks().at("balance/" + link.from);
    const IndexRange to = out.lp.row_blocks().at("balance/" + link.to);
    for (int t = 0; t < out.horizon; ++t) {
      out.lp.add_to_row(from[t], f[t], -1.0);
      out.lp.add_to_row(to[t], f[t], 1.0);
    }
  }
  return out;
}

double hydrogen_demand_rate(double annual_twh) { return annual_twh * 1e6 / kHoursPerYear; }

void attach_hydrogen_demand(PsmModel& model, const std::string& node, double annual_twh) {
  const IndexRange* rows = model.lp.row_blocks().find("h2_balance/" + node);
  if (!rows) throw ConfigError("node '" + node + "' has no hydrogen chain for the demand");
  if (!(annual_twh >= 0.0)) throw ConfigError("hydrogen demand must be non-negative");
  const double rate = hydrogen_demand_rate(annual_twh);
  for (int t = 0; t < rows->count; ++t) model.lp.set_rhs((*rows)[t], rate == 0.0 ? 0.0 : -rate);
}

PsmModel build_reference_model(const SystemConfig& system) {
  system.validate();
  std::vector<PsmModel> parts;
  for (const auto& node : system.nodes) {
    parts.push_back(build_node_model(node, system.horizon, system.carbon_price));
  }
  PsmModel m = link_nodes(std::move(parts), system.ntc);
  m.lp.set_name(system.name);
  for (const auto& node : system.nodes) {
    if (node.hydrogen.enabled && node.hydrogen.demand_twh > 0.0) {
      attach_hydrogen_demand(m, node.id, node.hydrogen.demand_twh);
    }
  }
  return m;
}

void attach_bev_block(PsmModel& model, const Sample& sample, const ProfilePool& pool,
                      double fleet_size, Strategy strategy, const BevParameters& params) {
  if (strategy == Strategy::kNone) return;
  if (model.bev_profiles != 0) throw InputError("model already has a BEV block");
  if (pool.horizon_steps != static_cast<long>(model.horizon) * kStepsPerHour) {
    throw InputError("profile horizon (" + std::to_string(pool.horizon_steps) +
                     " steps) does not match the model horizon (" + std::to_string(model.horizon) +
                     " hours)");
  }
  if (sample.profile_ids.empty()) throw InputError("BEV block needs at least one profile");
  if (!(fleet_size >= 0.0)) throw InputError("fleet size must be non-negative");
  const std::string node = params.node.empty() ? model.nodes.front() : params.node;
  const IndexRange* found = model.lp.row_blocks().find("balance/" + node);
  if (!found) throw ConfigError("BEV node '" + node + "' is not in the model");
  const IndexRange balance = *found;

  auto& p = model.lp;
  const int H = model.horizon;
  const double scale = fleet_size == 0.0 ? 0.0 : fleet_size / sample.n_profiles();
  const double to_mw = scale / 1000.0;  // kW (or kWh) per vehicle -> MW (MWh) for the fleet share
  const double eta_c = params.charge_efficiency;
  const double eta_d = params.discharge_efficiency;
  for (int k = 0; k < sample.n_profiles(); ++k) {
    const BevProfile& prof = pool.at(sample.profile_ids[static_cast<std::size_t>(k)]);
    const auto demand = resample_hourly(prof.consumption).values;
    const auto avail = resample_hourly(prof.availability).values;
    const double energy = prof.vehicle.battery_capacity * to_mw;
    const std::string tag = std::to_string(k);
    const int c_first = p.num_variables();
    for (int t = 0; t < H; ++t) {
      p.add_variable(hour_name("bc_" + tag, t), 0.0, avail[static_cast<std::size_t>(t)] * to_mw, 0.0);
    }
    const IndexRange c{c_first, H};
    p.variable_blocks().add("bev/charge/" + tag, c);
    const IndexRange s = add_hourly(p, "bev/soc/" + tag, "bs_" + tag, H, 0.0, energy, 0.0);
    IndexRange v{0, 0};
    if (strategy == Strategy::kBidirectional) {
      const int v_first = p.num_variables();
      for (int t = 0; t < H; ++t) {
        p.add_variable(hour_name("bv_" + tag, t), 0.0, avail[static_cast<std::size_t>(t)] * to_mw, 0.0);
      }
      v = IndexRange{v_first, H};
      p.variable_blocks().add("bev/discharge/" + tag, v);
    }
    const int first_row = p.num_rows();
    for (int t = 0; t < H; ++t) {
      std::vector<Entry> e{{s[t], 1.0}, {s[previous(t, H)], -1.0}, {c[t], -eta_c}};
      if (v.count) e.push_back({v[t], 1.0 / eta_d});
      const double d = demand[static_cast<std::size_t>(t)] * to_mw;
      p.add_row(hour_name("bsoc_" + tag, t), RowSense::kEqual, d == 0.0 ? 0.0 : -d, std::move(e));
      p.add_to_row(balance[t], c[t], -1.0);
      if (v.count) p.add_to_row(balance[t], v[t], 1.0);
    }
    p.row_blocks().add("bev_soc/" + tag, IndexRange{first_row, H});
  }
  model.bev_profiles = sample.n_profiles();
}

double ScenarioResult::capacity(std::string_view key) const {
  for (const auto& [k, v] : capacities) {
    if (k == key) return v;
  }
  throw InputError("no capacity named '" + std::string(key) + "'");
}

ScenarioResult extract_solution(const PsmModel& model, const lp::RawSolution& raw) {
  if (static_cast<int>(raw.x.size()) != model.lp.num_variables()) {
    throw InternalError("solution has " + std::to_string(raw.x.size()) + " values, model has " +
                        std::to_string(model.lp.num_variables()) + " variables");
  }
  ScenarioResult r;
  r.status = raw.status;
  r.objective = raw.objective;
  r.horizon = model.horizon;
  r.iterations = raw.iterations;
  r.solve_seconds = raw.solve_seconds;
  const auto H = static_cast<std::size_t>(model.horizon);
  r.bev_charge.assign(H, 0.0);
  r.bev_discharge.assign(H, 0.0);
  auto value = [&](int i) { return raw.x[static_cast<std::size_t>(i)]; };
  for (const auto& [key, range] : model.lp.variable_blocks().entries()) {
    if (key.rfind("cap/", 0) == 0) {
      const auto& v = model.lp.variable(range.first);
      const double cap = std::clamp(value(range.first), v.lower, v.upper);
      r.capacities.emplace_back(key.substr(4), cap == 0.0 ? 0.0 : cap);
    } else if (key.rfind("bev/charge/", 0) == 0) {
      for (int t = 0; t < range.count; ++t) r.bev_charge[static_cast<std::size_t>(t)] += value(range[t]);
    } else if (key.rfind("bev/discharge/", 0) == 0) {
      for (int t = 0; t < range.count; ++t) {
        r.bev_discharge[static_cast<std::size_t>(t)] += value(range[t]);
      }
    } else if (key.rfind("bev/", 0) != 0) {
      std::vector<double> series(static_cast<std::size_t>(range.count));
      for (int t = 0; t < range.count; ++t) series[static_cast<std::size_t>(t)] = value(range[t]);
      r.dispatch.emplace_back(key, std::move(series));
    }
  }
  r.objective = lp::objective_value(model.lp, raw.x);
  r.feasibility = lp::validate_solution(model.lp, raw.x);
  return r;
}

}  // namespace bevpsm
