// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bevpsm/errors.hpp"
#include "bevpsm/rng.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm {

namespace {

void check_name(const std::string& name, const std::string& what) {
  if (name.empty()) throw ConfigError(what + " has an empty name");
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    if (!ok) throw ConfigError(what + " '" + name + "': names may use letters, digits, _ - . only");
  }
}

void check_nonnegative(double v, const std::string& what) {
  if (!(v >= 0.0) || std::isnan(v)) throw ConfigError(what + " must be non-negative");
}

void check_efficiency(double v, const std::string& what) {
  if (!(v > 0.0 && v <= 1.0)) throw ConfigError(what + " must be in (0, 1]");
}

void check_bounds(double lo, double hi, const std::string& what) {
  check_nonnegative(lo, what + " lower bound");
  if (!(lo <= hi)) throw ConfigError(what + ": lower bound exceeds upper bound");
}

void check_length(const std::vector<double>& s, int horizon, const std::string& what) {
  if (static_cast<int>(s.size()) != horizon) {
    throw InputError(what + " has " + std::to_string(s.size()) + " values, horizon is " +
                     std::to_string(horizon));
  }
}

double bound_or(const Json& j, std::string_view key, std::string_view where, double fallback) {
  if (!j.contains(std::string(key))) return fallback;
  return number_or_inf(j.at(std::string(key)), join_path(where, key));
}

}  // namespace

double GenerationTech::availability_at(int hour) const {
  return availability.size() == 1 ? availability[0] : availability[static_cast<std::size_t>(hour)];
}

void SystemConfig::validate() const {
  if (horizon < 2) throw ConfigError("horizon must be at least 2 hours");
  check_nonnegative(carbon_price, "carbon price");
  if (nodes.empty()) throw ConfigError("system has no nodes");
  std::set<std::string> ids;
  for (const auto& n : nodes) {
    check_name(n.id, "node");
    if (!ids.insert(n.id).second) throw ConfigError("duplicate node '" + n.id + "'");
    check_length(n.load, horizon, "load of node " + n.id);
    for (double v : n.load) check_nonnegative(v, "load of node " + n.id);
    std::set<std::string> techs;
    for (const auto& g : n.generators) {
      const std::string who = "generator " + n.id + "/" + g.name;
      check_name(g.name, "generator");
      if (!techs.insert(g.name).second) throw ConfigError("duplicate technology " + who);
      check_nonnegative(g.investment_cost, who + " investment cost");
      check_nonnegative(g.fixed_om, who + " fixed O&M");
      check_nonnegative(g.variable_cost, who + " variable cost");
      check_nonnegative(g.co2_intensity, who + " CO2 intensity");
      check_bounds(g.min_capacity, g.max_capacity, who + " capacity");
      if (g.availability.size() != 1) check_length(g.availability, horizon, who + " availability");
      for (double a : g.availability) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(who + " availability must lie in [0, 1]");
      }
    }
    for (const auto& s : n.storage) {
      const std::string who = "storage " + n.id + "/" + s.name;
      check_name(s.name, "storage");
      if (!techs.insert(s.name).second) throw ConfigError("duplicate technology " + who);
      check_nonnegative(s.power_cost, who + " power cost");
      check_nonnegative(s.energy_cost, who + " energy cost");
      check_efficiency(s.charge_efficiency, who + " charge efficiency");
      check_efficiency(s.discharge_efficiency, who + " discharge efficiency");
      check_bounds(s.min_power, s.max_power, who + " power");
      check_bounds(s.min_energy, s.max_energy, who + " energy");
      if (!s.inflow.empty()) {
        check_length(s.inflow, horizon, who + " inflow");
        for (double v : s.inflow) check_nonnegative(v, who + " inflow");
      }
    }
    if (n.hydrogen.enabled) {
      const auto& h = n.hydrogen;
      const std::string who = "hydrogen chain of node " + n.id;
      check_nonnegative(h.electrolyzer_cost, who + " electrolyzer cost");
      check_nonnegative(h.cavern_cost, who + " cavern cost");
      check_nonnegative(h.turbine_cost, who + " turbine cost");
      check_efficiency(h.electrolyzer_efficiency, who + " electrolyzer efficiency");
      check_efficiency(h.turbine_efficiency, who + " turbine efficiency");
      if (!(h.cavern_loss >= 0.0 && h.cavern_loss < 1.0)) {
        throw ConfigError(who + " cavern loss must be in [0, 1)");
      }
      check_nonnegative(h.demand_twh, who + " demand");
    }
  }
  for (const auto& link : ntc) {
    if (!ids.count(link.from) || !ids.count(link.to)) {
      throw InputError("NTC " + link.from + "->" + link.to + " references an unknown node");
    }
    if (link.from == link.to) throw ConfigError("NTC from a node to itself");
    check_nonnegative(link.capacity, "NTC " + link.from + "->" + link.to);
  }
  check_efficiency(bev.charge_efficiency, "BEV charge efficiency");
  check_efficiency(bev.discharge_efficiency, "BEV discharge efficiency");
  if (!bev.node.empty() && !ids.count(bev.node)) {
    throw ConfigError("BEV node '" + bev.node + "' is not a node of the system");
  }
}

const Node& SystemConfig::node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return n;
  }
  throw InputError("unknown node '" + id + "'");
}

std::vector<double> synthetic_solar(int hours, std::uint64_t seed, double peak, double seasonality,
                                    int start_day) {
  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(hours));
  double cloud = 1.0;
  for (int h = 0; h < hours; ++h) {
    const int hour_of_day = h % 24;
    if (hour_of_day == 0) cloud = rng.uniform(0.35, 1.0);
    const int day = start_day + h / 24;
    const double sun = std::max(0.0, std::sin(std::numbers::pi * (hour_of_day + 0.5 - 6.0) / 12.0));
    const double season = 1.0 + seasonality * std::cos(2.0 * std::numbers::pi * (day - 172) / 365.0);
    out[static_cast<std::size_t>(h)] = std::clamp(peak * sun * season * cloud, 0.0, 1.0);
  }
  return out;
}

std::vector<double> synthetic_wind(int hours, std::uint64_t seed, double mean, double persistence,
                                   double volatility) {
  Rng rng(seed);
  const double centre = std::log(mean / (1.0 - mean));
  const double innovation = volatility * std::sqrt(1.0 - persistence * persistence);
  double x = volatility * rng.normal();
  std::vector<double> out(static_cast<std::size_t>(hours));
  for (int h = 0; h < hours; ++h) {
    x = persistence * x + innovation * rng.normal();
    out[static_cast<std::size_t>(h)] = 1.0 / (1.0 + std::exp(-(centre + x)));
  }
  return out;
}

std::vector<double> synthetic_load(int hours, std::uint64_t seed, double mean_mw,
                                   double daily_amplitude, double weekly_amplitude, double noise) {
  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(hours));
  for (int h = 0; h < hours; ++h) {
    const int hour_of_day = h % 24;
    const int weekday = (h / 24) % 7;
    const double daily = -std::cos(2.0 * std::numbers::pi * (hour_of_day - 2) / 24.0);
    const double weekly = weekday >= 5 ? -1.0 : 0.4;
    const double factor = 1.0 + daily_amplitude * daily + weekly_amplitude * weekly + noise * rng.normal();
    out[static_cast<std::size_t>(h)] = std::max(0.0, mean_mw * factor);
  }
  return out;
}

std::vector<double> resolve_series(const Json& spec, int horizon, const std::filesystem::path& base_dir,
                                   std::string_view where) {
  const std::string path(where);
  const auto n = static_cast<std::size_t>(horizon);
  if (spec.is_number()) return std::vector<double>(n, spec.get<double>());
  if (spec.is_array()) {
    std::vector<double> v;
    for (const auto& item : spec) v.push_back(number_or_inf(item, path));
    check_length(v, horizon, path);
    return v;
  }
  if (!spec.is_object()) throw ConfigError("'" + path + "' must be a number, array or object");
  if (spec.contains("csv")) {
    auto file = std::filesystem::path(get_string(spec, "csv", path));
    if (file.is_relative()) file = base_dir / file;
    const auto all = read_series_csv(file);
    const auto offset = get_integer(spec, "offset", path, 0);
    const double scale = get_number(spec, "scale", path, 1.0);
    if (offset < 0 || static_cast<std::size_t>(offset) + n > all.size()) {
      throw InputError(file.string() + " has " + std::to_string(all.size()) +
                       " rows, too few for offset " + std::to_string(offset) + " and horizon " +
                       std::to_string(horizon));
    }
    std::vector<double> v(all.begin() + offset, all.begin() + offset + static_cast<long>(n));
    for (double& x : v) x *= scale;
    return v;
  }
  const std::string kind = get_string(spec, "synthetic", path);
  const auto seed = static_cast<std::uint64_t>(get_integer(spec, "seed", path, 0));
  if (kind == "solar") {
    return synthetic_solar(horizon, seed, get_number(spec, "peak", path, 0.8),
                           get_number(spec, "seasonality", path, 0.3),
                           static_cast<int>(get_integer(spec, "start_day", path, 0)));
  }
  if (kind == "wind") {
    const double mean = get_number(spec, "mean", path);
    if (!(mean > 0.0 && mean < 1.0)) throw ConfigError("'" + path + ".mean' must be in (0, 1)");
    const double persistence = get_number(spec, "persistence", path, 0.95);
    if (!(persistence >= 0.0 && persistence < 1.0)) {
      throw ConfigError("'" + path + ".persistence' must be in [0, 1)");
    }
    return synthetic_wind(horizon, seed, mean, persistence, get_number(spec, "volatility", path, 1.0));
  }
  if (kind == "load") {
    return synthetic_load(horizon, seed, get_number(spec, "mean_mw", path),
                          get_number(spec, "daily_amplitude", path, 0.15),
                          get_number(spec, "weekly_amplitude", path, 0.08),
                          get_number(spec, "noise", path, 0.02));
  }
  throw ConfigError("'" + path + ".synthetic': unknown generator '" + kind + "'");
}

SystemConfig system_from_config(const Json& config, const std::filesystem::path& base_dir) {
  const Json& sys = require(config, "system", "");
  SystemConfig out;
  out.name = get_string(sys, "name", "system", "system");
  out.horizon = static_cast<int>(get_integer(sys, "horizon_hours", "system", 8760));
  if (out.horizon < 2) throw ConfigError("'system.horizon_hours' must be at least 2");
  out.carbon_price = get_number(sys, "carbon_price_eur_per_t", "system", 0.0);
  const Json& nodes = require(sys, "nodes", "system");
  if (!nodes.is_array()) throw ConfigError("'system.nodes' must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Json& j = nodes[i];
    const std::string where = "system.nodes[" + std::to_string(i) + "]";
    Node node;
    node.id = get_string(j, "id", where);
    node.load = resolve_series(require(j, "load", where), out.horizon, base_dir, where + ".load");
    if (j.contains("generators")) {
      const Json& gens = j.at("generators");
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const std::string gw = where + ".generators[" + std::to_string(k) + "]";
        GenerationTech g;
        g.name = get_string(gens[k], "name", gw);
        g.investment_cost = get_number(gens[k], "investment_eur_per_mw_yr", gw, 0.0);
        g.fixed_om = get_number(gens[k], "fom_eur_per_mw_yr", gw, 0.0);
        g.variable_cost = get_number(gens[k], "variable_eur_per_mwh", gw, 0.0);
        g.co2_intensity = get_number(gens[k], "co2_t_per_mwh", gw, 0.0);
        g.min_capacity = bound_or(gens[k], "min_mw", gw, 0.0);
        g.max_capacity = bound_or(gens[k], "max_mw", gw, lp::kInf);
        const Json& avail = gens[k].contains("availability") ? gens[k].at("availability") : Json(1.0);
        if (avail.is_number()) {
          g.availability = {avail.get<double>()};
        } else {
          g.availability = resolve_series(avail, out.horizon, base_dir, gw + ".availability");
        }
        node.generators.push_back(std::move(g));
      }
    }
    if (j.contains("storage")) {
      const Json& list = j.at("storage");
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string sw = where + ".storage[" + std::to_string(k) + "]";
        const Json& sj = list[k];
        StorageTech s;
        s.name = get_string(sj, "name", sw);
        s.power_cost = get_number(sj, "power_cost_eur_per_mw_yr", sw, 0.0);
        s.energy_cost = get_number(sj, "energy_cost_eur_per_mwh_yr", sw, 0.0);
        s.charge_efficiency = get_number(sj, "charge_efficiency", sw, 1.0);
        s.discharge_efficiency = get_number(sj, "discharge_efficiency", sw, 1.0);
        s.min_power = bound_or(sj, "min_power_mw", sw, 0.0);
        s.max_power = bound_or(sj, "max_power_mw", sw, lp::kInf);
        s.min_energy = bound_or(sj, "min_energy_mwh", sw, 0.0);
        s.max_energy = bound_or(sj, "max_energy_mwh", sw, lp::kInf);
        s.can_charge = get_bool(sj, "can_charge", sw, true);
        if (sj.contains("inflow")) {
          s.inflow = resolve_series(sj.at("inflow"), out.horizon, base_dir, sw + ".inflow");
        }
        node.storage.push_back(std::move(s));
      }
    }
    if (j.contains("hydrogen")) {
      const Json& hj = j.at("hydrogen");
      const std::string hw = where + ".hydrogen";
      auto& h = node.hydrogen;
      h.enabled = get_bool(hj, "enabled", hw, true);
      h.electrolyzer_cost = get_number(hj, "electrolyzer_cost_eur_per_mw_yr", hw);
      h.electrolyzer_efficiency = get_number(hj, "electrolyzer_efficiency", hw);
      h.cavern_cost = get_number(hj, "cavern_cost_eur_per_mwh_yr", hw);
      h.cavern_loss = get_number(hj, "cavern_loss_per_hour", hw, 0.0);
      h.turbine_cost = get_number(hj, "turbine_cost_eur_per_mw_yr", hw);
      h.turbine_efficiency = get_number(hj, "turbine_efficiency", hw);
      h.demand_twh = get_number(hj, "demand_twh_per_yr", hw, 0.0);
    }
    out.nodes.push_back(std::move(node));
  }
  if (sys.contains("ntc")) {
    for (const auto& link : sys.at("ntc")) {
      out.ntc.push_back(Ntc{get_string(link, "from", "system.ntc"), get_string(link, "to", "system.ntc"),
                            get_number(link, "mw", "system.ntc")});
    }
  }
  if (sys.contains("bev")) {
    const Json& b = sys.at("bev");
    out.bev.charge_efficiency = get_number(b, "charge_efficiency", "system.bev", 0.95);
    out.bev.discharge_efficiency = get_number(b, "discharge_efficiency", "system.bev", 0.95);
    out.bev.node = get_string(b, "node", "system.bev", "");
  }
  out.validate();
  return out;
}

}  // namespace bevpsm
