// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Power-system description consumed by the model builder: nodes with load,
// generation, storage and an optional hydrogen chain, plus transfer limits.
// Every number comes from the config file.

#ifndef BEVPSM_SYSTEM_HPP
#define BEVPSM_SYSTEM_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "bevpsm/config.hpp"
#include "bevpsm/lp_problem.hpp"

namespace bevpsm {

struct GenerationTech {
  std::string name;
  double investment_cost = 0.0;  // €/MW/yr, annualized
  double fixed_om = 0.0;         // €/MW/yr
  double variable_cost = 0.0;    // €/MWh including fuel
  double co2_intensity = 0.0;    // tCO2/MWh_el
  double min_capacity = 0.0;     // MW
  double max_capacity = lp::kInf;
  std::vector<double> availability;  // one value (scalar) or one per hour, in [0, 1]
  double availability_at(int hour) const;
};

struct StorageTech {
  std::string name;
  double power_cost = 0.0;   // €/MW/yr
  double energy_cost = 0.0;  // €/MWh/yr
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  double min_power = 0.0;
  double max_power = lp::kInf;
  double min_energy = 0.0;
  double max_energy = lp::kInf;
  bool can_charge = true;          // false for reservoirs fed only by inflow
  std::vector<double> inflow;      // MWh/h, empty when none
};

struct HydrogenChain {
  bool enabled = false;
  double electrolyzer_cost = 0.0;        // €/MW_el/yr
  double electrolyzer_efficiency = 0.7;  // MWh_H2 per MWh_el
  double cavern_cost = 0.0;              // €/MWh_H2/yr
  double cavern_loss = 0.0;              // fraction of the stored level lost per hour
  double turbine_cost = 0.0;             // €/MW_el/yr
  double turbine_efficiency = 0.5;       // MWh_el per MWh_H2
  double demand_twh = 0.0;               // exogenous industrial demand, TWh_H2 per year
};

struct Node {
  std::string id;
  std::vector<double> load;  // MWh per hour
  std::vector<GenerationTech> generators;
  std::vector<StorageTech> storage;
  HydrogenChain hydrogen;
};

struct Ntc {
  std::string from;
  std::string to;
  double capacity = 0.0;  // MW, directed
};

struct BevParameters {
  double charge_efficiency = 0.95;
  double discharge_efficiency = 0.95;
  std::string node;  // node the fleet connects to; first node when empty
};

struct SystemConfig {
  std::string name = "system";
  int horizon = 8760;
  double carbon_price = 0.0;  // €/tCO2
  std::vector<Node> nodes;
  std::vector<Ntc> ntc;
  BevParameters bev;
  /// Throws ConfigError (invalid values) or InputError (series length).
  void validate() const;
  const Node& node(const std::string& id) const;
};

/// Reads the "system" section. Series may be a number, an inline array,
/// {"csv": path, "offset": k, "scale": s} (path relative to `base_dir`) or
/// {"synthetic": "solar" | "wind" | "load", ...}. Each resolves to exactly
/// `horizon_hours` values.
SystemConfig system_from_config(const Json& config, const std::filesystem::path& base_dir);

/// Resolves one series description.
std::vector<double> resolve_series(const Json& spec, int horizon, const std::filesystem::path& base_dir,
                                   std::string_view where);

/// Built-in synthetic series (deterministic for a fixed seed).
std::vector<double> synthetic_solar(int hours, std::uint64_t seed, double peak, double seasonality,
                                    int start_day);
std::vector<double> synthetic_wind(int hours, std::uint64_t seed, double mean, double persistence,
                                   double volatility);
std::vector<double> synthetic_load(int hours, std::uint64_t seed, double mean_mw,
                                   double daily_amplitude, double weekly_amplitude, double noise);

}  // namespace bevpsm

#endif  // BEVPSM_SYSTEM_HPP
