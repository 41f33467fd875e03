// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_TESTS_TEST_SUPPORT_HPP
#define BEVPSM_TESTS_TEST_SUPPORT_HPP

#include <filesystem>
#include <string>

#include "bevpsm/config.hpp"
#include "bevpsm/profiles.hpp"

namespace bevpsm::testing {

inline std::filesystem::path source_dir() { return BEVPSM_SOURCE_DIR; }

inline std::filesystem::path config_path(const std::string& name) {
  return source_dir() / "configs" / name;
}

inline const PoolSettings& default_pool_settings() {
  static const PoolSettings settings = pool_settings_from_config(load_config(config_path("pool.json")));
  return settings;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bevpsm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// One-day island with sun, gas and Li-ion; a 12-profile one-day pool.
inline Json toy_config(double gas_cap = -1.0) {
  Json gas{{"name", "gas"}, {"investment_eur_per_mw_yr", 70000}, {"variable_eur_per_mwh", 55},
           {"co2_t_per_mwh", 0.35}};
  if (gas_cap >= 0.0) gas["max_mw"] = gas_cap;
  Json cfg = load_config(config_path("pool.json"));
  cfg["pool"] = {{"size", 12}, {"base_seed", 5}, {"horizon_steps", 96}};
  cfg["sampling"] = {{"master_seed", 3}, {"sizes", {2, 4}}, {"samples_per_size", 3}};
  cfg["scenario"] = {{"setting", "toy"}, {"fleet_sizes", {5000}}, {"strategies", {"smart", "bidirectional"}}};
  cfg["system"] = {
      {"name", "toy"},
      {"horizon_hours", 24},
      {"carbon_price_eur_per_t", 130},
      {"nodes",
       {{{"id", "DE"},
         {"load", {{"synthetic", "load"}, {"seed", 1}, {"mean_mw", 50}}},
         {"generators",
          {{{"name", "solar"},
            {"investment_eur_per_mw_yr", 60000},
            {"availability", {{"synthetic", "solar"}, {"seed", 2}, {"peak", 0.9}}}},
           gas}},
         {"storage",
          {{{"name", "li-ion"},
            {"power_cost_eur_per_mw_yr", 25000},
            {"energy_cost_eur_per_mwh_yr", 14000},
            {"charge_efficiency", 0.95},
            {"discharge_efficiency", 0.95}}}}}}}};
  return cfg;
}

}  // namespace bevpsm::testing

#endif  // BEVPSM_TESTS_TEST_SUPPORT_HPP
