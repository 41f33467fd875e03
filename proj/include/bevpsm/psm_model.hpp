// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Investment-and-dispatch LP over a horizon of H hours with cyclic storage,
// an optional hydrogen chain, transfer limits between nodes, and scaled BEV
// blocks under smart or bidirectional charging.
//
// Annualized capacity costs are charged for H/8760 of a year, so the
// objective is the cost of the modelled horizon.

#ifndef BEVPSM_PSM_MODEL_HPP
#define BEVPSM_PSM_MODEL_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bevpsm/lp_io.hpp"
#include "bevpsm/lp_problem.hpp"
#include "bevpsm/profiles.hpp"
#include "bevpsm/sampling.hpp"
#include "bevpsm/simplex.hpp"
#include "bevpsm/system.hpp"

namespace bevpsm {

enum class Strategy { kNone, kSmart, kBidirectional };
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

inline constexpr double kHoursPerYear = 8760.0;

struct PsmModel {
  lp::LpProblem lp;
  int horizon = 0;
  std::vector<std::string> nodes;
  int bev_profiles = 0;
};

/// One node without interconnection. Block keys: "cap/<node>/<tech>",
/// "gen/<node>/<tech>", "charge|discharge|soc|spill/<node>/<storage>",
/// "h2/<node>/electrolysis|level|reconversion", rows "balance/<node>" and
/// "h2_balance/<node>".
PsmModel build_node_model(const Node& node, int horizon, double carbon_price);

/// Joins per-node models and adds directed flows f in [0, NTC] to the
/// balances ("flow/<from>/<to>").
PsmModel link_nodes(std::vector<PsmModel> models, const std::vector<Ntc>& ntc);

/// All nodes, links and configured hydrogen demands.
PsmModel build_reference_model(const SystemConfig& system);

/// Hourly withdrawal (MWh_H2/h) for an annual demand spread evenly over 8,760 hours.
double hydrogen_demand_rate(double annual_twh);

/// Sets the exogenous cavern withdrawal of `node`; ConfigError when the node
/// has no hydrogen chain.
void attach_hydrogen_demand(PsmModel& model, const std::string& node, double annual_twh);

/// Adds per-profile charge c, SOC s and (bidirectional) discharge v, scaled
/// by fleet_size / n_profiles. Consumption enters the SOC rows; c and v
/// enter the balance of `params.node` (first node when empty).
void attach_bev_block(PsmModel& model, const Sample& sample, const ProfilePool& pool,
                      double fleet_size, Strategy strategy, const BevParameters& params);

struct ScenarioResult {
  lp::SolveStatus status = lp::SolveStatus::kNumericalError;
  double objective = 0.0;  // cost of the modelled horizon, EUR
  int horizon = 0;
  std::vector<std::pair<std::string, double>> capacities;  // registry order
  std::vector<std::pair<std::string, std::vector<double>>> dispatch;
  std::vector<double> bev_charge;     // Σ_p c_{p,t}, MW
  std::vector<double> bev_discharge;  // Σ_p v_{p,t}, MW
  long iterations = 0;
  double solve_seconds = 0.0;
  double runtime_seconds = 0.0;
  lp::FeasibilityReport feasibility;
  double capacity(std::string_view key) const;
};

/// Reads capacities, dispatch and BEV aggregates through the registry.
ScenarioResult extract_solution(const PsmModel& model, const lp::RawSolution& raw);

}  // namespace bevpsm

#endif  // BEVPSM_PSM_MODEL_HPP
