// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Reference and scenario runs over (fleet size x profile count x sample x
// strategy), deltas to the reference, spike statistics and result tables.
//
// Results CSV columns: setting, strategy, fleet_size, n_profiles, sample_id,
// bevs_per_profile, objective_eur, cost_delta_eur_per_bev_yr, runtime_s,
// status, then cap:<tech> for every capacity and delta:<tech> for every
// capacity delta, both in registry order of the reference model.

#ifndef BEVPSM_HARNESS_HPP
#define BEVPSM_HARNESS_HPP

#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bevpsm/config.hpp"
#include "bevpsm/psm_model.hpp"
#include "bevpsm/sampling.hpp"

namespace bevpsm {

struct ExperimentSpec {
  std::string setting = "island";
  std::vector<double> fleet_sizes{15e6};
  std::vector<Strategy> strategies{Strategy::kSmart, Strategy::kBidirectional};
  std::vector<int> sample_sizes;
  int samples_per_size = 10;
  std::uint64_t master_seed = 0;
  double trim_threshold = std::numeric_limits<double>::infinity();  // inf keeps every sample
  double time_limit_s = 600.0;
  double spike_threshold_gw = 100.0;       // at spike_reference_fleet, scaled linearly
  double spike_reference_fleet = 15e6;
  int threads = 1;
  bool timing = true;  // sequential runs; threads are used only when false
};

/// Reads the "sampling" and "scenario" sections.
ExperimentSpec experiment_from_config(const Json& config);

struct ScenarioConfig {
  std::string setting;
  Strategy strategy = Strategy::kNone;
  double fleet_size = 0.0;
  int n_profiles = 0;
  int sample_id = 0;
  std::vector<int> profile_ids;
  std::string key() const;
};

/// Everything a run loads from scratch: the effective config (its "system"
/// section), the directory relative series paths resolve against, and the
/// pool directory.
struct RunInputs {
  Json config;
  std::filesystem::path base_dir;
  std::filesystem::path pool_dir;
  double time_limit_s = 600.0;
};

/// Model and raw solution of a run, for callers that store them.
struct RunArtifacts {
  PsmModel model;
  lp::RawSolution raw;
};

/// Loads the system and pool, builds, solves and extracts one scenario.
/// runtime_seconds covers loading through extraction (monotonic clock).
/// A non-optimal solve returns the status with feasibility.pass = false.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunInputs& inputs,
                            RunArtifacts* artifacts = nullptr);

/// (obj_s - obj_r) / fleet, annualized to EUR per BEV per year. Positive
/// means additional cost.
double compute_cost_delta(const ScenarioResult& scenario, const ScenarioResult& reference,
                          double fleet_size);

/// Per-technology scenario minus reference, in reference order.
std::vector<std::pair<std::string, double>> compute_capacity_delta(const ScenarioResult& scenario,
                                                                   const ScenarioResult& reference);

struct SpikeStats {
  double threshold_gw = 0.0;
  double peak_consumption_gw = 0.0;
  int consumption_hours_above = 0;
  double peak_charging_gw = 0.0;
  int charging_hours_above = 0;
};

/// Threshold for `fleet`, scaled linearly from the reference fleet.
double spike_threshold_gw(const ExperimentSpec& spec, double fleet_size);

/// Peak and count of hours above `threshold_gw` for the scaled aggregate
/// driving consumption and, when given, the solved aggregate charging (MW).
SpikeStats spike_statistics(const Sample& sample, const ProfilePool& pool, double fleet_size,
                            double threshold_gw, const std::vector<double>* charging_mw = nullptr);

struct ResultRow {
  std::string setting;
  std::string strategy;
  double fleet_size = 0.0;
  int n_profiles = 0;
  int sample_id = 0;
  double bevs_per_profile = 0.0;
  double objective_eur = 0.0;
  double cost_delta_eur_per_bev_yr = 0.0;
  double runtime_s = 0.0;
  std::string status;
  std::vector<double> capacities;
  std::vector<double> capacity_deltas;
  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::vector<std::string> technologies;
  std::vector<ResultRow> rows;
  bool operator==(const ResultTable&) const = default;
};

struct FailureRecord {
  ScenarioConfig scenario;
  std::string status;
  double runtime_s = 0.0;
  std::string message;
};

struct SpikeRecord {
  ScenarioConfig scenario;
  SpikeStats stats;
};

struct SweepOutput {
  ScenarioResult reference;
  ResultTable table;
  std::vector<FailureRecord> failures;
  std::vector<SpikeRecord> spikes;
  std::vector<Sample> samples;  // every drawn sample, before trimming
  std::vector<Sample> removed;  // samples dropped by the trim
};

/// Scenario list in run order: fleet, profile count, sample, strategy.
std::vector<ScenarioConfig> sweep_grid(const ExperimentSpec& spec, const std::vector<Sample>& samples);

/// Draws the sample sets for every configured size.
std::vector<Sample> draw_experiment_samples(const ExperimentSpec& spec, int pool_size);

using ProgressFn = std::function<void(const ScenarioConfig&, const ScenarioResult&)>;

/// Reference first, then every scenario. Failed runs go to `failures` and
/// are left out of the table. Rows are ordered as sweep_grid regardless of
/// how many threads ran them.
SweepOutput sweep(const ExperimentSpec& spec, const RunInputs& inputs, const ProgressFn& progress = {});

/// Table row for a solved scenario (reference rows pass fleet 0).
ResultRow make_row(const ScenarioConfig& cfg, const ScenarioResult& result, const ScenarioResult& reference);

void write_results_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_results_csv(const std::filesystem::path& path);
void write_failures_csv(const std::vector<FailureRecord>& failures, const std::filesystem::path& path);
void write_spikes_csv(const std::vector<SpikeRecord>& spikes, const std::filesystem::path& path);

struct EmitReport {
  std::vector<std::string> files;     // relative to the output directory
  std::vector<std::string> warnings;  // e.g. plots omitted for empty strategies
};

/// results.csv, summary.csv and one SVG per figure type and strategy:
/// cost_delta_<s>.svg, capacity_delta_<s>.svg, runtime_<s>.svg and
/// cost_delta_vs_bevs_per_profile_<s>.svg.
EmitReport emit_outputs(const ResultTable& table, const std::filesystem::path& dir);

}  // namespace bevpsm

#endif  // BEVPSM_HARNESS_HPP
