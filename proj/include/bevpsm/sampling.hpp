// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Samples of profiles from a pool, fleet scaling, aggregate characteristics
// and the deviation trim.

#ifndef BEVPSM_SAMPLING_HPP
#define BEVPSM_SAMPLING_HPP

#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "bevpsm/profiles.hpp"
#include "bevpsm/rng.hpp"

namespace bevpsm {

struct Sample {
  int sample_id = 0;
  std::vector<int> profile_ids;  // distinct, in draw order
  double fleet_size = 0.0;
  double scale = 0.0;  // vehicles per profile
  int n_profiles() const { return static_cast<int>(profile_ids.size()); }
};

/// Vehicles per profile. Both arguments must be positive.
double scale_factor(double fleet_size, int n_profiles);

/// Uniform draw of `n_profiles` distinct ids from 0..pool_size-1 (partial
/// Fisher-Yates). Advances `rng`. The sample has fleet 0 and scale 0 until
/// assign_fleet is called.
Sample draw_sample(int pool_size, int n_profiles, Rng& rng);

/// `n_samples` independent samples; sample k is drawn from substream
/// (n_profiles, k) of `master_seed`, so a set does not depend on which other
/// sets are drawn, in which order, or on the charging strategy.
std::vector<Sample> draw_sample_set(int pool_size, int n_profiles, int n_samples,
                                    std::uint64_t master_seed);

/// Sets fleet_size and scale; fleet 0 gives scale 0 (a zero-fleet block).
void assign_fleet(Sample& sample, double fleet_size);

struct AggregateStats {
  double total_battery_gwh = 0.0;
  double annual_consumption_twh = 0.0;  // horizon consumption scaled to 8,760 hours
  double peak_scaled_consumption_gw = 0.0;
  double mean_battery_kwh = 0.0;                 // per vehicle
  double mean_annual_consumption_kwh = 0.0;      // per vehicle
};

AggregateStats aggregate_characteristics(const Sample& sample, const ProfilePool& pool);

/// Hourly aggregate Σ_p consumption (kWh) of the sample's profiles, unscaled.
std::vector<double> hourly_consumption_sum(const Sample& sample, const ProfilePool& pool);

struct TrimResult {
  std::vector<Sample> kept;
  std::vector<std::size_t> removed;  // indices into the input
  double mean_battery_kwh = 0.0;
  double mean_annual_consumption_kwh = 0.0;
};

/// Keeps samples whose per-vehicle battery capacity and per-vehicle annual
/// consumption both lie within `threshold` (relative) of the cross-sample
/// means. An empty result is allowed.
TrimResult trim_samples(const std::vector<Sample>& samples, const ProfilePool& pool,
                        double threshold = 0.05);

/// CSV with columns n_profiles,sample_id,profile_id; one row per member.
void write_sample_csv(const std::vector<Sample>& samples, const std::filesystem::path& path);
/// Groups rows by (n_profiles, sample_id) in file order. Fleet fields are 0.
std::vector<Sample> read_sample_csv(const std::filesystem::path& path);

}  // namespace bevpsm

#endif  // BEVPSM_SAMPLING_HPP
