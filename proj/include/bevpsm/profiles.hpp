// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic battery-electric-vehicle profiles: trip sequences at 15-minute
// resolution, the driving consumption they imply, grid availability from a
// charger distribution, and hourly resampling for the dispatch model.

#ifndef BEVPSM_PROFILES_HPP
#define BEVPSM_PROFILES_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bevpsm/config.hpp"

namespace bevpsm {

inline constexpr int kStepsPerHour = 4;
inline constexpr int kStepsPerDay = 96;
inline constexpr double kStepHours = 0.25;

enum class Destination : int { kHome, kWorkplace, kShopping, kErrands, kEscort, kLeisure };
inline constexpr int kNumDestinations = 6;
inline constexpr std::array<std::string_view, kNumDestinations> kDestinationNames = {
    "home", "workplace", "shopping", "errands", "escort", "leisure"};
std::string_view destination_name(Destination d);
Destination parse_destination(std::string_view name);

enum class DayType : int { kWeekday, kSaturday, kSunday };
inline constexpr int kNumDayTypes = 3;
inline constexpr std::array<std::string_view, kNumDayTypes> kDayTypeNames = {"weekday", "saturday",
                                                                            "sunday"};

struct VehicleModel {
  std::string name;
  double battery_capacity = 0.0;   // kWh
  double drive_consumption = 0.0;  // kWh/km
  double max_home_charge = 0.0;    // kW
  double max_fast_charge = 0.0;    // kW
  void validate() const;
};

struct VehicleCatalog {
  std::vector<VehicleModel> models;
  std::vector<double> weights;  // mix weights, sum to 1
  void validate() const;
  double mean_battery_capacity() const;
};

struct LogNormal {
  double median = 1.0;
  double sigma = 0.0;
};

struct DestinationRules {
  std::array<double, 24> departure_hour{};  // probability of departing toward it, per hour
  LogNormal distance_km;
  LogNormal dwell_hours;
};

struct LongTourRules {
  std::array<double, kNumDayTypes> probability{};
  Destination destination = Destination::kLeisure;
  std::array<double, 24> departure_hour{};
  LogNormal distance_km;
  LogNormal dwell_hours;
};

struct MobilityRules {
  // P(number of stops = k) per day type; a tour with k stops has k + 1 trips.
  std::array<std::vector<double>, kNumDayTypes> stops_per_day;
  // Weights over the five away-from-home destinations, per day type.
  std::array<std::array<double, kNumDestinations - 1>, kNumDayTypes> destination_weights{};
  std::array<DestinationRules, kNumDestinations> destinations;
  LongTourRules long_tour;
  double max_speed_kmh = 160.0;
  double min_speed_kmh = 25.0;
  double cruise_speed_kmh = 130.0;
  double speed_ramp_km = 60.0;  // distance scale over which speed rises toward cruise
  int start_weekday = 0;        // 0 = Monday
  /// Throws ConfigError naming the first invalid table.
  void validate() const;
  double trip_speed(double distance_km) const;
  DayType day_type(long day_index) const;
};

struct ChargerDistribution {
  std::array<double, kNumDestinations> probability{};
  std::array<double, kNumDestinations> power_kw{};
  void validate() const;
};

struct EnRouteRules {
  double reserve_fraction = 0.1;
  double efficiency = 0.95;  // charger-to-battery, also used for the feasibility replay
};

struct Trip {
  long depart = 0;  // first driving step
  long arrive = 0;  // first parked step after the trip; driving occupies [depart, arrive)
  Destination origin = Destination::kHome;
  Destination destination = Destination::kHome;
  double distance_km = 0.0;
  long steps() const { return arrive - depart; }
  double km_per_step() const { return distance_km / static_cast<double>(steps()); }
};

/// Trip list over a horizon of 15-minute steps. Steps not covered by a trip
/// are parked at the previous trip's destination (home before the first).
struct MobilityProfile {
  long horizon = 0;
  std::vector<Trip> trips;

  std::vector<double> km_per_step() const;
  double total_km() const;
  /// Location of a parked step, or -1 when driving.
  int location_at(long step) const;
  /// Throws InternalError when an invariant is broken (continuity, overlap,
  /// speed, home at both ends).
  void check(double max_speed_kmh) const;
};

enum class SeriesKind { kConsumption, kAvailability };

struct Series {
  SeriesKind kind = SeriesKind::kConsumption;
  int minutes = 15;  // 15 or 60
  std::vector<double> values;
  double sum() const;
};

struct ParkingEvent {
  long begin = 0;  // first parked step
  long end = 0;    // one past the last parked step
  Destination location = Destination::kHome;
  double power_kw = 0.0;
};

struct AvailabilityResult {
  Series series;
  std::vector<ParkingEvent> parking;
  std::vector<long> en_route_steps;  // driving steps with a fast-charge window
};

MobilityProfile generate_mobility(std::uint64_t seed, const MobilityRules& rules, long horizon);

Series derive_driving_consumption(const MobilityProfile& profile, const VehicleModel& vehicle);

AvailabilityResult derive_grid_availability(const MobilityProfile& profile,
                                            const ChargerDistribution& chargers,
                                            const VehicleModel& vehicle, std::uint64_t seed,
                                            const EnRouteRules& en_route = {});

/// Lowest state of charge (kWh) reached when charging at full availability
/// whenever possible, starting from `initial_kwh` and clamping at capacity.
double replay_min_soc(const std::vector<double>& consumption_kwh,
                      const std::vector<double>& availability_kw, double battery_kwh,
                      double efficiency, double initial_kwh, double* final_kwh = nullptr);

/// 15-minute to hourly: consumption sums, availability averages.
Series resample_hourly(const Series& series);

struct BevProfile {
  int id = 0;
  std::uint64_t seed = 0;
  VehicleModel vehicle;
  MobilityProfile mobility;
  Series consumption;   // kWh per 15-minute step
  Series availability;  // kW per 15-minute step
  std::vector<long> en_route_steps;
};

struct PoolSettings {
  int size = 200;
  std::uint64_t base_seed = 1;
  long horizon_steps = 35040;
  MobilityRules rules;
  VehicleCatalog catalog;
  ChargerDistribution chargers;
  EnRouteRules en_route;
  int threads = 1;  // generation is pure per profile; the result does not depend on this
  std::string config_hash;  // over the sections that determine the profiles
};

struct ProfilePool {
  long horizon_steps = 0;
  std::uint64_t base_seed = 0;
  std::string config_hash;
  std::vector<BevProfile> profiles;
  std::size_t size() const { return profiles.size(); }
  const BevProfile& at(int id) const;
};

BevProfile generate_profile(int id, const PoolSettings& settings);
ProfilePool build_pool(const PoolSettings& settings);

/// Reads the "mobility", "chargers", "en_route", "vehicles" and "pool"
/// sections of a pool config.
PoolSettings pool_settings_from_config(const Json& config);
MobilityRules mobility_rules_from_json(const Json& mobility, std::string_view where);
VehicleCatalog catalog_from_json(const Json& vehicles, std::string_view where);
ChargerDistribution chargers_from_json(const Json& chargers, std::string_view where);

/// Pool directory: manifest.json plus profile_NNNN/{meta.json,mobility.csv,
/// consumption.csv,availability.csv}.
void save_pool(const ProfilePool& pool, const std::filesystem::path& dir);
ProfilePool load_pool(const std::filesystem::path& dir);

}  // namespace bevpsm

#endif  // BEVPSM_PROFILES_HPP
