// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/profiles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "bevpsm/errors.hpp"
#include "bevpsm/rng.hpp"

namespace bevpsm {

namespace {

constexpr double kTableTolerance = 1e-9;

void check_table(std::span<const double> table, const std::string& name) {
  if (table.empty()) throw ConfigError("probability table '" + name + "' is empty");
  double total = 0.0;
  for (double p : table) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ConfigError("probability table '" + name + "' has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kTableTolerance) {
    throw ConfigError("probability table '" + name + "' sums to " + std::to_string(total) +
                      ", not 1");
  }
}

void check_lognormal(const LogNormal& d, const std::string& name) {
  if (!(d.median > 0.0) || !std::isfinite(d.median)) {
    throw ConfigError("'" + name + ".median' must be positive");
  }
  if (!(d.sigma >= 0.0) || !std::isfinite(d.sigma)) {
    throw ConfigError("'" + name + ".sigma' must be non-negative");
  }
}

bool all_zero(std::span<const double> table) {
  return std::all_of(table.begin(), table.end(), [](double p) { return p == 0.0; });
}

std::string day_name(int t) { return std::string(kDayTypeNames[static_cast<std::size_t>(t)]); }
std::string dest_name(int d) {
  return std::string(kDestinationNames[static_cast<std::size_t>(d)]);
}

long draw_steps(Rng& rng, const LogNormal& hours) {
  const double h = rng.lognormal(hours.median, hours.sigma);
  return std::max(1L, std::lround(h * kStepsPerHour));
}

long draw_departure(Rng& rng, const std::array<double, 24>& table, long day_start) {
  const auto hour = static_cast<long>(rng.discrete(table));
  return day_start + hour * kStepsPerHour + static_cast<long>(rng.below(kStepsPerHour));
}

Trip make_trip(const MobilityRules& rules, long depart, Destination from, Destination to,
               double distance) {
  const double per_step = rules.trip_speed(distance) * kStepHours;
  const long steps = std::max(1L, static_cast<long>(std::ceil(distance / per_step)));
  return Trip{depart, depart + steps, from, to, distance};
}

}  // namespace

std::string_view destination_name(Destination d) {
  return kDestinationNames[static_cast<std::size_t>(d)];
}

Destination parse_destination(std::string_view name) {
  for (int i = 0; i < kNumDestinations; ++i) {
    if (kDestinationNames[static_cast<std::size_t>(i)] == name) return static_cast<Destination>(i);
  }
  throw ConfigError("unknown destination '" + std::string(name) + "'");
}

void VehicleModel::validate() const {
  const std::string who = "vehicle '" + name + "'";
  if (!(battery_capacity > 0.0)) throw ConfigError(who + ": battery capacity must be positive");
  if (!(drive_consumption > 0.0)) throw ConfigError(who + ": drive consumption must be positive");
  if (!(max_home_charge > 0.0)) throw ConfigError(who + ": home charging power must be positive");
  if (!(max_fast_charge >= max_home_charge)) {
    throw ConfigError(who + ": fast charging power must be at least the home charging power");
  }
}

void VehicleCatalog::validate() const {
  if (models.empty()) throw ConfigError("vehicle catalog is empty");
  if (weights.size() != models.size()) {
    throw ConfigError("vehicle catalog: one mix weight per model required");
  }
  for (const auto& m : models) m.validate();
  check_table(weights, "vehicles.weight");
}

double VehicleCatalog::mean_battery_capacity() const {
  double mean = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) mean += weights[i] * models[i].battery_capacity;
  return mean;
}

void MobilityRules::validate() const {
  for (int t = 0; t < kNumDayTypes; ++t) {
    check_table(stops_per_day[static_cast<std::size_t>(t)], "stops_per_day." + day_name(t));
    check_table(destination_weights[static_cast<std::size_t>(t)],
                "destination_weights." + day_name(t));
    const double p = long_tour.probability[static_cast<std::size_t>(t)];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("'long_tour.probability." + day_name(t) + "' must be in [0, 1]");
    }
  }
  for (int d = 0; d < kNumDestinations; ++d) {
    const auto& r = destinations[static_cast<std::size_t>(d)];
    const std::string where = "destinations." + dest_name(d);
    // Home is never a first destination, so its departure table may be empty.
    if (d != 0 || !all_zero(r.departure_hour)) check_table(r.departure_hour, where + ".departure_hour");
    check_lognormal(r.distance_km, where + ".distance_km");
    check_lognormal(r.dwell_hours, where + ".dwell_h");
  }
  if (long_tour.destination == Destination::kHome) {
    throw ConfigError("'long_tour.destination' cannot be home");
  }
  check_table(long_tour.departure_hour, "long_tour.departure_hour");
  check_lognormal(long_tour.distance_km, "long_tour.distance_km");
  check_lognormal(long_tour.dwell_hours, "long_tour.dwell_h");
  if (!(min_speed_kmh > 0.0 && min_speed_kmh <= cruise_speed_kmh &&
        cruise_speed_kmh <= max_speed_kmh)) {
    throw ConfigError("speeds must satisfy 0 < min_kmh <= cruise_kmh <= max_speed_kmh");
  }
  if (!(speed_ramp_km > 0.0)) throw ConfigError("'speed.ramp_km' must be positive");
  if (start_weekday < 0 || start_weekday > 6) throw ConfigError("'start_weekday' must be 0..6");
}

double MobilityRules::trip_speed(double distance_km) const {
  return min_speed_kmh +
         (cruise_speed_kmh - min_speed_kmh) * (1.0 - std::exp(-distance_km / speed_ramp_km));
}

DayType MobilityRules::day_type(long day_index) const {
  const long weekday = (start_weekday + day_index) % 7;
  if (weekday == 5) return DayType::kSaturday;
  if (weekday == 6) return DayType::kSunday;
  return DayType::kWeekday;
}

void ChargerDistribution::validate() const {
  for (int d = 0; d < kNumDestinations; ++d) {
    const double p = probability[static_cast<std::size_t>(d)];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("'chargers." + dest_name(d) + ".probability' must be in [0, 1]");
    }
    if (!(power_kw[static_cast<std::size_t>(d)] > 0.0)) {
      throw ConfigError("'chargers." + dest_name(d) + ".power_kw' must be positive");
    }
  }
}

std::vector<double> MobilityProfile::km_per_step() const {
  std::vector<double> km(static_cast<std::size_t>(horizon), 0.0);
  for (const auto& trip : trips) {
    const double per_step = trip.km_per_step();
    for (long s = trip.depart; s < trip.arrive; ++s) km[static_cast<std::size_t>(s)] = per_step;
  }
  return km;
}

double MobilityProfile::total_km() const {
  double total = 0.0;
  for (const auto& trip : trips) total += trip.distance_km;
  return total;
}

int MobilityProfile::location_at(long step) const {
  const auto it = std::upper_bound(trips.begin(), trips.end(), step,
                                   [](long s, const Trip& t) { return s < t.depart; });
  if (it == trips.begin()) return static_cast<int>(Destination::kHome);
  const Trip& prev = *(it - 1);
  if (step < prev.arrive) return -1;
  return static_cast<int>(prev.destination);
}

void MobilityProfile::check(double max_speed_kmh) const {
  Destination at = Destination::kHome;
  long free_from = 1;  // step 0 is parked at home
  for (std::size_t k = 0; k < trips.size(); ++k) {
    const Trip& t = trips[k];
    const std::string who = "trip " + std::to_string(k);
    if (t.origin != at) throw InternalError(who + ": departs away from the previous arrival");
    if (t.depart < free_from) throw InternalError(who + ": overlaps the previous trip");
    if (t.arrive <= t.depart) throw InternalError(who + ": has no driving steps");
    if (!(t.distance_km > 0.0)) throw InternalError(who + ": non-positive distance");
    if (t.km_per_step() > max_speed_kmh * kStepHours * (1.0 + 1e-12)) {
      throw InternalError(who + ": exceeds the maximum speed");
    }
    at = t.destination;
    free_from = t.arrive + 1;
  }
  if (at != Destination::kHome) throw InternalError("profile does not end at home");
  if (!trips.empty() && trips.back().arrive > horizon - 1) {
    throw InternalError("last trip does not end before the horizon");
  }
}

double Series::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

MobilityProfile generate_mobility(std::uint64_t seed, const MobilityRules& rules, long horizon) {
  rules.validate();
  if (horizon <= 0 || horizon % kStepsPerDay != 0) {
    throw InputError("horizon must be a positive multiple of 96 steps, got " +
                     std::to_string(horizon));
  }
  Rng rng(seed);
  MobilityProfile out;
  out.horizon = horizon;
  long cursor = 1;  // earliest step at which the vehicle may leave home
  const long days = horizon / kStepsPerDay;
  std::vector<Trip> tour;
  for (long day = 0; day < days; ++day) {
    const long day_start = day * kStepsPerDay;
    if (cursor >= day_start + kStepsPerDay) continue;  // still away on a multi-day tour
    const auto type = static_cast<std::size_t>(rules.day_type(day));
    tour.clear();
    if (rng.bernoulli(rules.long_tour.probability[type])) {
      const auto& lt = rules.long_tour;
      const long depart = std::max(cursor, draw_departure(rng, lt.departure_hour, day_start));
      const double distance = rng.lognormal(lt.distance_km.median, lt.distance_km.sigma);
      tour.push_back(make_trip(rules, depart, Destination::kHome, lt.destination, distance));
      const long back = tour.back().arrive + draw_steps(rng, lt.dwell_hours);
      tour.push_back(make_trip(rules, back, lt.destination, Destination::kHome, distance));
    } else {
      const auto stops = static_cast<int>(rng.discrete(rules.stops_per_day[type]));
      if (stops == 0) continue;
      std::vector<Destination> plan;
      for (int k = 0; k < stops; ++k) {
        plan.push_back(static_cast<Destination>(1 + rng.discrete(rules.destination_weights[type])));
      }
      const auto& first = rules.destinations[static_cast<std::size_t>(plan.front())];
      long time = std::max(cursor, draw_departure(rng, first.departure_hour, day_start));
      Destination at = Destination::kHome;
      for (Destination to : plan) {
        const auto& r = rules.destinations[static_cast<std::size_t>(to)];
        const double distance = rng.lognormal(r.distance_km.median, r.distance_km.sigma);
        tour.push_back(make_trip(rules, time, at, to, distance));
        time = tour.back().arrive + draw_steps(rng, r.dwell_hours);
        at = to;
      }
      const auto& home = rules.destinations[0].distance_km;
      tour.push_back(
          make_trip(rules, time, at, Destination::kHome, rng.lognormal(home.median, home.sigma)));
    }
    // A tour that cannot end parked at home inside the horizon is dropped.
    if (tour.back().arrive > horizon - 1) continue;
    out.trips.insert(out.trips.end(), tour.begin(), tour.end());
    cursor = tour.back().arrive + 1;
  }
  return out;
}

Series derive_driving_consumption(const MobilityProfile& profile, const VehicleModel& vehicle) {
  vehicle.validate();
  Series s{SeriesKind::kConsumption, 15, profile.km_per_step()};
  for (double& v : s.values) v *= vehicle.drive_consumption;
  return s;
}

double replay_min_soc(const std::vector<double>& consumption_kwh,
                      const std::vector<double>& availability_kw, double battery_kwh,
                      double efficiency, double initial_kwh, double* final_kwh) {
  if (consumption_kwh.size() != availability_kw.size()) {
    throw InputError("replay: consumption and availability lengths differ");
  }
  double soc = initial_kwh;
  double lowest = soc;
  for (std::size_t t = 0; t < consumption_kwh.size(); ++t) {
    soc = std::min(battery_kwh,
                   soc + efficiency * availability_kw[t] * kStepHours - consumption_kwh[t]);
    lowest = std::min(lowest, soc);
  }
  if (final_kwh) *final_kwh = soc;
  return lowest;
}

AvailabilityResult derive_grid_availability(const MobilityProfile& profile,
                                            const ChargerDistribution& chargers,
                                            const VehicleModel& vehicle, std::uint64_t seed,
                                            const EnRouteRules& en_route) {
  chargers.validate();
  vehicle.validate();
  AvailabilityResult out;
  out.series = Series{SeriesKind::kAvailability, 15,
                      std::vector<double>(static_cast<std::size_t>(profile.horizon), 0.0)};
  auto& avail = out.series.values;

  // One charger draw per parking event.
  Rng rng(seed);
  auto park = [&](long begin, long end, Destination where) {
    if (begin >= end) return;
    const auto d = static_cast<std::size_t>(where);
    double power = 0.0;
    if (rng.bernoulli(chargers.probability[d])) {
      power = std::min(chargers.power_kw[d], vehicle.max_home_charge);
    }
    out.parking.push_back(ParkingEvent{begin, end, where, power});
    for (long s = begin; s < end; ++s) avail[static_cast<std::size_t>(s)] = power;
  };
  long begin = 0;
  Destination at = Destination::kHome;
  for (const auto& trip : profile.trips) {
    park(begin, trip.depart, at);
    begin = trip.arrive;
    at = trip.destination;
  }
  park(begin, profile.horizon, at);

  // En-route fast-charge windows. Replay the year charging at full
  // availability; whenever a driving step would take the battery below the
  // reserve, that step (the latest one that can still help) becomes a
  // charging window. Repeat from the end-of-year state until it is periodic.
  const auto consumption = derive_driving_consumption(profile, vehicle).values;
  const double capacity = vehicle.battery_capacity;
  const double reserve = en_route.reserve_fraction * capacity;
  const double window_kwh = en_route.efficiency * vehicle.max_fast_charge * kStepHours;
  std::vector<std::size_t> trip_of(consumption.size(), 0);
  for (std::size_t k = 0; k < profile.trips.size(); ++k) {
    for (long s = profile.trips[k].depart; s < profile.trips[k].arrive; ++s) {
      trip_of[static_cast<std::size_t>(s)] = k;
    }
  }
  double start = capacity;
  for (int pass = 0; pass < 8; ++pass) {
    double soc = start;
    for (std::size_t t = 0; t < consumption.size(); ++t) {
      const double d = consumption[t];
      double next = std::min(capacity, soc + en_route.efficiency * avail[t] * kStepHours - d);
      if (d > 0.0 && avail[t] == 0.0 && next < reserve) {
        avail[t] = vehicle.max_fast_charge;
        next = std::min(capacity, soc + window_kwh - d);
        if (next < 0.0) {
          const Trip& trip = profile.trips[trip_of[t]];
          throw GenerationError("trip " + std::to_string(trip_of[t]) + " (departing step " +
                                std::to_string(trip.depart) + ", " +
                                std::to_string(trip.distance_km) +
                                " km) is infeasible even with continuous fast charging");
        }
      }
      soc = next;
    }
    if (soc >= start - 1e-9 * capacity) break;
    start = soc;
  }
  double final_soc = 0.0;
  const double lowest =
      replay_min_soc(consumption, avail, capacity, en_route.efficiency, start, &final_soc);
  if (lowest < -1e-9 * capacity || final_soc < start - 1e-9 * capacity) {
    throw GenerationError("no periodic energy-feasible charging pattern exists for this profile");
  }
  for (std::size_t t = 0; t < consumption.size(); ++t) {
    if (consumption[t] > 0.0 && avail[t] > 0.0) out.en_route_steps.push_back(static_cast<long>(t));
  }
  return out;
}

Series resample_hourly(const Series& series) {
  if (series.minutes != 15) throw InputError("resample_hourly expects a 15-minute series");
  if (series.values.size() % kStepsPerHour != 0) {
    throw InputError("series length " + std::to_string(series.values.size()) +
                     " is not divisible by 4");
  }
  Series out{series.kind, 60, std::vector<double>(series.values.size() / kStepsPerHour)};
  for (std::size_t h = 0; h < out.values.size(); ++h) {
    const double* v = series.values.data() + h * kStepsPerHour;
    const double total = (v[0] + v[1]) + (v[2] + v[3]);
    out.values[h] = series.kind == SeriesKind::kConsumption ? total : total / kStepsPerHour;
  }
  return out;
}

const BevProfile& ProfilePool::at(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= profiles.size()) {
    throw InputError("profile id " + std::to_string(id) + " is not in the pool");
  }
  return profiles[static_cast<std::size_t>(id)];
}

BevProfile generate_profile(int id, const PoolSettings& settings) {
  BevProfile p;
  p.id = id;
  p.seed = settings.base_seed + static_cast<std::uint64_t>(id);
  try {
    Rng pick(derive_seed(p.seed, 2));
    p.vehicle = settings.catalog.models[pick.discrete(settings.catalog.weights)];
    p.mobility = generate_mobility(derive_seed(p.seed, 0), settings.rules, settings.horizon_steps);
    p.consumption = derive_driving_consumption(p.mobility, p.vehicle);
    auto avail = derive_grid_availability(p.mobility, settings.chargers, p.vehicle,
                                          derive_seed(p.seed, 1), settings.en_route);
    p.availability = std::move(avail.series);
    p.en_route_steps = std::move(avail.en_route_steps);
  } catch (const GenerationError& e) {
    throw GenerationError("profile " + std::to_string(id) + ": " + e.what());
  }
  return p;
}

ProfilePool build_pool(const PoolSettings& settings) {
  if (settings.size < 1) throw InputError("pool size must be at least 1");
  settings.catalog.validate();
  settings.rules.validate();
  settings.chargers.validate();
  ProfilePool pool;
  pool.horizon_steps = settings.horizon_steps;
  pool.base_seed = settings.base_seed;
  pool.config_hash = settings.config_hash;
  pool.profiles.resize(static_cast<std::size_t>(settings.size));

  const int workers = std::clamp(settings.threads, 1, settings.size);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(settings.size));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < settings.size; i = next++) {
      try {
        pool.profiles[static_cast<std::size_t>(i)] = generate_profile(i, settings);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return pool;
}

}  // namespace bevpsm
