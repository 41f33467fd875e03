// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bevpsm/errors.hpp"
#include "bevpsm/profiles.hpp"
#include "bevpsm/text_io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bevpsm;

namespace {

VehicleModel test_vehicle(double battery = 58.0, double per_km = 0.166) {
  return VehicleModel{"test", battery, per_km, 11.0, 100.0};
}

ChargerDistribution home_only() {
  ChargerDistribution c;
  c.probability.fill(0.0);
  c.power_kw.fill(11.0);
  c.probability[0] = 1.0;
  return c;
}

// One home -> leisure -> home tour of `km` each way, driven at 100 km/h.
MobilityProfile single_tour(double km_each_way, long horizon = 2 * kStepsPerDay) {
  MobilityProfile p;
  p.horizon = horizon;
  const long steps = static_cast<long>(std::ceil(km_each_way / 25.0));
  p.trips.push_back({32, 32 + steps, Destination::kHome, Destination::kLeisure, km_each_way});
  const long back = 32 + steps + 8;
  p.trips.push_back({back, back + steps, Destination::kLeisure, Destination::kHome, km_each_way});
  return p;
}

// Independent replay: charge at full availability, cap at capacity, return
// the lowest state of charge.
double oracle_min_soc(const std::vector<double>& d, const std::vector<double>& a, double cap,
                      double eta, double start) {
  double soc = start;
  double low = soc;
  for (std::size_t t = 0; t < d.size(); ++t) {
    soc += eta * a[t] / 4.0 - d[t];
    if (soc > cap) soc = cap;
    if (soc < low) low = soc;
  }
  return low;
}

}  // namespace

TEST_CASE("mobility: zero trip-count rules keep the vehicle at home") {
  auto rules = testing::default_pool_settings().rules;
  for (auto& table : rules.stops_per_day) table = {1.0};
  rules.long_tour.probability.fill(0.0);
  const auto p = generate_mobility(7, rules, 7 * kStepsPerDay);
  CHECK(p.trips.empty());
  for (long s = 0; s < p.horizon; ++s) CHECK(p.location_at(s) == 0);
  const auto c = derive_driving_consumption(p, test_vehicle());
  CHECK(c.sum() == 0.0);
}

TEST_CASE("mobility: same seed gives identical trip lists") {
  const auto rules = testing::default_pool_settings().rules;
  const auto a = generate_mobility(42, rules, 35040);
  const auto b = generate_mobility(42, rules, 35040);
  REQUIRE(a.trips.size() == b.trips.size());
  for (std::size_t k = 0; k < a.trips.size(); ++k) {
    CHECK(a.trips[k].depart == b.trips[k].depart);
    CHECK(a.trips[k].arrive == b.trips[k].arrive);
    CHECK(a.trips[k].distance_km == b.trips[k].distance_km);
  }
  CHECK(generate_mobility(43, rules, 35040).trips.size() != 0);
}

TEST_CASE("mobility: a year of default rules is plausible and matches its trip list") {
  const auto rules = testing::default_pool_settings().rules;
  const auto p = generate_mobility(1, rules, 35040);
  p.check(rules.max_speed_kmh);
  double by_trip = 0.0;
  for (const auto& t : p.trips) by_trip += t.distance_km;
  const auto km = p.km_per_step();
  double by_step = 0.0;
  for (double v : km) by_step += v;
  CHECK(std::abs(by_step - by_trip) <= 1e-9 * by_trip);
  CHECK(by_trip >= 5000.0);
  CHECK(by_trip <= 30000.0);
  for (double v : km) CHECK(v <= rules.max_speed_kmh * 0.25);
  CHECK(p.location_at(0) == 0);
  CHECK(p.location_at(p.horizon - 1) == 0);
}

TEST_CASE("mobility: location sequence is continuous over many seeds") {
  const auto rules = testing::default_pool_settings().rules;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const auto p = generate_mobility(seed, rules, 35040);
    Destination at = Destination::kHome;
    for (const auto& t : p.trips) {
      CHECK(t.origin == at);
      at = t.destination;
    }
    CHECK(at == Destination::kHome);
  }
}

TEST_CASE("mobility: invalid tables are configuration errors naming the table") {
  auto rules = testing::default_pool_settings().rules;
  rules.stops_per_day[0] = {0.5, 0.4};
  CHECK_THROWS_WITH_AS(generate_mobility(1, rules, 96), doctest::Contains("stops_per_day.weekday"),
                       ConfigError);
  rules = testing::default_pool_settings().rules;
  rules.destinations[2].departure_hour[10] += 0.01;
  CHECK_THROWS_WITH_AS(generate_mobility(1, rules, 96),
                       doctest::Contains("destinations.shopping.departure_hour"), ConfigError);
  rules = testing::default_pool_settings().rules;
  rules.destinations[1].distance_km.median = 0.0;
  CHECK_THROWS_AS(generate_mobility(1, rules, 96), ConfigError);
  CHECK_THROWS_AS(generate_mobility(1, testing::default_pool_settings().rules, 100), InputError);
}

TEST_CASE("consumption: per-step product and yearly sum") {
  MobilityProfile p;
  p.horizon = 96;
  p.trips.push_back({10, 11, Destination::kHome, Destination::kShopping, 5.0});
  p.trips.push_back({20, 21, Destination::kShopping, Destination::kHome, 5.0});
  const auto c = derive_driving_consumption(p, test_vehicle(58.0, 0.15));
  CHECK(c.values[0] == 0.0);
  CHECK(c.values[10] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(c.values[15] == 0.0);

  const auto year = generate_mobility(3, testing::default_pool_settings().rules, 35040);
  const auto v = test_vehicle(64.0, 0.154);
  const double expected = year.total_km() * v.drive_consumption;
  const double got = derive_driving_consumption(year, v).sum();
  CHECK(std::abs(got - expected) <= 1e-9 * expected);
}

TEST_CASE("availability: home charger with probability one covers the parking event") {
  const auto p = single_tour(30.0);
  const auto r = derive_grid_availability(p, home_only(), test_vehicle(), 5);
  for (long s = 0; s < p.trips[0].depart; ++s) CHECK(r.series.values[static_cast<std::size_t>(s)] == 11.0);
  for (long s = p.trips[1].arrive; s < p.horizon; ++s) {
    CHECK(r.series.values[static_cast<std::size_t>(s)] == 11.0);
  }
  // No charger at the leisure stop, none while driving.
  for (long s = p.trips[0].depart; s < p.trips[1].arrive; ++s) {
    CHECK(r.series.values[static_cast<std::size_t>(s)] == 0.0);
  }
  CHECK(r.en_route_steps.empty());
}

TEST_CASE("availability: 40 kWh trip needs no window, 70 kWh trip is made feasible") {
  const auto v = test_vehicle(58.0, 0.2);
  {
    MobilityProfile p;
    p.horizon = 96;
    p.trips.push_back({20, 28, Destination::kHome, Destination::kLeisure, 200.0});  // 40 kWh
    p.trips.push_back({40, 41, Destination::kLeisure, Destination::kHome, 1.0});
    const auto r = derive_grid_availability(p, home_only(), v, 1);
    CHECK(r.en_route_steps.empty());
  }
  MobilityProfile p;
  p.horizon = 2 * 96;
  p.trips.push_back({20, 34, Destination::kHome, Destination::kLeisure, 350.0});  // 70 kWh
  p.trips.push_back({60, 61, Destination::kLeisure, Destination::kHome, 1.0});
  const auto r = derive_grid_availability(p, home_only(), v, 1);
  REQUIRE_FALSE(r.en_route_steps.empty());
  for (long s : r.en_route_steps) {
    CHECK(s >= 20);
    CHECK(s < 34);
    CHECK(r.series.values[static_cast<std::size_t>(s)] == v.max_fast_charge);
  }
  const auto d = derive_driving_consumption(p, v).values;
  CHECK(oracle_min_soc(d, r.series.values, v.battery_capacity, 0.95, v.battery_capacity) >= 0.0);
  // Latest placement: the first window comes after the battery has been
  // drawn down to the reserve.
  const double before_first =
      v.battery_capacity - 25.0 * 0.2 * static_cast<double>(r.en_route_steps.front() - 20);
  CHECK(before_first <= 0.1 * v.battery_capacity + 25.0 * 0.2);
}

TEST_CASE("availability: infeasible trip is a generation error naming the trip") {
  VehicleModel slow{"slow", 20.0, 0.2, 1.0, 1.0};
  MobilityProfile p;
  p.horizon = 96;
  p.trips.push_back({10, 30, Destination::kHome, Destination::kLeisure, 600.0});
  p.trips.push_back({40, 41, Destination::kLeisure, Destination::kHome, 1.0});
  CHECK_THROWS_WITH_AS(derive_grid_availability(p, home_only(), slow, 1),
                       doctest::Contains("trip 0"), GenerationError);
}

TEST_CASE("resample: sums consumption, averages availability") {
  CHECK(resample_hourly({SeriesKind::kConsumption, 15, {0.5, 0.5, 0.5, 0.5}}).values[0] == 2.0);
  CHECK(resample_hourly({SeriesKind::kAvailability, 15, {11, 11, 0, 0}}).values[0] == 5.5);
  CHECK(resample_hourly({SeriesKind::kAvailability, 15, {0, 0, 0, 0}}).values[0] == 0.0);
  CHECK(resample_hourly({SeriesKind::kConsumption, 15, {1, 2, 3, 4, 5, 6, 7, 8}}).minutes == 60);
}

TEST_CASE("resample: length not divisible by four is an input error") {
  CHECK_THROWS_AS(resample_hourly({SeriesKind::kConsumption, 15, {1, 2, 3}}), InputError);
  CHECK_THROWS_AS(resample_hourly({SeriesKind::kConsumption, 60, {1, 2, 3, 4}}), InputError);
}

TEST_CASE("pool: 200 default profiles satisfy every profile invariant") {
  const auto settings = testing::default_pool_settings();
  const auto pool = build_pool(settings);
  REQUIRE(pool.size() == 200);
  double battery = 0.0;
  for (const auto& p : pool.profiles) {
    battery += p.vehicle.battery_capacity;
    p.mobility.check(settings.rules.max_speed_kmh);
    const auto& d = p.consumption.values;
    const auto& a = p.availability.values;
    CHECK(std::all_of(d.begin(), d.end(), [](double v) { return v >= 0.0; }));
    CHECK(std::all_of(a.begin(), a.end(), [](double v) { return v >= 0.0; }));
    // Consumption only while driving; availability while driving only in windows.
    for (std::size_t s = 0; s < d.size(); ++s) {
      const bool driving = p.mobility.location_at(static_cast<long>(s)) < 0;
      if (!driving && d[s] != 0.0) FAIL("consumption while parked");
      if (driving && a[s] != 0.0 &&
          !std::binary_search(p.en_route_steps.begin(), p.en_route_steps.end(),
                              static_cast<long>(s))) {
        FAIL("availability while driving outside a window");
      }
    }
    // Energy feasibility from the periodic state (two passes reach it).
    double end_soc = p.vehicle.battery_capacity;
    for (int pass = 0; pass < 3; ++pass) {
      double soc = end_soc;
      for (std::size_t t = 0; t < d.size(); ++t) {
        soc = std::min(p.vehicle.battery_capacity, soc + 0.95 * a[t] / 4.0 - d[t]);
      }
      end_soc = soc;
    }
    CHECK(oracle_min_soc(d, a, p.vehicle.battery_capacity, 0.95, end_soc) >= -1e-9);
    const auto hourly = resample_hourly(p.consumption);
    CHECK(std::abs(hourly.sum() - p.consumption.sum()) <= 1e-9 * std::max(1.0, p.consumption.sum()));
  }
  const double mean = battery / 200.0;
  CHECK(mean >= 49.0);
  CHECK(mean <= 76.0);
}

TEST_CASE("pool: singleton pool and generation independent of thread count") {
  auto settings = testing::default_pool_settings();
  settings.size = 1;
  CHECK(build_pool(settings).size() == 1);

  settings.size = 12;
  settings.horizon_steps = 28 * kStepsPerDay;
  const auto sequential = build_pool(settings);
  settings.threads = 3;
  const auto parallel = build_pool(settings);
  for (std::size_t i = 0; i < sequential.size(); ++i) {
    CHECK(sequential.profiles[i].consumption.values == parallel.profiles[i].consumption.values);
    CHECK(sequential.profiles[i].availability.values == parallel.profiles[i].availability.values);
    CHECK(sequential.profiles[i].vehicle.name == parallel.profiles[i].vehicle.name);
  }
}

TEST_CASE("pool: save and load reproduce the serialization bit-exactly") {
  auto settings = testing::default_pool_settings();
  settings.size = 3;
  const auto pool = build_pool(settings);
  const auto dir = testing::scratch_dir("pool_roundtrip");
  save_pool(pool, dir / "a");
  const auto loaded = load_pool(dir / "a");
  REQUIRE(loaded.size() == pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CHECK(loaded.profiles[i].consumption.values == pool.profiles[i].consumption.values);
    CHECK(loaded.profiles[i].availability.values == pool.profiles[i].availability.values);
    CHECK(loaded.profiles[i].mobility.trips.size() == pool.profiles[i].mobility.trips.size());
  }
  save_pool(loaded, dir / "b");
  for (const char* f : {"manifest.json", "profile_0002/meta.json", "profile_0002/consumption.csv",
                        "profile_0001/availability.csv", "profile_0000/mobility.csv"}) {
    CHECK_MESSAGE(read_file(dir / "a" / f) == read_file(dir / "b" / f), f);
  }
  // Same seed and config again: identical bytes.
  save_pool(build_pool(settings), dir / "c");
  CHECK(read_file(dir / "a" / "profile_0001/consumption.csv") ==
        read_file(dir / "c" / "profile_0001/consumption.csv"));
}

TEST_CASE("pool: generation errors carry the profile index") {
  auto settings = testing::default_pool_settings();
  settings.size = 2;
  settings.horizon_steps = 14 * kStepsPerDay;
  settings.rules.long_tour.probability.fill(1.0);
  settings.rules.long_tour.distance_km = {3000.0, 0.0};
  for (auto& m : settings.catalog.models) m.max_fast_charge = m.max_home_charge;
  CHECK_THROWS_WITH_AS(build_pool(settings), doctest::Contains("profile 0"), GenerationError);
}
