// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include "bevpsm/errors.hpp"
#include "bevpsm/profiles.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm {

namespace {

template <std::size_t N>
std::array<double, N> fixed_table(const Json& object, std::string_view key, std::string_view where) {
  const auto values = get_numbers(object, key, where);
  if (values.size() != N) {
    throw ConfigError("'" + join_path(where, key) + "' must have " + std::to_string(N) +
                      " entries");
  }
  std::array<double, N> out{};
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

LogNormal lognormal_from_json(const Json& object, std::string_view key, std::string_view where) {
  const Json& node = require(object, key, where);
  const std::string path = join_path(where, key);
  return LogNormal{get_number(node, "median", path), get_number(node, "sigma", path)};
}

Json vehicle_to_json(const VehicleModel& v) {
  return Json{{"name", v.name},
              {"battery_kwh", v.battery_capacity},
              {"consumption_kwh_per_km", v.drive_consumption},
              {"max_home_charge_kw", v.max_home_charge},
              {"max_fast_charge_kw", v.max_fast_charge}};
}

VehicleModel vehicle_from_json(const Json& j, std::string_view where) {
  VehicleModel v;
  v.name = get_string(j, "name", where);
  v.battery_capacity = get_number(j, "battery_kwh", where);
  v.drive_consumption = get_number(j, "consumption_kwh_per_km", where);
  v.max_home_charge = get_number(j, "max_home_charge_kw", where);
  v.max_fast_charge = get_number(j, "max_fast_charge_kw", where);
  return v;
}

std::string profile_dir_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "profile_%04d", id);
  return buf;
}

}  // namespace

MobilityRules mobility_rules_from_json(const Json& mobility, std::string_view where) {
  MobilityRules r;
  const Json& stops = require(mobility, "stops_per_day", where);
  const Json& weights = require(mobility, "destination_weights", where);
  const std::string stops_path = join_path(where, "stops_per_day");
  const std::string weights_path = join_path(where, "destination_weights");
  for (int t = 0; t < kNumDayTypes; ++t) {
    const auto day = kDayTypeNames[static_cast<std::size_t>(t)];
    r.stops_per_day[static_cast<std::size_t>(t)] = get_numbers(stops, day, stops_path);
    const Json& w = require(weights, day, weights_path);
    const std::string w_path = join_path(weights_path, day);
    for (int d = 1; d < kNumDestinations; ++d) {
      r.destination_weights[static_cast<std::size_t>(t)][static_cast<std::size_t>(d - 1)] =
          get_number(w, kDestinationNames[static_cast<std::size_t>(d)], w_path);
    }
  }
  const Json& dests = require(mobility, "destinations", where);
  const std::string dests_path = join_path(where, "destinations");
  for (int d = 0; d < kNumDestinations; ++d) {
    const auto name = kDestinationNames[static_cast<std::size_t>(d)];
    const Json& node = require(dests, name, dests_path);
    const std::string path = join_path(dests_path, name);
    auto& out = r.destinations[static_cast<std::size_t>(d)];
    if (node.contains("departure_hour")) out.departure_hour = fixed_table<24>(node, "departure_hour", path);
    out.distance_km = lognormal_from_json(node, "distance_km", path);
    out.dwell_hours = lognormal_from_json(node, "dwell_h", path);
  }
  const Json& lt = require(mobility, "long_tour", where);
  const std::string lt_path = join_path(where, "long_tour");
  const Json& prob = require(lt, "probability", lt_path);
  for (int t = 0; t < kNumDayTypes; ++t) {
    r.long_tour.probability[static_cast<std::size_t>(t)] =
        get_number(prob, kDayTypeNames[static_cast<std::size_t>(t)], join_path(lt_path, "probability"));
  }
  r.long_tour.destination = parse_destination(get_string(lt, "destination", lt_path));
  r.long_tour.departure_hour = fixed_table<24>(lt, "departure_hour", lt_path);
  r.long_tour.distance_km = lognormal_from_json(lt, "distance_km", lt_path);
  r.long_tour.dwell_hours = lognormal_from_json(lt, "dwell_h", lt_path);
  r.max_speed_kmh = get_number(mobility, "max_speed_kmh", where, r.max_speed_kmh);
  if (mobility.contains("speed")) {
    const Json& speed = mobility.at("speed");
    const std::string path = join_path(where, "speed");
    r.min_speed_kmh = get_number(speed, "min_kmh", path, r.min_speed_kmh);
    r.cruise_speed_kmh = get_number(speed, "cruise_kmh", path, r.cruise_speed_kmh);
    r.speed_ramp_km = get_number(speed, "ramp_km", path, r.speed_ramp_km);
  }
  r.start_weekday = static_cast<int>(get_integer(mobility, "start_weekday", where, 0));
  r.validate();
  return r;
}

VehicleCatalog catalog_from_json(const Json& vehicles, std::string_view where) {
  if (!vehicles.is_array()) throw ConfigError("'" + std::string(where) + "' must be an array");
  VehicleCatalog c;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string path = std::string(where) + "[" + std::to_string(i) + "]";
    c.models.push_back(vehicle_from_json(vehicles[i], path));
    c.weights.push_back(get_number(vehicles[i], "weight", path));
  }
  c.validate();
  return c;
}

ChargerDistribution chargers_from_json(const Json& chargers, std::string_view where) {
  ChargerDistribution c;
  for (int d = 0; d < kNumDestinations; ++d) {
    const auto name = kDestinationNames[static_cast<std::size_t>(d)];
    const Json& node = require(chargers, name, where);
    const std::string path = join_path(where, name);
    c.probability[static_cast<std::size_t>(d)] = get_number(node, "probability", path);
    c.power_kw[static_cast<std::size_t>(d)] = get_number(node, "power_kw", path);
  }
  c.validate();
  return c;
}

PoolSettings pool_settings_from_config(const Json& config) {
  PoolSettings s;
  const Json& pool = require(config, "pool", "");
  s.size = static_cast<int>(get_integer(pool, "size", "pool"));
  const long long seed = get_integer(pool, "base_seed", "pool");
  if (seed < 0) throw ConfigError("'pool.base_seed' must be non-negative");
  s.base_seed = static_cast<std::uint64_t>(seed);
  s.horizon_steps = get_integer(pool, "horizon_steps", "pool");
  s.threads = static_cast<int>(get_integer(pool, "threads", "pool", 1));
  s.rules = mobility_rules_from_json(require(config, "mobility", ""), "mobility");
  s.catalog = catalog_from_json(require(config, "vehicles", ""), "vehicles");
  s.chargers = chargers_from_json(require(config, "chargers", ""), "chargers");
  if (config.contains("en_route")) {
    const Json& er = config.at("en_route");
    s.en_route.reserve_fraction = get_number(er, "reserve_fraction", "en_route", 0.1);
    s.en_route.efficiency = get_number(er, "efficiency", "en_route", 0.95);
  }
  if (!(s.en_route.reserve_fraction >= 0.0 && s.en_route.reserve_fraction < 1.0)) {
    throw ConfigError("'en_route.reserve_fraction' must be in [0, 1)");
  }
  if (!(s.en_route.efficiency > 0.0 && s.en_route.efficiency <= 1.0)) {
    throw ConfigError("'en_route.efficiency' must be in (0, 1]");
  }
  Json fingerprint = Json::object();
  for (const char* key : {"mobility", "vehicles", "chargers", "en_route"}) {
    if (config.contains(key)) fingerprint[key] = config.at(key);
  }
  fingerprint["pool"] = {{"size", s.size}, {"base_seed", s.base_seed}, {"horizon_steps", s.horizon_steps}};
  s.config_hash = config_hash(fingerprint);
  return s;
}

void save_pool(const ProfilePool& pool, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json manifest{{"format", "bevpsm-pool"},
                {"version", 1},
                {"resolution_minutes", 15},
                {"horizon_steps", pool.horizon_steps},
                {"base_seed", pool.base_seed},
                {"config_hash", pool.config_hash},
                {"profiles", Json::array()}};
  for (const auto& p : pool.profiles) {
    const std::string sub = profile_dir_name(p.id);
    manifest["profiles"].push_back(
        Json{{"id", p.id}, {"seed", p.seed}, {"vehicle", p.vehicle.name}, {"directory", sub}});
    Json trips = Json::array();
    for (const auto& t : p.mobility.trips) {
      trips.push_back(Json{{"depart", t.depart},
                           {"arrive", t.arrive},
                           {"origin", destination_name(t.origin)},
                           {"destination", destination_name(t.destination)},
                           {"distance_km", t.distance_km}});
    }
    Json meta{{"id", p.id},
              {"seed", p.seed},
              {"vehicle", vehicle_to_json(p.vehicle)},
              {"horizon_steps", p.mobility.horizon},
              {"trips", std::move(trips)},
              {"en_route_steps", p.en_route_steps}};
    const auto pdir = dir / sub;
    write_file(pdir / "meta.json", meta.dump(1) + "\n");
    write_series_csv(pdir / "mobility.csv", p.mobility.km_per_step());
    write_series_csv(pdir / "consumption.csv", p.consumption.values);
    write_series_csv(pdir / "availability.csv", p.availability.values);
  }
  write_file(dir / "manifest.json", manifest.dump(1) + "\n");
}

ProfilePool load_pool(const std::filesystem::path& dir) {
  const Json manifest = load_config(dir / "manifest.json");
  if (get_string(manifest, "format", "manifest") != "bevpsm-pool") {
    throw ConfigError(dir.string() + ": not a profile pool manifest");
  }
  ProfilePool pool;
  pool.horizon_steps = get_integer(manifest, "horizon_steps", "manifest");
  pool.base_seed = require(manifest, "base_seed", "manifest").get<std::uint64_t>();
  pool.config_hash = get_string(manifest, "config_hash", "manifest", "");
  const Json& list = require(manifest, "profiles", "manifest");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "manifest.profiles[" + std::to_string(i) + "]";
    const auto pdir = dir / get_string(list[i], "directory", where);
    const Json meta = load_config(pdir / "meta.json");
    BevProfile p;
    p.id = static_cast<int>(get_integer(meta, "id", "meta"));
    if (p.id != static_cast<int>(i)) {
      throw ConfigError(pdir.string() + ": profile ids must be 0..n-1 in manifest order");
    }
    p.seed = require(meta, "seed", "meta").get<std::uint64_t>();
    p.vehicle = vehicle_from_json(require(meta, "vehicle", "meta"), "meta.vehicle");
    p.mobility.horizon = get_integer(meta, "horizon_steps", "meta");
    for (const auto& t : require(meta, "trips", "meta")) {
      p.mobility.trips.push_back(Trip{get_integer(t, "depart", "trip"), get_integer(t, "arrive", "trip"),
                                      parse_destination(get_string(t, "origin", "trip")),
                                      parse_destination(get_string(t, "destination", "trip")),
                                      get_number(t, "distance_km", "trip")});
    }
    p.en_route_steps = require(meta, "en_route_steps", "meta").get<std::vector<long>>();
    p.consumption = Series{SeriesKind::kConsumption, 15, read_series_csv(pdir / "consumption.csv")};
    p.availability =
        Series{SeriesKind::kAvailability, 15, read_series_csv(pdir / "availability.csv")};
    const auto km = read_series_csv(pdir / "mobility.csv");
    const auto n = static_cast<std::size_t>(pool.horizon_steps);
    if (p.mobility.horizon != pool.horizon_steps || km.size() != n ||
        p.consumption.values.size() != n || p.availability.values.size() != n) {
      throw ConfigError(pdir.string() + ": series length does not match the pool horizon");
    }
    if (km != p.mobility.km_per_step()) {
      throw ConfigError(pdir.string() + ": mobility.csv disagrees with the trip list");
    }
    pool.profiles.push_back(std::move(p));
  }
  return pool;
}

}  // namespace bevpsm
