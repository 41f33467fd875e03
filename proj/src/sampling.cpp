// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bevpsm/errors.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm {

double scale_factor(double fleet_size, int n_profiles) {
  if (!(fleet_size > 0.0) || n_profiles <= 0) {
    throw InputError("scale_factor needs a positive fleet size and profile count");
  }
  return fleet_size / n_profiles;
}

Sample draw_sample(int pool_size, int n_profiles, Rng& rng) {
  if (n_profiles < 1 || n_profiles > pool_size) {
    throw InputError("cannot draw " + std::to_string(n_profiles) + " profiles from a pool of " +
                     std::to_string(pool_size));
  }
  std::vector<int> ids(static_cast<std::size_t>(pool_size));
  std::iota(ids.begin(), ids.end(), 0);
  for (int k = 0; k < n_profiles; ++k) {
    const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(pool_size - k)));
    std::swap(ids[static_cast<std::size_t>(k)], ids[static_cast<std::size_t>(j)]);
  }
  ids.resize(static_cast<std::size_t>(n_profiles));
  Sample s;
  s.profile_ids = std::move(ids);
  return s;
}

std::vector<Sample> draw_sample_set(int pool_size, int n_profiles, int n_samples,
                                    std::uint64_t master_seed) {
  if (n_samples < 1) throw InputError("n_samples must be at least 1");
  std::vector<Sample> out;
  for (int k = 0; k < n_samples; ++k) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(n_profiles),
                        static_cast<std::uint64_t>(k)));
    out.push_back(draw_sample(pool_size, n_profiles, rng));
    out.back().sample_id = k;
  }
  return out;
}

void assign_fleet(Sample& sample, double fleet_size) {
  if (!(fleet_size >= 0.0) || !std::isfinite(fleet_size)) {
    throw InputError("fleet size must be finite and non-negative");
  }
  sample.fleet_size = fleet_size;
  sample.scale = fleet_size == 0.0 ? 0.0 : scale_factor(fleet_size, sample.n_profiles());
}

namespace {

void check_ids(const Sample& sample, const ProfilePool& pool) {
  for (int id : sample.profile_ids) (void)pool.at(id);
}

}  // namespace

std::vector<double> hourly_consumption_sum(const Sample& sample, const ProfilePool& pool) {
  check_ids(sample, pool);
  std::vector<double> total(static_cast<std::size_t>(pool.horizon_steps / kStepsPerHour), 0.0);
  for (int id : sample.profile_ids) {
    const auto hourly = resample_hourly(pool.at(id).consumption);
    for (std::size_t h = 0; h < total.size(); ++h) total[h] += hourly.values[h];
  }
  return total;
}

AggregateStats aggregate_characteristics(const Sample& sample, const ProfilePool& pool) {
  check_ids(sample, pool);
  AggregateStats s;
  if (sample.profile_ids.empty()) return s;
  const double annualize = 35040.0 / static_cast<double>(pool.horizon_steps);
  double battery = 0.0;
  double consumption = 0.0;
  for (int id : sample.profile_ids) {
    battery += pool.at(id).vehicle.battery_capacity;
    consumption += pool.at(id).consumption.sum() * annualize;
  }
  const double n = static_cast<double>(sample.profile_ids.size());
  s.mean_battery_kwh = battery / n;
  s.mean_annual_consumption_kwh = consumption / n;
  s.total_battery_gwh = sample.scale * battery * 1e-6;
  s.annual_consumption_twh = sample.scale * consumption * 1e-9;
  const auto hourly = hourly_consumption_sum(sample, pool);
  const double peak = hourly.empty() ? 0.0 : *std::max_element(hourly.begin(), hourly.end());
  s.peak_scaled_consumption_gw = sample.scale * peak * 1e-6;
  return s;
}

TrimResult trim_samples(const std::vector<Sample>& samples, const ProfilePool& pool,
                        double threshold) {
  if (samples.empty()) throw InputError("trim_samples needs at least one sample");
  if (!(threshold >= 0.0)) throw InputError("trim threshold must be non-negative");
  std::vector<AggregateStats> stats;
  TrimResult out;
  for (const auto& s : samples) {
    stats.push_back(aggregate_characteristics(s, pool));
    out.mean_battery_kwh += stats.back().mean_battery_kwh;
    out.mean_annual_consumption_kwh += stats.back().mean_annual_consumption_kwh;
  }
  out.mean_battery_kwh /= static_cast<double>(samples.size());
  out.mean_annual_consumption_kwh /= static_cast<double>(samples.size());
  auto deviation = [](double value, double mean) {
    if (mean == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(value - mean) / std::abs(mean);
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool keep =
        deviation(stats[i].mean_battery_kwh, out.mean_battery_kwh) <= threshold &&
        deviation(stats[i].mean_annual_consumption_kwh, out.mean_annual_consumption_kwh) <= threshold;
    if (keep) {
      out.kept.push_back(samples[i]);
    } else {
      out.removed.push_back(i);
    }
  }
  return out;
}

void write_sample_csv(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  std::string text = "n_profiles,sample_id,profile_id\n";
  for (const auto& s : samples) {
    for (int id : s.profile_ids) {
      text += std::to_string(s.n_profiles()) + "," + std::to_string(s.sample_id) + "," +
              std::to_string(id) + "\n";
    }
  }
  write_file(path, text);
}

std::vector<Sample> read_sample_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<Sample> out;
  std::vector<int> declared;
  long line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "n_profiles,sample_id,profile_id") {
        throw ParseError(path.string(), line_no, "expected header n_profiles,sample_id,profile_id");
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw ParseError(path.string(), line_no, "expected 3 fields");
    int values[3];
    for (int k = 0; k < 3; ++k) {
      try {
        std::size_t used = 0;
        values[k] = std::stoi(std::string(fields[static_cast<std::size_t>(k)]), &used);
        if (used != fields[static_cast<std::size_t>(k)].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(path.string(), line_no, "field " + std::to_string(k + 1) + " is not an integer");
      }
    }
    if (out.empty() || declared.back() != values[0] || out.back().sample_id != values[1]) {
      out.emplace_back();
      out.back().sample_id = values[1];
      declared.push_back(values[0]);
    }
    auto& ids = out.back().profile_ids;
    if (std::find(ids.begin(), ids.end(), values[2]) != ids.end()) {
      throw ParseError(path.string(), line_no, "profile repeated within a sample");
    }
    ids.push_back(values[2]);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].n_profiles() != declared[i]) {
      throw ParseError(path.string(), 0,
                       "sample " + std::to_string(out[i].sample_id) + " declares " +
                           std::to_string(declared[i]) + " profiles but lists " +
                           std::to_string(out[i].n_profiles()));
    }
  }
  return out;
}

}  // namespace bevpsm
