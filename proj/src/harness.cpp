// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "bevpsm/errors.hpp"
#include "bevpsm/svg_plot.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm {

namespace {

constexpr const char* kFixedColumns[] = {"setting",         "strategy",       "fleet_size",
                                         "n_profiles",      "sample_id",      "bevs_per_profile",
                                         "objective_eur",   "cost_delta_eur_per_bev_yr",
                                         "runtime_s",       "status"};

std::string fmt(double v) { return format_double(v == 0.0 ? 0.0 : v); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void check_token(const std::string& s, std::string_view what) {
  if (s.empty() || s.find_first_of(",\"\n\r") != std::string::npos) {
    throw ConfigError(std::string(what) + " '" + s + "' must be non-empty without commas or quotes");
  }
}

std::string fleet_label(double fleet) {
  std::ostringstream o;
  if (fleet >= 1e6 && std::fmod(fleet, 1e5) == 0.0) {
    o << fleet / 1e6 << "M";
  } else {
    o << fleet;
  }
  return o.str();
}

}  // namespace

ExperimentSpec experiment_from_config(const Json& config) {
  ExperimentSpec spec;
  const Json empty = Json::object();
  const Json& sampling = config.contains("sampling") ? config.at("sampling") : empty;
  const Json& scenario = config.contains("scenario") ? config.at("scenario") : empty;
  if (sampling.contains("sizes")) {
    for (double v : get_numbers(sampling, "sizes", "sampling")) {
      if (v != std::floor(v) || v < 1) throw ConfigError("'sampling.sizes' must hold positive integers");
      spec.sample_sizes.push_back(static_cast<int>(v));
    }
  } else {
    for (int n = 5; n <= 120; n += 5) spec.sample_sizes.push_back(n);
  }
  spec.samples_per_size = static_cast<int>(get_integer(sampling, "samples_per_size", "sampling", 10));
  if (spec.samples_per_size < 1) throw ConfigError("'sampling.samples_per_size' must be positive");
  const long long seed = get_integer(sampling, "master_seed", "sampling", 0);
  if (seed < 0) throw ConfigError("'sampling.master_seed' must be non-negative");
  spec.master_seed = static_cast<std::uint64_t>(seed);
  if (sampling.contains("trim_threshold")) {
    spec.trim_threshold = number_or_inf(sampling.at("trim_threshold"), "sampling.trim_threshold");
    if (!(spec.trim_threshold >= 0.0)) throw ConfigError("'sampling.trim_threshold' must be non-negative");
  }

  spec.setting = get_string(scenario, "setting", "scenario", spec.setting);
  check_token(spec.setting, "scenario.setting");
  if (scenario.contains("fleet_sizes")) spec.fleet_sizes = get_numbers(scenario, "fleet_sizes", "scenario");
  for (double f : spec.fleet_sizes) {
    if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("'scenario.fleet_sizes' must be positive");
  }
  if (scenario.contains("strategies")) {
    spec.strategies.clear();
    const Json& list = scenario.at("strategies");
    if (!list.is_array()) throw ConfigError("'scenario.strategies' must be an array");
    for (const auto& s : list) {
      if (!s.is_string()) throw ConfigError("'scenario.strategies' must hold strategy names");
      const Strategy st = parse_strategy(s.get<std::string>());
      if (st == Strategy::kNone) throw ConfigError("'scenario.strategies' lists the reference");
      spec.strategies.push_back(st);
    }
  }
  spec.time_limit_s = get_number(scenario, "time_limit_s", "scenario", spec.time_limit_s);
  if (!(spec.time_limit_s > 0.0)) throw ConfigError("'scenario.time_limit_s' must be positive");
  spec.spike_threshold_gw = get_number(scenario, "spike_threshold_gw", "scenario", spec.spike_threshold_gw);
  spec.spike_reference_fleet =
      get_number(scenario, "spike_reference_fleet", "scenario", spec.spike_reference_fleet);
  if (!(spec.spike_reference_fleet > 0.0)) throw ConfigError("'scenario.spike_reference_fleet' must be positive");
  spec.threads = static_cast<int>(get_integer(scenario, "threads", "scenario", 1));
  if (spec.threads < 1) throw ConfigError("'scenario.threads' must be at least 1");
  spec.timing = get_bool(scenario, "timing", "scenario", true);
  return spec;
}

std::string ScenarioConfig::key() const {
  std::ostringstream o;
  o << setting << "/" << strategy_name(strategy) << "/" << fmt(fleet_size) << "/" << n_profiles << "/"
    << sample_id;
  return o.str();
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunInputs& inputs, RunArtifacts* artifacts) {
  const auto start = std::chrono::steady_clock::now();
  const SystemConfig system = system_from_config(inputs.config, inputs.base_dir);
  PsmModel model = build_reference_model(system);
  if (cfg.strategy != Strategy::kNone) {
    if (cfg.profile_ids.empty()) throw InputError(cfg.key() + ": scenario has no profiles");
    const ProfilePool pool = load_pool(inputs.pool_dir);
    Sample sample;
    sample.sample_id = cfg.sample_id;
    sample.profile_ids = cfg.profile_ids;
    attach_bev_block(model, sample, pool, cfg.fleet_size, cfg.strategy, system.bev);
  }
  lp::SimplexOptions options;
  options.time_limit_seconds = inputs.time_limit_s;
  lp::RawSolution raw = lp::solve(model.lp, options);
  ScenarioResult result;
  if (raw.status == lp::SolveStatus::kOptimal) {
    result = extract_solution(model, raw);
  } else {
    result.status = raw.status;
    result.horizon = model.horizon;
    result.iterations = raw.iterations;
    result.solve_seconds = raw.solve_seconds;
  }
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (artifacts) {
    artifacts->model = std::move(model);
    artifacts->raw = std::move(raw);
  }
  return result;
}

double compute_cost_delta(const ScenarioResult& scenario, const ScenarioResult& reference, double fleet_size) {
  if (!(fleet_size > 0.0)) throw InputError("cost delta needs a positive fleet size");
  if (scenario.horizon != reference.horizon || scenario.horizon <= 0) {
    throw InputError("scenario and reference horizons differ");
  }
  return (scenario.objective - reference.objective) * (kHoursPerYear / scenario.horizon) / fleet_size;
}

std::vector<std::pair<std::string, double>> compute_capacity_delta(const ScenarioResult& scenario,
                                                                   const ScenarioResult& reference) {
  if (scenario.capacities.size() != reference.capacities.size()) {
    throw InputError("scenario and reference technology sets differ");
  }
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < reference.capacities.size(); ++i) {
    const auto& [key, ref] = reference.capacities[i];
    if (scenario.capacities[i].first != key) {
      throw InputError("technology '" + scenario.capacities[i].first + "' does not match '" + key + "'");
    }
    out.emplace_back(key, scenario.capacities[i].second - ref);
  }
  return out;
}

double spike_threshold_gw(const ExperimentSpec& spec, double fleet_size) {
  return spec.spike_threshold_gw * fleet_size / spec.spike_reference_fleet;
}

SpikeStats spike_statistics(const Sample& sample, const ProfilePool& pool, double fleet_size,
                            double threshold_gw, const std::vector<double>* charging_mw) {
  SpikeStats s;
  s.threshold_gw = threshold_gw;
  if (sample.profile_ids.empty()) return s;
  const double scale = fleet_size > 0.0 ? fleet_size / sample.n_profiles() : 0.0;
  for (double kwh : hourly_consumption_sum(sample, pool)) {
    const double gw = kwh * scale * 1e-6;
    s.peak_consumption_gw = std::max(s.peak_consumption_gw, gw);
    if (gw > threshold_gw) ++s.consumption_hours_above;
  }
  if (charging_mw) {
    for (double mw : *charging_mw) {
      const double gw = mw * 1e-3;
      s.peak_charging_gw = std::max(s.peak_charging_gw, gw);
      if (gw > threshold_gw) ++s.charging_hours_above;
    }
  }
  return s;
}

std::vector<Sample> draw_experiment_samples(const ExperimentSpec& spec, int pool_size) {
  std::vector<Sample> all;
  for (int n : spec.sample_sizes) {
    if (n > pool_size) {
      throw ConfigError("sample size " + std::to_string(n) + " exceeds the pool of " + std::to_string(pool_size));
    }
    for (auto& s : draw_sample_set(pool_size, n, spec.samples_per_size, spec.master_seed)) {
      all.push_back(std::move(s));
    }
  }
  return all;
}

std::vector<ScenarioConfig> sweep_grid(const ExperimentSpec& spec, const std::vector<Sample>& samples) {
  std::vector<ScenarioConfig> grid;
  for (double fleet : spec.fleet_sizes) {
    for (int n : spec.sample_sizes) {
      for (const auto& s : samples) {
        if (s.n_profiles() != n) continue;
        for (Strategy st : spec.strategies) {
          grid.push_back(ScenarioConfig{spec.setting, st, fleet, n, s.sample_id, s.profile_ids});
        }
      }
    }
  }
  return grid;
}

ResultRow make_row(const ScenarioConfig& cfg, const ScenarioResult& result, const ScenarioResult& reference) {
  ResultRow row;
  row.setting = cfg.setting;
  row.strategy = std::string(strategy_name(cfg.strategy));
  row.fleet_size = cfg.strategy == Strategy::kNone ? 0.0 : cfg.fleet_size;
  row.n_profiles = cfg.strategy == Strategy::kNone ? 0 : cfg.n_profiles;
  row.sample_id = cfg.strategy == Strategy::kNone ? 0 : cfg.sample_id;
  row.bevs_per_profile = row.n_profiles > 0 ? row.fleet_size / row.n_profiles : 0.0;
  row.objective_eur = result.objective;
  row.cost_delta_eur_per_bev_yr =
      cfg.strategy == Strategy::kNone ? 0.0 : compute_cost_delta(result, reference, cfg.fleet_size);
  row.runtime_s = result.runtime_seconds;
  row.status = std::string(lp::status_name(result.status));
  for (const auto& [key, delta] : compute_capacity_delta(result, reference)) {
    row.capacities.push_back(result.capacity(key));
    row.capacity_deltas.push_back(cfg.strategy == Strategy::kNone ? 0.0 : delta);
  }
  return row;
}

SweepOutput sweep(const ExperimentSpec& spec, const RunInputs& inputs, const ProgressFn& progress) {
  if (spec.strategies.empty()) throw ConfigError("sweep needs at least one strategy");
  SweepOutput out;
  const ProfilePool pool = load_pool(inputs.pool_dir);
  out.samples = draw_experiment_samples(spec, static_cast<int>(pool.size()));
  std::vector<Sample> kept = out.samples;
  if (std::isfinite(spec.trim_threshold)) {
    auto trimmed = trim_samples(out.samples, pool, spec.trim_threshold);
    for (std::size_t i : trimmed.removed) out.removed.push_back(out.samples[i]);
    kept = std::move(trimmed.kept);
  }

  RunInputs run_inputs = inputs;
  run_inputs.time_limit_s = spec.time_limit_s;
  const ScenarioConfig ref_cfg{spec.setting, Strategy::kNone, 0.0, 0, 0, {}};
  out.reference = run_scenario(ref_cfg, run_inputs);
  if (out.reference.status != lp::SolveStatus::kOptimal || !out.reference.feasibility.pass) {
    throw InputError("reference run of setting '" + spec.setting + "' did not solve (" +
                     std::string(lp::status_name(out.reference.status)) + ")");
  }
  if (progress) progress(ref_cfg, out.reference);
  out.table.technologies.clear();
  for (const auto& [key, value] : out.reference.capacities) out.table.technologies.push_back(key);
  out.table.rows.push_back(make_row(ref_cfg, out.reference, out.reference));

  const auto grid = sweep_grid(spec, kept);
  std::vector<ScenarioResult> results(grid.size());
  std::vector<std::string> errors(grid.size());
  std::mutex progress_mutex;
  auto run_one = [&](std::size_t i) {
    try {
      results[i] = run_scenario(grid[i], run_inputs);
    } catch (const Error& e) {
      errors[i] = std::string(category_name(e.category())) + ": " + e.what();
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(grid[i], results[i]);
    }
  };
  const int threads = spec.timing ? 1 : std::max(1, spec.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) run_one(i);
      });
    }
    for (auto& w : workers) w.join();
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& cfg = grid[i];
    const auto& r = results[i];
    Sample sample;
    sample.sample_id = cfg.sample_id;
    sample.profile_ids = cfg.profile_ids;
    const bool solved = errors[i].empty() && r.status == lp::SolveStatus::kOptimal;
    out.spikes.push_back(SpikeRecord{cfg, spike_statistics(sample, pool, cfg.fleet_size,
                                                           spike_threshold_gw(spec, cfg.fleet_size),
                                                           solved ? &r.bev_charge : nullptr)});
    if (!errors[i].empty()) {
      out.failures.push_back(FailureRecord{cfg, "error", r.runtime_seconds, errors[i]});
    } else if (!solved) {
      out.failures.push_back(FailureRecord{cfg, std::string(lp::status_name(r.status)), r.runtime_seconds,
                                           "solver did not reach optimality"});
    } else if (!r.feasibility.pass) {
      std::ostringstream msg;
      msg << "feasibility check failed: relative row residual " << r.feasibility.max_relative_row_residual
          << ", relative bound violation " << r.feasibility.max_relative_bound_violation;
      out.failures.push_back(FailureRecord{cfg, "infeasible_solution", r.runtime_seconds, msg.str()});
    } else {
      out.table.rows.push_back(make_row(cfg, r, out.reference));
    }
  }
  return out;
}

void write_results_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ostringstream o;
  for (std::size_t i = 0; i < std::size(kFixedColumns); ++i) o << (i ? "," : "") << kFixedColumns[i];
  for (const auto& t : table.technologies) o << ",cap:" << t;
  for (const auto& t : table.technologies) o << ",delta:" << t;
  o << "\n";
  for (const auto& r : table.rows) {
    if (r.capacities.size() != table.technologies.size() || r.capacity_deltas.size() != table.technologies.size()) {
      throw InternalError("result row does not match the technology columns");
    }
    o << r.setting << "," << r.strategy << "," << fmt(r.fleet_size) << "," << r.n_profiles << "," << r.sample_id
      << "," << fmt(r.bevs_per_profile) << "," << fmt(r.objective_eur) << "," << fmt(r.cost_delta_eur_per_bev_yr)
      << "," << fmt(r.runtime_s) << "," << r.status;
    for (double v : r.capacities) o << "," << fmt(v);
    for (double v : r.capacity_deltas) o << "," << fmt(v);
    o << "\n";
  }
  write_file(path, o.str());
}

ResultTable read_results_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string source = path.string();
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (columns == 0) {
      const std::size_t fixed = std::size(kFixedColumns);
      if (fields.size() < fixed || (fields.size() - fixed) % 2 != 0) {
        throw ParseError(source, line_no, "unexpected results header");
      }
      for (std::size_t i = 0; i < fixed; ++i) {
        if (fields[i] != kFixedColumns[i]) {
          throw ParseError(source, line_no, "expected column '" + std::string(kFixedColumns[i]) + "'");
        }
      }
      const std::size_t n = (fields.size() - fixed) / 2;
      for (std::size_t i = 0; i < n; ++i) {
        const auto cap = fields[fixed + i];
        const auto delta = fields[fixed + n + i];
        if (cap.substr(0, 4) != "cap:" || delta.substr(0, 6) != "delta:" || cap.substr(4) != delta.substr(6)) {
          throw ParseError(source, line_no, "capacity columns must pair cap:<tech> with delta:<tech>");
        }
        table.technologies.emplace_back(cap.substr(4));
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns) {
      throw ParseError(source, line_no, "expected " + std::to_string(columns) + " fields, found " +
                                            std::to_string(fields.size()));
    }
    auto number = [&](std::size_t i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw ParseError(source, line_no, "field '" + std::string(kFixedColumns[std::min(i, std::size_t{9})]) +
                                              "' is not a number");
      }
      return v;
    };
    auto integer = [&](std::size_t i) {
      const double v = number(i);
      if (v != std::floor(v)) throw ParseError(source, line_no, "expected an integer");
      return static_cast<int>(v);
    };
    ResultRow r;
    r.setting = std::string(fields[0]);
    r.strategy = std::string(fields[1]);
    r.fleet_size = number(2);
    r.n_profiles = integer(3);
    r.sample_id = integer(4);
    r.bevs_per_profile = number(5);
    r.objective_eur = number(6);
    r.cost_delta_eur_per_bev_yr = number(7);
    r.runtime_s = number(8);
    r.status = std::string(fields[9]);
    const std::size_t n = table.technologies.size();
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0, d = 0.0;
      if (!parse_double(fields[10 + i], v) || !parse_double(fields[10 + n + i], d)) {
        throw ParseError(source, line_no, "capacity value is not a number");
      }
      r.capacities.push_back(v);
      r.capacity_deltas.push_back(d);
    }
    table.rows.push_back(std::move(r));
  }
  if (columns == 0) throw ParseError(source, line_no, "missing results header");
  return table;
}

void write_failures_csv(const std::vector<FailureRecord>& failures, const std::filesystem::path& path) {
  std::ostringstream o;
  o << "setting,strategy,fleet_size,n_profiles,sample_id,status,runtime_s,message\n";
  for (const auto& f : failures) {
    o << f.scenario.setting << "," << strategy_name(f.scenario.strategy) << "," << fmt(f.scenario.fleet_size)
      << "," << f.scenario.n_profiles << "," << f.scenario.sample_id << "," << f.status << ","
      << fmt(f.runtime_s) << "," << csv_quote(f.message) << "\n";
  }
  write_file(path, o.str());
}

void write_spikes_csv(const std::vector<SpikeRecord>& spikes, const std::filesystem::path& path) {
  std::ostringstream o;
  o << "setting,strategy,fleet_size,n_profiles,sample_id,threshold_gw,peak_consumption_gw,"
       "consumption_hours_above,peak_charging_gw,charging_hours_above\n";
  for (const auto& s : spikes) {
    o << s.scenario.setting << "," << strategy_name(s.scenario.strategy) << "," << fmt(s.scenario.fleet_size)
      << "," << s.scenario.n_profiles << "," << s.scenario.sample_id << "," << fmt(s.stats.threshold_gw) << ","
      << fmt(s.stats.peak_consumption_gw) << "," << s.stats.consumption_hours_above << ","
      << fmt(s.stats.peak_charging_gw) << "," << s.stats.charging_hours_above << "\n";
  }
  write_file(path, o.str());
}

namespace {

struct GroupStats {
  int count = 0;
  double mean_delta = 0.0;
  double std_delta = 0.0;
  double median_runtime = 0.0;
};

GroupStats group_stats(const std::vector<const ResultRow*>& rows) {
  GroupStats g;
  g.count = static_cast<int>(rows.size());
  if (rows.empty()) return g;
  std::vector<double> runtimes;
  for (const auto* r : rows) {
    g.mean_delta += r->cost_delta_eur_per_bev_yr;
    runtimes.push_back(r->runtime_s);
  }
  g.mean_delta /= g.count;
  if (g.count > 1) {
    double ss = 0.0;
    for (const auto* r : rows) ss += std::pow(r->cost_delta_eur_per_bev_yr - g.mean_delta, 2);
    g.std_delta = std::sqrt(ss / (g.count - 1));
  }
  std::sort(runtimes.begin(), runtimes.end());
  const auto m = runtimes.size() / 2;
  g.median_runtime = runtimes.size() % 2 ? runtimes[m] : 0.5 * (runtimes[m - 1] + runtimes[m]);
  return g;
}

}  // namespace

EmitReport emit_outputs(const ResultTable& table, const std::filesystem::path& dir) {
  if (table.rows.empty()) throw InputError("cannot emit an empty result table");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  EmitReport report;
  write_results_csv(table, dir / "results.csv");
  report.files.push_back("results.csv");

  // Groups keyed by (setting, strategy, fleet, n_profiles) in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> groups;
  for (const auto& r : table.rows) {
    if (r.strategy == "reference") continue;
    const std::string key = r.setting + "," + r.strategy + "," + fmt(r.fleet_size) + "," + std::to_string(r.n_profiles);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::ostringstream summary;
  summary << "setting,strategy,fleet_size,n_profiles,count,mean_cost_delta_eur_per_bev_yr,"
             "std_cost_delta_eur_per_bev_yr,median_runtime_s\n";
  for (const auto& key : order) {
    const auto g = group_stats(groups[key]);
    summary << key << "," << g.count << "," << fmt(g.mean_delta) << "," << fmt(g.std_delta) << ","
            << fmt(g.median_runtime) << "\n";
  }
  write_file(dir / "summary.csv", summary.str());
  report.files.push_back("summary.csv");

  std::vector<std::string> strategies{"smart", "bidirectional"};
  for (const auto& r : table.rows) {
    if (r.strategy != "reference" && std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
      strategies.push_back(r.strategy);
    }
  }
  for (const auto& strategy : strategies) {
    std::vector<const ResultRow*> rows;
    for (const auto& r : table.rows) {
      if (r.strategy == strategy) rows.push_back(&r);
    }
    if (rows.empty()) {
      report.warnings.push_back("no " + strategy + " rows; " + strategy + " plots omitted");
      continue;
    }
    // One series per (setting, fleet).
    std::vector<std::string> labels;
    std::map<std::string, std::vector<const ResultRow*>> by_series;
    for (const auto* r : rows) {
      const std::string label = r->setting + " " + fleet_label(r->fleet_size);
      if (!by_series.count(label)) labels.push_back(label);
      by_series[label].push_back(r);
    }
    auto scatter = [&](const std::string& title, const std::string& xl, const std::string& yl, auto x_of, auto y_of) {
      ScatterPlot p{title, xl, yl, {}, true, true};
      for (const auto& label : labels) {
        ScatterSeries s{label, {}, {}};
        for (const auto* r : by_series[label]) {
          s.x.push_back(x_of(*r));
          s.y.push_back(y_of(*r));
        }
        p.series.push_back(std::move(s));
      }
      return p;
    };
    auto write_plot = [&](const std::string& name, const ScatterPlot& p) {
      const std::string file = name + "_" + strategy + ".svg";
      write_file(dir / file, render_svg(p));
      report.files.push_back(file);
    };
    const auto n_of = [](const ResultRow& r) { return static_cast<double>(r.n_profiles); };
    const auto delta_of = [](const ResultRow& r) { return r.cost_delta_eur_per_bev_yr; };
    write_plot("cost_delta", scatter("Cost difference to reference (" + strategy + ")", "BEV profiles",
                                     "EUR per BEV per year", n_of, delta_of));
    auto runtime = scatter("Runtime (" + strategy + ")", "BEV profiles", "runtime [s]", n_of,
                           [](const ResultRow& r) { return r.runtime_s; });
    runtime.zero_line = false;
    write_plot("runtime", runtime);
    write_plot("cost_delta_vs_bevs_per_profile",
               scatter("Cost difference vs. BEVs per profile (" + strategy + ")", "BEVs per profile",
                       "EUR per BEV per year", [](const ResultRow& r) { return r.bevs_per_profile; }, delta_of));
    ScatterPlot cap{"Capacity difference to reference (" + strategy + ")", "BEV profiles",
                    "GW (storage energy: GWh)", {}, true, true};
    for (std::size_t t = 0; t < table.technologies.size(); ++t) {
      ScatterSeries s{table.technologies[t], {}, {}};
      for (const auto* r : rows) {
        s.x.push_back(r->n_profiles);
        s.y.push_back(r->capacity_deltas[t] / 1000.0);
      }
      cap.series.push_back(std::move(s));
    }
    write_plot("capacity_delta", cap);
  }
  return report;
}

}  // namespace bevpsm
