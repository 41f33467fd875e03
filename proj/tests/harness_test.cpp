// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "bevpsm/errors.hpp"
#include "bevpsm/harness.hpp"
#include "bevpsm/svg_plot.hpp"
#include "bevpsm/text_io.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bevpsm;
namespace fs = std::filesystem;

namespace {

struct ToySetup {
  Json config;
  fs::path dir;
  RunInputs inputs;
  ProfilePool pool;
};

ToySetup toy_setup(const std::string& name, Json config) {
  ToySetup s;
  s.config = std::move(config);
  s.dir = testing::scratch_dir(name);
  s.pool = build_pool(pool_settings_from_config(s.config));
  save_pool(s.pool, s.dir / "pool");
  s.inputs = RunInputs{s.config, s.dir, s.dir / "pool", 60.0};
  return s;
}

ScenarioResult with_objective(double objective, int horizon) {
  ScenarioResult r;
  r.status = lp::SolveStatus::kOptimal;
  r.objective = objective;
  r.horizon = horizon;
  return r;
}

std::map<std::string, std::vector<const ResultRow*>> rows_by_strategy(const ResultTable& t) {
  std::map<std::string, std::vector<const ResultRow*>> m;
  for (const auto& r : t.rows) m[r.strategy].push_back(&r);
  return m;
}

}  // namespace

TEST_CASE("cost delta: sign, annualization and the per-BEV magnitudes") {
  const auto ref = with_objective(1e9, 8760);
  CHECK(compute_cost_delta(with_objective(1e9, 8760), ref, 15e6) == 0.0);
  CHECK(compute_cost_delta(with_objective(1e9 + 750e6, 8760), ref, 15e6) == doctest::Approx(50.0));
  CHECK(compute_cost_delta(with_objective(1e9 - 1500e6, 8760), ref, 15e6) == doctest::Approx(-100.0));
  // A week costs 168/8760 of the year; the delta is scaled back up.
  const auto week_ref = with_objective(1e7, 168);
  CHECK(compute_cost_delta(with_objective(1e7 + 750e6 * 168 / 8760, 168), week_ref, 15e6) ==
        doctest::Approx(50.0));
  CHECK_THROWS_AS(compute_cost_delta(ref, ref, 0.0), InputError);
  CHECK_THROWS_AS(compute_cost_delta(week_ref, ref, 1.0), InputError);
}

TEST_CASE("capacity delta: elementwise, storage power and energy, mismatches rejected") {
  auto ref = with_objective(0, 24);
  ref.capacities = {{"DE/solar", 50000}, {"DE/li-ion/power", 10000}, {"DE/li-ion/energy", 40000}};
  auto same = ref;
  for (const auto& [k, v] : compute_capacity_delta(same, ref)) CHECK(v == 0.0);
  auto gone = ref;
  gone.capacities[1].second = 0.0;
  gone.capacities[2].second = 0.0;
  const auto d = compute_capacity_delta(gone, ref);
  CHECK(d[1].first == "DE/li-ion/power");
  CHECK(d[1].second == -10000.0);
  CHECK(d[2].second == -40000.0);
  auto renamed = ref;
  renamed.capacities[0].first = "DE/wind";
  CHECK_THROWS_AS(compute_capacity_delta(renamed, ref), InputError);
  auto shorter = ref;
  shorter.capacities.pop_back();
  CHECK_THROWS_AS(compute_capacity_delta(shorter, ref), InputError);
}

TEST_CASE("spike statistics: zero profiles, the 75 GW hour, linear threshold") {
  ProfilePool pool;
  pool.horizon_steps = 8;
  for (int i = 0; i < 5; ++i) {
    BevProfile p;
    p.id = i;
    p.vehicle = VehicleModel{"v", 50, 0.16, 11, 50};
    p.consumption = Series{SeriesKind::kConsumption, 15, std::vector<double>(8, 0.0)};
    p.availability = Series{SeriesKind::kAvailability, 15, std::vector<double>(8, 11.0)};
    pool.profiles.push_back(p);
  }
  Sample s;
  s.profile_ids = {0, 1, 2, 3, 4};
  auto zero = spike_statistics(s, pool, 15e6, 100.0);
  CHECK(zero.peak_consumption_gw == 0.0);
  CHECK(zero.consumption_hours_above == 0);

  // 25 kWh in the second hour of profile 2; 3,000,000 vehicles per profile.
  for (int k = 4; k < 8; ++k) pool.profiles[2].consumption.values[static_cast<std::size_t>(k)] = 6.25;
  auto one = spike_statistics(s, pool, 15e6, 70.0);
  CHECK(one.peak_consumption_gw == doctest::Approx(75.0));
  CHECK(one.consumption_hours_above == 1);
  CHECK(spike_statistics(s, pool, 15e6, 80.0).consumption_hours_above == 0);
  const std::vector<double> charging{1000.0, 120000.0};
  auto ch = spike_statistics(s, pool, 15e6, 100.0, &charging);
  CHECK(ch.peak_charging_gw == doctest::Approx(120.0));
  CHECK(ch.charging_hours_above == 1);

  ExperimentSpec spec;
  CHECK(spike_threshold_gw(spec, 15e6) == doctest::Approx(100.0));
  CHECK(spike_threshold_gw(spec, 5e6) == doctest::Approx(100.0 / 3));
}

TEST_CASE("experiment config: defaults, full grid and errors") {
  const auto full = experiment_from_config(Json::object());
  CHECK(full.sample_sizes.size() == 24);
  CHECK(full.sample_sizes.front() == 5);
  CHECK(full.sample_sizes.back() == 120);
  CHECK(full.samples_per_size == 10);
  CHECK(full.time_limit_s == 600.0);
  CHECK(std::isinf(full.trim_threshold));
  std::vector<Sample> samples;
  for (int n = 5; n <= 120; n += 5) {
    for (int k = 0; k < 10; ++k) {
      Sample s;
      s.sample_id = k;
      s.profile_ids.assign(static_cast<std::size_t>(n), 0);
      samples.push_back(s);
    }
  }
  CHECK(sweep_grid(full, samples).size() == 480);

  const auto desk = experiment_from_config(load_config(testing::config_path("desk.json")));
  CHECK(desk.sample_sizes == std::vector<int>{2, 5, 10, 20});
  CHECK(desk.strategies.size() == 2);

  Json bad{{"scenario", {{"strategies", {"smart", "v2h"}}}}};
  CHECK_THROWS_AS(experiment_from_config(bad), ConfigError);
  bad = Json{{"scenario", {{"strategies", {"reference"}}}}};
  CHECK_THROWS_AS(experiment_from_config(bad), ConfigError);
  bad = Json{{"scenario", {{"fleet_sizes", {0}}}}};
  CHECK_THROWS_AS(experiment_from_config(bad), ConfigError);
  bad = Json{{"sampling", {{"sizes", {2.5}}}}};
  CHECK_THROWS_AS(experiment_from_config(bad), ConfigError);
  bad = Json{{"scenario", {{"setting", "a,b"}}}};
  CHECK_THROWS_AS(experiment_from_config(bad), ConfigError);
}

TEST_CASE("run_scenario: reference toy, determinism, strategy ordering, runtime") {
  auto toy = toy_setup("harness_run", testing::toy_config());
  const ScenarioConfig ref_cfg{"toy", Strategy::kNone, 0, 0, 0, {}};
  const auto a = run_scenario(ref_cfg, toy.inputs);
  const auto b = run_scenario(ref_cfg, toy.inputs);
  CHECK(a.status == lp::SolveStatus::kOptimal);
  CHECK(a.feasibility.pass);
  CHECK(a.runtime_seconds > 0.0);
  CHECK(a.runtime_seconds >= a.solve_seconds);
  CHECK(a.objective == b.objective);
  CHECK(a.capacities == b.capacities);

  ScenarioConfig smart{"toy", Strategy::kSmart, 5000, 3, 0, {1, 4, 7}};
  ScenarioConfig bidi = smart;
  bidi.strategy = Strategy::kBidirectional;
  const auto rs = run_scenario(smart, toy.inputs);
  const auto rb = run_scenario(bidi, toy.inputs);
  REQUIRE(rs.status == lp::SolveStatus::kOptimal);
  REQUIRE(rb.status == lp::SolveStatus::kOptimal);
  CHECK(rb.objective <= rs.objective * (1 + 1e-9));
  CHECK(compute_cost_delta(rs, a, 5000) > 0.0);

  RunArtifacts art;
  run_scenario(smart, toy.inputs, &art);
  CHECK(art.model.bev_profiles == 3);
  CHECK(art.raw.x.size() == static_cast<std::size_t>(art.model.lp.num_variables()));

  ScenarioConfig empty = smart;
  empty.profile_ids.clear();
  CHECK_THROWS_AS(run_scenario(empty, toy.inputs), InputError);
  RunInputs missing = toy.inputs;
  missing.pool_dir = toy.dir / "nope";
  CHECK_THROWS_AS(run_scenario(smart, missing), IoError);
}

TEST_CASE("sweep: row count, shared samples, deltas, threads, failures") {
  auto toy = toy_setup("harness_sweep", testing::toy_config());
  const auto spec = experiment_from_config(toy.config);
  const auto out = sweep(spec, toy.inputs);
  CHECK(out.failures.empty());
  CHECK(out.table.rows.size() == 1 + 2 * 3 * 2);
  CHECK(out.table.rows.front().strategy == "reference");
  CHECK(out.table.rows.front().cost_delta_eur_per_bev_yr == 0.0);
  for (double d : out.table.rows.front().capacity_deltas) CHECK(d == 0.0);
  CHECK(out.samples.size() == 6);
  CHECK(out.spikes.size() == 12);

  // Strategies share sample draws: grid entries come in (smart, bidirectional) pairs.
  const auto grid = sweep_grid(spec, out.samples);
  for (std::size_t i = 0; i + 1 < grid.size(); i += 2) {
    CHECK(grid[i].strategy == Strategy::kSmart);
    CHECK(grid[i + 1].strategy == Strategy::kBidirectional);
    CHECK(grid[i].profile_ids == grid[i + 1].profile_ids);
    CHECK(grid[i].sample_id == grid[i + 1].sample_id);
  }
  for (std::size_t i = 1; i + 1 < out.table.rows.size(); i += 2) {
    const auto& s = out.table.rows[i];
    const auto& b = out.table.rows[i + 1];
    CHECK(s.strategy == "smart");
    CHECK(b.strategy == "bidirectional");
    CHECK(b.objective_eur <= s.objective_eur * (1 + 1e-9));
    CHECK(s.bevs_per_profile == 5000.0 / s.n_profiles);
  }

  // Throughput mode reproduces everything except runtimes.
  auto parallel = spec;
  parallel.timing = false;
  parallel.threads = 3;
  auto again = sweep(parallel, toy.inputs).table;
  auto base = out.table;
  for (auto* t : {&again, &base}) {
    for (auto& r : t->rows) r.runtime_s = 0.0;
  }
  CHECK(again == base);

  // A capped gas fleet cannot serve the extra BEV load: scenarios fail, the sweep continues.
  auto capped = toy_setup("harness_sweep_capped", testing::toy_config(0.0));
  capped.inputs.config["system"]["nodes"][0]["load"] = 0.0;
  capped.inputs.config["system"]["nodes"][0]["generators"][0]["max_mw"] = 0.0;
  const auto failed = sweep(experiment_from_config(capped.config), capped.inputs);
  CHECK(failed.table.rows.size() == 1);
  CHECK(failed.failures.size() == 12);
  CHECK(failed.failures.front().status == "infeasible");
}

TEST_CASE("trim in a sweep removes samples before any run") {
  auto cfg = testing::toy_config();
  cfg["sampling"]["trim_threshold"] = 0.0;
  auto toy = toy_setup("harness_trim", cfg);
  const auto out = sweep(experiment_from_config(toy.config), toy.inputs);
  CHECK(out.removed.size() == out.samples.size());
  CHECK(out.table.rows.size() == 1);
}

TEST_CASE("results CSV: exact round trip, schema, independent delta recomputation") {
  auto toy = toy_setup("harness_csv", testing::toy_config());
  const auto out = sweep(experiment_from_config(toy.config), toy.inputs);
  const auto path = toy.dir / "results.csv";
  write_results_csv(out.table, path);
  const auto back = read_results_csv(path);
  CHECK(back == out.table);

  const std::string text = read_file(path);
  const auto header = std::string(text.substr(0, text.find('\n')));
  CHECK(header.rfind("setting,strategy,fleet_size,n_profiles,sample_id,bevs_per_profile,objective_eur,"
                     "cost_delta_eur_per_bev_yr,runtime_s,status,cap:DE/solar",
                     0) == 0);

  // Deltas from the file alone: cap column minus the reference row's cap column.
  std::vector<std::vector<std::string>> cells;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    for (auto f : split(line, ',')) row.emplace_back(f);
    cells.push_back(row);
  }
  const auto& head = cells[0];
  const auto& ref = cells[1];
  REQUIRE(ref[1] == "reference");
  for (std::size_t c = 0; c < head.size(); ++c) {
    if (head[c].rfind("cap:", 0) != 0) continue;
    const auto dc = static_cast<std::size_t>(std::find(head.begin(), head.end(), "delta:" + head[c].substr(4)) - head.begin());
    REQUIRE(dc < head.size());
    for (std::size_t r = 2; r < cells.size(); ++r) {
      double cap = 0, base = 0, delta = 0;
      REQUIRE(parse_double(cells[r][c], cap));
      REQUIRE(parse_double(ref[c], base));
      REQUIRE(parse_double(cells[r][dc], delta));
      CHECK(cap - base == delta);
    }
  }

  write_file(toy.dir / "broken.csv", "setting,strategy\nx,y\n");
  CHECK_THROWS_AS(read_results_csv(toy.dir / "broken.csv"), ParseError);
  auto lines = text;
  lines += "toy,smart,1,2\n";
  write_file(toy.dir / "short.csv", lines);
  CHECK_THROWS_AS(read_results_csv(toy.dir / "short.csv"), ParseError);
}

TEST_CASE("emit_outputs: file names, point counts, empty strategy warning") {
  auto toy = toy_setup("harness_emit", testing::toy_config());
  auto spec = experiment_from_config(toy.config);
  spec.strategies = {Strategy::kSmart};
  const auto out = sweep(spec, toy.inputs);
  const auto dir = toy.dir / "report";
  const auto report = emit_outputs(out.table, dir);
  CHECK(read_results_csv(dir / "results.csv") == out.table);
  for (const char* f : {"results.csv", "summary.csv", "cost_delta_smart.svg", "capacity_delta_smart.svg",
                        "runtime_smart.svg", "cost_delta_vs_bevs_per_profile_smart.svg"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  CHECK_FALSE(fs::exists(dir / "cost_delta_bidirectional.svg"));
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("bidirectional") != std::string::npos);

  const auto smart_rows = rows_by_strategy(out.table)["smart"].size();
  CHECK(count_svg_points(read_file(dir / "cost_delta_smart.svg")) == smart_rows);
  CHECK(count_svg_points(read_file(dir / "runtime_smart.svg")) == smart_rows);
  CHECK(count_svg_points(read_file(dir / "capacity_delta_smart.svg")) == smart_rows * out.table.technologies.size());
  const std::string svg = read_file(dir / "cost_delta_smart.svg");
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
  CHECK(svg.find("href") == std::string::npos);

  const std::string summary = read_file(dir / "summary.csv");
  CHECK(summary.find("toy,smart,5000,2,3,") != std::string::npos);
  CHECK(summary.find("toy,smart,5000,4,3,") != std::string::npos);

  CHECK_THROWS_AS(emit_outputs(ResultTable{}, dir), InputError);
}

TEST_CASE("svg: ticks cover the data") {
  const auto t = nice_ticks(0.3, 9.7);
  CHECK(t.front() <= 0.3);
  CHECK(t.back() >= 9.7);
  CHECK(nice_ticks(5.0, 5.0).size() >= 2);
  ScatterPlot p{"t", "x", "y", {{"a", {1, 2, 3}, {1, 4, 9}}, {"b", {1}, {2}}}, true, false};
  CHECK(count_svg_points(render_svg(p)) == 4);
}
