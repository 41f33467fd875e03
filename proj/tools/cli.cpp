// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cstdlib>
#include <sstream>

#include "CLI11.hpp"
#include "bevpsm/config.hpp"
#include "bevpsm/harness.hpp"
#include "bevpsm/lp_io.hpp"
#include "bevpsm/text_io.hpp"
#include "bevpsm/version.hpp"

namespace bevpsm::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string manifest;
  std::vector<std::string> overrides;
  std::string out;
  std::string pool;
  int verbosity = 0;
  // gen-pool
  int n = -1;
  int threads = 0;
  // run
  int profiles = 0;
  int sample = 0;
  std::string strategy = "smart";
  double fleet = -1.0;
  std::vector<int> ids;
  bool delta = false;
  bool no_model = false;
  // sweep
  bool no_timing = false;
  // report / validate
  std::string in;
  std::string model;
  std::string solution;
  std::string run_dir;
  double tolerance = 1e-6;
};

struct Context {
  const Options& opt;
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
  void log(int level, const std::string& msg) const {
    if (opt.verbosity >= level) err << msg << "\n";
  }
};

fs::path resolve_config_path(const std::string& name) {
  fs::path p(name);
  if (fs::exists(p)) return p;
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kConfigDirEnv); dir && *dir) {
      const fs::path candidate = fs::path(dir) / p;
      if (fs::exists(candidate)) return candidate;
    }
  }
  throw IoError("config file '" + name + "' not found (also looked in $" + std::string(kConfigDirEnv) + ")");
}

// Effective config: file or manifest, then overrides.
struct LoadedConfig {
  Json config;
  fs::path base_dir;
};

LoadedConfig load_effective_config(const Options& opt) {
  LoadedConfig lc;
  if (!opt.manifest.empty()) {
    const Json m = load_config(opt.manifest);
    lc.config = require(m, "config", "manifest");
    const Json& inputs = require(m, "inputs", "manifest");
    lc.base_dir = get_string(inputs, "base_dir", "manifest.inputs");
  } else {
    if (opt.config.empty()) throw ConfigError("--config or --manifest is required");
    const fs::path path = resolve_config_path(opt.config);
    lc.config = load_config(path);
    lc.base_dir = fs::absolute(path).parent_path();
  }
  apply_overrides(lc.config, opt.overrides);
  return lc;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

Json make_manifest(const Context& ctx, const std::string& command, const LoadedConfig& lc) {
  Json m{{"format", "bevpsm-run"},
         {"command", command},
         {"argv", ctx.argv},
         {"versions", build_info()},
         {"config_hash", config_hash(lc.config)},
         {"config", lc.config},
         {"inputs", {{"base_dir", fs::absolute(lc.base_dir).string()}}},
         {"files", Json::array()},
         {"warnings", Json::array()}};
  Json seeds = Json::object();
  if (lc.config.contains("pool") && lc.config.at("pool").contains("base_seed")) {
    seeds["pool_base_seed"] = lc.config.at("pool").at("base_seed");
  }
  if (lc.config.contains("sampling") && lc.config.at("sampling").contains("master_seed")) {
    seeds["sampling_master_seed"] = lc.config.at("sampling").at("master_seed");
  }
  m["seeds"] = seeds;
  return m;
}

void write_manifest(const fs::path& path, const Json& manifest) { write_file(path, manifest.dump(2) + "\n"); }

// Uses an existing pool when its fingerprint matches the config, otherwise
// generates it.
fs::path ensure_pool(const Context& ctx, const Json& config, const fs::path& dir) {
  PoolSettings settings = pool_settings_from_config(config);
  if (fs::exists(dir / "manifest.json")) {
    const Json existing = load_config(dir / "manifest.json");
    const std::string hash = get_string(existing, "config_hash", "pool manifest", "");
    if (hash != settings.config_hash) {
      throw ConfigError("pool at " + dir.string() + " was generated from a different config (" + hash + " vs " +
                        settings.config_hash + ")");
    }
    ctx.log(1, "using pool " + dir.string());
    return dir;
  }
  ctx.log(1, "generating pool of " + std::to_string(settings.size) + " profiles in " + dir.string());
  save_pool(build_pool(settings), dir);
  return dir;
}

int cmd_gen_pool(const Context& ctx) {
  const auto& opt = ctx.opt;
  LoadedConfig lc = load_effective_config(opt);
  if (opt.n > 0) lc.config["pool"]["size"] = opt.n;
  if (opt.threads > 0) lc.config["pool"]["threads"] = opt.threads;
  const PoolSettings settings = pool_settings_from_config(lc.config);
  fs::path dir = opt.out;
  if (dir.empty()) dir = get_string(lc.config.at("pool"), "directory", "pool", "pool");
  ensure_directory(dir);
  const auto pool = build_pool(settings);
  save_pool(pool, dir);
  Json manifest = load_config(dir / "manifest.json");
  Json provenance = make_manifest(ctx, "gen-pool", lc);
  provenance.erase("format");
  manifest["provenance"] = provenance;
  write_manifest(dir / "manifest.json", manifest);
  ctx.out << "wrote " << pool.size() << " profiles (" << settings.horizon_steps << " steps) to " << dir.string()
          << "\n";
  return kOk;
}

int cmd_sample(const Context& ctx) {
  const auto& opt = ctx.opt;
  const LoadedConfig lc = load_effective_config(opt);
  const fs::path out = opt.out.empty() ? fs::path("samples") : fs::path(opt.out);
  ensure_directory(out);
  const ProfilePool pool = opt.pool.empty() ? build_pool(pool_settings_from_config(lc.config))
                                            : load_pool(ensure_pool(ctx, lc.config, opt.pool));
  const ExperimentSpec spec = experiment_from_config(lc.config);
  const auto samples = draw_experiment_samples(spec, static_cast<int>(pool.size()));
  write_sample_csv(samples, out / "samples.csv");
  std::vector<bool> kept(samples.size(), true);
  if (std::isfinite(spec.trim_threshold)) {
    for (std::size_t i : trim_samples(samples, pool, spec.trim_threshold).removed) kept[i] = false;
  }
  const double fleet = spec.fleet_sizes.front();
  std::ostringstream stats;
  stats << "n_profiles,sample_id,fleet_size,total_battery_gwh,annual_consumption_twh,peak_scaled_consumption_gw,"
           "mean_battery_kwh,mean_annual_consumption_kwh,kept\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Sample s = samples[i];
    assign_fleet(s, fleet);
    const auto a = aggregate_characteristics(s, pool);
    stats << s.n_profiles() << "," << s.sample_id << "," << format_double(fleet) << ","
          << format_double(a.total_battery_gwh) << "," << format_double(a.annual_consumption_twh) << ","
          << format_double(a.peak_scaled_consumption_gw) << "," << format_double(a.mean_battery_kwh) << ","
          << format_double(a.mean_annual_consumption_kwh) << "," << (kept[i] ? 1 : 0) << "\n";
  }
  write_file(out / "sample_stats.csv", stats.str());
  Json manifest = make_manifest(ctx, "sample", lc);
  manifest["files"] = {"samples.csv", "sample_stats.csv"};
  write_manifest(out / "manifest.json", manifest);
  ctx.out << "wrote " << samples.size() << " samples to " << (out / "samples.csv").string() << "\n";
  return kOk;
}

Json result_json(const ScenarioConfig& cfg, const ScenarioResult& r) {
  Json caps = Json::object();
  for (const auto& [k, v] : r.capacities) caps[k] = v;
  return Json{{"setting", cfg.setting},
              {"strategy", strategy_name(cfg.strategy)},
              {"fleet_size", cfg.fleet_size},
              {"n_profiles", cfg.n_profiles},
              {"sample_id", cfg.sample_id},
              {"profile_ids", cfg.profile_ids},
              {"status", lp::status_name(r.status)},
              {"objective_eur", r.objective},
              {"horizon_hours", r.horizon},
              {"runtime_s", r.runtime_seconds},
              {"solve_s", r.solve_seconds},
              {"iterations", r.iterations},
              {"capacities", caps},
              {"feasibility",
               {{"pass", r.feasibility.pass},
                {"max_relative_row_residual", r.feasibility.max_relative_row_residual},
                {"max_relative_bound_violation", r.feasibility.max_relative_bound_violation}}}};
}

void write_dispatch_csv(const ScenarioResult& r, const fs::path& path) {
  std::ostringstream o;
  o << "hour";
  for (const auto& [k, v] : r.dispatch) o << "," << k;
  const bool bev = !r.bev_charge.empty() &&
                   std::any_of(r.bev_charge.begin(), r.bev_charge.end(), [](double x) { return x != 0.0; });
  if (bev) o << ",bev/charge,bev/discharge";
  o << "\n";
  for (int t = 0; t < r.horizon; ++t) {
    o << t;
    for (const auto& [k, v] : r.dispatch) o << "," << format_double(v[static_cast<std::size_t>(t)]);
    if (bev) {
      o << "," << format_double(r.bev_charge[static_cast<std::size_t>(t)]) << ","
        << format_double(r.bev_discharge[static_cast<std::size_t>(t)]);
    }
    o << "\n";
  }
  write_file(path, o.str());
}

int cmd_run(const Context& ctx) {
  const auto& opt = ctx.opt;
  const LoadedConfig lc = load_effective_config(opt);
  const ExperimentSpec spec = experiment_from_config(lc.config);
  const fs::path out = opt.out.empty() ? fs::path("run") : fs::path(opt.out);
  ensure_directory(out);
  ScenarioConfig cfg{spec.setting, Strategy::kNone, 0.0, 0, 0, {}};
  RunInputs inputs{lc.config, lc.base_dir, {}, spec.time_limit_s};
  const bool reference = opt.profiles == 0 && opt.ids.empty();
  if (!reference) {
    cfg.strategy = parse_strategy(opt.strategy);
    if (cfg.strategy == Strategy::kNone) throw InputError("--strategy reference needs --profiles 0");
    cfg.fleet_size = opt.fleet >= 0.0 ? opt.fleet : spec.fleet_sizes.front();
    inputs.pool_dir = ensure_pool(ctx, lc.config, opt.pool.empty() ? out / "pool" : fs::path(opt.pool));
    if (!opt.ids.empty()) {
      cfg.profile_ids = opt.ids;
      cfg.sample_id = opt.sample;
    } else {
      const int pool_size = pool_settings_from_config(lc.config).size;
      if (opt.profiles < 0 || opt.profiles > pool_size) {
        throw InputError("--profiles must be in [0, " + std::to_string(pool_size) + "]");
      }
      const auto set = draw_sample_set(pool_size, opt.profiles, opt.sample + 1, spec.master_seed);
      cfg.profile_ids = set.back().profile_ids;
      cfg.sample_id = opt.sample;
    }
    cfg.n_profiles = static_cast<int>(cfg.profile_ids.size());
  }
  RunArtifacts artifacts;
  const ScenarioResult r = run_scenario(cfg, inputs, &artifacts);
  Json result = result_json(cfg, r);
  if (!reference && r.status == lp::SolveStatus::kOptimal) {
    const ProfilePool pool = load_pool(inputs.pool_dir);
    Sample s;
    s.profile_ids = cfg.profile_ids;
    const auto spikes = spike_statistics(s, pool, cfg.fleet_size, spike_threshold_gw(spec, cfg.fleet_size),
                                         &r.bev_charge);
    result["spikes"] = {{"threshold_gw", spikes.threshold_gw},
                        {"peak_consumption_gw", spikes.peak_consumption_gw},
                        {"consumption_hours_above", spikes.consumption_hours_above},
                        {"peak_charging_gw", spikes.peak_charging_gw},
                        {"charging_hours_above", spikes.charging_hours_above}};
    if (opt.delta) {
      const ScenarioResult ref = run_scenario(ScenarioConfig{spec.setting, Strategy::kNone, 0.0, 0, 0, {}}, inputs);
      if (ref.status == lp::SolveStatus::kOptimal) {
        result["reference_objective_eur"] = ref.objective;
        result["cost_delta_eur_per_bev_yr"] = compute_cost_delta(r, ref, cfg.fleet_size);
        Json deltas = Json::object();
        for (const auto& [k, v] : compute_capacity_delta(r, ref)) deltas[k] = v;
        result["capacity_deltas"] = deltas;
      }
    }
  }
  Json manifest = make_manifest(ctx, "run", lc);
  manifest["files"] = {"result.json"};
  write_file(out / "result.json", result.dump(2) + "\n");
  if (r.status == lp::SolveStatus::kOptimal) {
    write_dispatch_csv(r, out / "dispatch.csv");
    manifest["files"].push_back("dispatch.csv");
  }
  if (!opt.no_model) {
    lp::write_mps(artifacts.model.lp, out / "model.mps");
    lp::write_solution(artifacts.model.lp, artifacts.raw, out / "solution.sol");
    manifest["files"].push_back("model.mps");
    manifest["files"].push_back("solution.sol");
  }
  if (!inputs.pool_dir.empty()) manifest["inputs"]["pool_dir"] = fs::absolute(inputs.pool_dir).string();
  write_manifest(out / "manifest.json", manifest);
  ctx.out << cfg.key() << " " << lp::status_name(r.status) << " objective " << format_double(r.objective)
          << " runtime " << r.runtime_seconds << " s\n";
  return r.status == lp::SolveStatus::kOptimal ? kOk : kSolver;
}

int cmd_sweep(const Context& ctx) {
  const auto& opt = ctx.opt;
  const LoadedConfig lc = load_effective_config(opt);
  ExperimentSpec spec = experiment_from_config(lc.config);
  if (opt.threads > 0) spec.threads = opt.threads;
  if (opt.no_timing) spec.timing = false;
  const fs::path out = opt.out.empty() ? fs::path("sweep") : fs::path(opt.out);
  ensure_directory(out);
  RunInputs inputs{lc.config, lc.base_dir, ensure_pool(ctx, lc.config, opt.pool.empty() ? out / "pool" : fs::path(opt.pool)),
                   spec.time_limit_s};
  const auto result = sweep(spec, inputs, [&](const ScenarioConfig& cfg, const ScenarioResult& r) {
    std::ostringstream line;
    line << cfg.key() << " " << lp::status_name(r.status) << " " << r.runtime_seconds << " s";
    ctx.log(1, line.str());
  });
  write_results_csv(result.table, out / "results.csv");
  write_failures_csv(result.failures, out / "failures.csv");
  write_spikes_csv(result.spikes, out / "spikes.csv");
  write_sample_csv(result.samples, out / "samples.csv");
  Json manifest = make_manifest(ctx, "sweep", lc);
  manifest["files"] = {"results.csv", "failures.csv", "spikes.csv", "samples.csv"};
  if (!result.removed.empty()) {
    write_sample_csv(result.removed, out / "trimmed.csv");
    manifest["files"].push_back("trimmed.csv");
  }
  manifest["inputs"]["pool_dir"] = fs::absolute(inputs.pool_dir).string();
  manifest["reference_objective_eur"] = result.reference.objective;
  manifest["counts"] = {{"scenarios", result.table.rows.size() - 1 + result.failures.size()},
                        {"rows", result.table.rows.size()},
                        {"failures", result.failures.size()},
                        {"trimmed_samples", result.removed.size()}};
  for (const auto& f : result.failures) {
    manifest["warnings"].push_back("scenario " + f.scenario.key() + " excluded: " + f.status);
  }
  write_manifest(out / "manifest.json", manifest);
  ctx.out << "sweep " << spec.setting << ": " << result.table.rows.size() << " rows, " << result.failures.size()
          << " failures -> " << (out / "results.csv").string() << "\n";
  return kOk;
}

int cmd_report(const Context& ctx) {
  const auto& opt = ctx.opt;
  const fs::path in = opt.in.empty() ? fs::path(".") : fs::path(opt.in);
  const fs::path out = opt.out.empty() ? in : fs::path(opt.out);
  if (!fs::exists(in / "results.csv")) throw IoError("no results.csv in " + in.string());
  const ResultTable table = read_results_csv(in / "results.csv");
  ensure_directory(out);
  const EmitReport report = emit_outputs(table, out);
  Json manifest{{"format", "bevpsm-report"},
                {"command", "report"},
                {"argv", ctx.argv},
                {"versions", build_info()},
                {"inputs", {{"results", fs::absolute(in / "results.csv").string()}}},
                {"files", report.files},
                {"warnings", report.warnings}};
  if (fs::exists(in / "manifest.json")) {
    const Json sweep_manifest = load_config(in / "manifest.json");
    if (sweep_manifest.contains("config_hash")) manifest["config_hash"] = sweep_manifest["config_hash"];
  }
  write_manifest(out / "report_manifest.json", manifest);
  for (const auto& w : report.warnings) ctx.err << "warning: " << w << "\n";
  ctx.out << "wrote " << report.files.size() << " files to " << out.string() << "\n";
  return kOk;
}

int cmd_validate(const Context& ctx) {
  const auto& opt = ctx.opt;
  fs::path model = opt.model, solution = opt.solution;
  if (!opt.run_dir.empty()) {
    if (model.empty()) model = fs::path(opt.run_dir) / "model.mps";
    if (solution.empty()) solution = fs::path(opt.run_dir) / "solution.sol";
  }
  if (model.empty() || solution.empty()) throw ConfigError("validate needs --run or both --model and --solution");
  const lp::LpProblem problem = lp::read_mps(model);
  const lp::RawSolution raw = lp::read_external_solution(solution, problem);
  const auto report = lp::validate_solution(problem, raw.x, opt.tolerance);
  Json j{{"model", model.string()},
         {"solution", solution.string()},
         {"status", lp::status_name(raw.status)},
         {"objective", report.objective},
         {"tolerance", report.tolerance},
         {"max_bound_violation", report.max_bound_violation},
         {"max_row_residual", report.max_row_residual},
         {"max_relative_bound_violation", report.max_relative_bound_violation},
         {"max_relative_row_residual", report.max_relative_row_residual},
         {"worst_variable", report.worst_variable >= 0 ? problem.variable(report.worst_variable).name : ""},
         {"worst_row", report.worst_row >= 0 ? problem.row(report.worst_row).name : ""},
         {"pass", report.pass}};
  ctx.out << j.dump(2) << "\n";
  return report.pass ? kOk : kValidation;
}

void error_record(std::ostream& err, const char* category, int code, const std::string& message) {
  err << Json{{"error", category}, {"exit_code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return kConfig;
    case ErrorCategory::kInput: return kInput;
    case ErrorCategory::kGeneration: return kGeneration;
    case ErrorCategory::kIo: return kIo;
    case ErrorCategory::kParse: return kParse;
    case ErrorCategory::kInternal: return kInternal;
  }
  return kInternal;
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"bevpsm: BEV profile sampling and power-sector model experiments", "bevpsm"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-v,--verbose", opt.verbosity, "Progress messages on stderr (repeat for more)");

  auto add_config = [&](CLI::App* sub, bool manifest) {
    sub->add_option("-c,--config", opt.config, "Config file (relative names also searched in $BEVPSM_CONFIG_DIR)");
    if (manifest) sub->add_option("--manifest", opt.manifest, "Re-run from a manifest.json written by an earlier run");
    sub->add_option("-s,--set", opt.overrides, "Override a config key: path.to.key=value (repeatable)");
    sub->add_option("-o,--out", opt.out, "Output directory");
  };

  auto* gen = app.add_subcommand("gen-pool", "Generate the BEV profile pool");
  add_config(gen, false);
  gen->add_option("-n,--n", opt.n, "Number of profiles (overrides pool.size)")->check(CLI::PositiveNumber);
  gen->add_option("--threads", opt.threads, "Generation threads")->check(CLI::PositiveNumber);

  auto* smp = app.add_subcommand("sample", "Draw the sample sets and their aggregate characteristics");
  add_config(smp, true);
  smp->add_option("--pool", opt.pool, "Pool directory (generated in memory when omitted)");

  auto* run = app.add_subcommand("run", "Solve one reference or BEV scenario");
  add_config(run, true);
  run->add_option("--pool", opt.pool, "Pool directory (default <out>/pool, generated when missing)");
  run->add_option("-p,--profiles", opt.profiles, "Profiles in the sample; 0 runs the reference")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--sample", opt.sample, "Sample index within the set for this profile count")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--ids", opt.ids, "Explicit profile ids instead of a drawn sample")->delimiter(',');
  run->add_option("--strategy", opt.strategy, "smart or bidirectional");
  run->add_option("--fleet", opt.fleet, "Fleet size (default: first of scenario.fleet_sizes)");
  run->add_flag("--delta", opt.delta, "Also solve the reference and report deltas");
  run->add_flag("--no-model", opt.no_model, "Do not write model.mps and solution.sol");

  auto* swp = app.add_subcommand("sweep", "Reference plus every (fleet, profiles, sample, strategy) scenario");
  add_config(swp, true);
  swp->add_option("--pool", opt.pool, "Pool directory (default <out>/pool, generated when missing)");
  swp->add_option("--threads", opt.threads, "Concurrent runs when timing is off")->check(CLI::PositiveNumber);
  swp->add_flag("--no-timing", opt.no_timing, "Throughput mode: allow concurrent runs");

  auto* rep = app.add_subcommand("report", "Summary CSV and SVG plots from a sweep's results.csv");
  rep->add_option("-i,--in", opt.in, "Sweep output directory");
  rep->add_option("-o,--out", opt.out, "Report directory (default: the input directory)");

  auto* val = app.add_subcommand("validate", "Check a stored solution against its stored model");
  val->add_option("--run", opt.run_dir, "Run directory with model.mps and solution.sol");
  val->add_option("--model", opt.model, "MPS model file");
  val->add_option("--solution", opt.solution, "Solution file (name value lines)");
  val->add_option("--tolerance", opt.tolerance, "Relative residual tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    error_record(err, "usage", kUsage, e.what());
    return kUsage;
  }

  Context ctx{opt, std::vector<std::string>(argv, argv + argc), out, err};
  try {
    if (*gen) return cmd_gen_pool(ctx);
    if (*smp) return cmd_sample(ctx);
    if (*run) return cmd_run(ctx);
    if (*swp) return cmd_sweep(ctx);
    if (*rep) return cmd_report(ctx);
    if (*val) return cmd_validate(ctx);
  } catch (const Error& e) {
    const int code = exit_code_for(e.category());
    error_record(err, category_name(e.category()), code, e.what());
    return code;
  } catch (const std::exception& e) {
    error_record(err, "internal", kInternal, e.what());
    return kInternal;
  }
  return kUsage;
}

}  // namespace bevpsm::cli
