// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bevpsm/config.hpp"
#include "bevpsm/errors.hpp"
#include "bevpsm/harness.hpp"
#include "bevpsm/lp_io.hpp"
#include "bevpsm/simplex.hpp"
#include "bevpsm/version.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace bevpsm;

namespace {

Json result_json(const ScenarioConfig& cfg, const ScenarioResult& r) {
  Json caps = Json::object();
  for (const auto& [k, v] : r.capacities) caps[k] = v;
  return Json{{"key", cfg.key()},
              {"status", lp::status_name(r.status)},
              {"objective_eur", r.objective},
              {"horizon_hours", r.horizon},
              {"runtime_s", r.runtime_seconds},
              {"iterations", r.iterations},
              {"capacities", caps},
              {"bev_charge_mw", r.bev_charge},
              {"bev_discharge_mw", r.bev_discharge},
              {"feasible", r.feasibility.pass},
              {"max_relative_row_residual", r.feasibility.max_relative_row_residual}};
}

std::string load_config_json(const fs::path& path, const std::vector<std::string>& overrides) {
  Json cfg = load_config(path);
  apply_overrides(cfg, overrides);
  return cfg.dump();
}

int generate_pool(const std::string& config, const fs::path& dir) {
  const auto settings = pool_settings_from_config(Json::parse(config));
  ProfilePool pool;
  {
    py::gil_scoped_release release;
    pool = build_pool(settings);
    save_pool(pool, dir);
  }
  return static_cast<int>(pool.size());
}

std::vector<std::vector<int>> draw_samples(const std::string& config, int pool_size) {
  std::vector<std::vector<int>> out;
  for (const auto& s : draw_experiment_samples(experiment_from_config(Json::parse(config)), pool_size)) {
    out.push_back(s.profile_ids);
  }
  return out;
}

std::string run(const std::string& config, const fs::path& base_dir, const fs::path& pool_dir,
                const std::string& strategy, double fleet, const std::vector<int>& profile_ids, int sample_id) {
  const Json cfg = Json::parse(config);
  const auto spec = experiment_from_config(cfg);
  const ScenarioConfig sc{spec.setting, parse_strategy(strategy), fleet, static_cast<int>(profile_ids.size()),
                          sample_id, profile_ids};
  const RunInputs inputs{cfg, base_dir, pool_dir, spec.time_limit_s};
  ScenarioResult r;
  {
    py::gil_scoped_release release;
    r = run_scenario(sc, inputs);
  }
  return result_json(sc, r).dump();
}

std::string run_sweep(const std::string& config, const fs::path& base_dir, const fs::path& pool_dir,
                      const fs::path& out_dir) {
  const Json cfg = Json::parse(config);
  const auto spec = experiment_from_config(cfg);
  const RunInputs inputs{cfg, base_dir, pool_dir, spec.time_limit_s};
  SweepOutput out;
  {
    py::gil_scoped_release release;
    out = sweep(spec, inputs);
    fs::create_directories(out_dir);
    write_results_csv(out.table, out_dir / "results.csv");
    write_failures_csv(out.failures, out_dir / "failures.csv");
    write_spikes_csv(out.spikes, out_dir / "spikes.csv");
  }
  return Json{{"rows", out.table.rows.size()},
              {"failures", out.failures.size()},
              {"reference_objective_eur", out.reference.objective}}
      .dump();
}

std::string report(const fs::path& in_dir, const fs::path& out_dir) {
  const auto r = emit_outputs(read_results_csv(in_dir / "results.csv"), out_dir);
  return Json{{"files", r.files}, {"warnings", r.warnings}}.dump();
}

std::string solve_mps(const fs::path& path) {
  const auto problem = lp::read_mps(path);
  lp::RawSolution s;
  {
    py::gil_scoped_release release;
    s = lp::solve(problem);
  }
  return Json{{"status", lp::status_name(s.status)},
              {"objective", s.objective},
              {"iterations", s.iterations},
              {"x", s.x}}
      .dump();
}

std::string validate(const fs::path& model, const fs::path& solution, double tolerance) {
  const auto problem = lp::read_mps(model);
  const auto raw = lp::read_external_solution(solution, problem);
  const auto r = lp::validate_solution(problem, raw.x, tolerance);
  return Json{{"pass", r.pass},
              {"objective", r.objective},
              {"max_relative_row_residual", r.max_relative_row_residual},
              {"max_relative_bound_violation", r.max_relative_bound_violation}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bevpsm core: profile pools, sampling, scenario runs and sweeps";

  static const py::handle base = py::exception<Error>(m, "BevpsmError").release();
  static const py::handle config_error = py::exception<Error>(m, "ConfigError", base).release();
  static const py::handle input_error = py::exception<Error>(m, "InputError", base).release();
  static const py::handle io_error = py::exception<Error>(m, "IoError", base).release();
  static const py::handle parse_error = py::exception<Error>(m, "ParseError", base).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.category()) {
        case ErrorCategory::kConfig: py::set_error(config_error, e.what()); break;
        case ErrorCategory::kInput: py::set_error(input_error, e.what()); break;
        case ErrorCategory::kIo: py::set_error(io_error, e.what()); break;
        case ErrorCategory::kParse: py::set_error(parse_error, e.what()); break;
        default: py::set_error(base, e.what()); break;
      }
    }
  });

  m.def("version", [] { return std::string(version()); });
  m.def("build_info", [] { return build_info().dump(); });
  m.def("load_config", &load_config_json, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("config_hash", [](const std::string& config) { return config_hash(Json::parse(config)); });
  m.def("generate_pool", &generate_pool, py::arg("config"), py::arg("directory"));
  m.def("draw_samples", &draw_samples, py::arg("config"), py::arg("pool_size"));
  m.def("run_scenario", &run, py::arg("config"), py::arg("base_dir"), py::arg("pool_dir"), py::arg("strategy"),
        py::arg("fleet_size"), py::arg("profile_ids"), py::arg("sample_id") = 0);
  m.def("sweep", &run_sweep, py::arg("config"), py::arg("base_dir"), py::arg("pool_dir"), py::arg("out_dir"));
  m.def("report", &report, py::arg("in_dir"), py::arg("out_dir"));
  m.def("solve_mps", &solve_mps, py::arg("path"));
  m.def("validate", &validate, py::arg("model"), py::arg("solution"), py::arg("tolerance") = 1e-6);
}
