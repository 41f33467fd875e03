// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <limits>

#include "bevpsm/errors.hpp"
#include "bevpsm/lp_io.hpp"
#include "bevpsm/simplex.hpp"
#include "bevpsm/standard_form.hpp"
#include "bevpsm/text_io.hpp"
#include "doctest.h"
#include "lp_oracles.hpp"

namespace lp = bevpsm::lp;
using bevpsm::testing::enumerate_vertices;
using bevpsm::testing::random_bounded_lp;
using bevpsm::testing::random_lp;

namespace {

lp::LpProblem toy_problem() {
  // min -x - y  s.t.  x + 2y <= 4,  x <= 3,  y <= 2,  x, y >= 0
  lp::LpProblem p("toy");
  const int x = p.add_variable("x", 0, lp::kInf, -1);
  const int y = p.add_variable("y", 0, lp::kInf, -1);
  p.add_row("c1", lp::RowSense::kLessEqual, 4, {{x, 1}, {y, 2}});
  p.add_row("c2", lp::RowSense::kLessEqual, 3, {{x, 1}});
  p.add_row("c3", lp::RowSense::kLessEqual, 2, {{y, 1}});
  return p;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bevpsm_lp_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("standard form: equality-only problem has no slacks") {
  lp::LpProblem p;
  const int x = p.add_variable("x", 0, 5, 1);
  p.add_row("e", lp::RowSense::kEqual, 2, {{x, 1}});
  const auto s = lp::to_standard_form(p);
  CHECK(s.num_slacks() == 0);
  CHECK(s.num_columns() == 1);
}

TEST_CASE("standard form: a single <= row gets one [0, inf) slack") {
  lp::LpProblem p;
  const int x = p.add_variable("x", 0, 5, 1);
  p.add_row("l", lp::RowSense::kLessEqual, 2, {{x, 1}});
  const auto s = lp::to_standard_form(p);
  REQUIRE(s.num_slacks() == 1);
  CHECK(s.lower[1] == 0.0);
  CHECK(s.upper[1] == lp::kInf);
  CHECK(s.matrix.coeff(0, 1) == 1.0);
  CHECK(s.row_slack[0] == 1);
  CHECK(s.slack_row[0] == 0);
}

TEST_CASE("standard form: mapping round-trip reproduces every coefficient") {
  bevpsm::Rng rng(11);
  lp::LpProblem p("square");
  for (int j = 0; j < 10; ++j) p.add_variable("v" + std::to_string(j), -rng.uniform(), rng.uniform() * 4, rng.normal());
  for (int i = 0; i < 10; ++i) {
    std::vector<lp::Entry> entries;
    for (int j = 0; j < 10; ++j) {
      if (rng.bernoulli(0.6)) entries.push_back({j, rng.normal()});
    }
    const auto sense = static_cast<lp::RowSense>("LGE"[i % 3]);
    p.add_row("r" + std::to_string(i), sense, rng.normal(), std::move(entries));
  }
  const auto back = lp::from_standard_form(lp::to_standard_form(p));
  std::string why;
  CHECK_MESSAGE(lp::same_coefficients(p, back, &why), why);
}

TEST_CASE("standard form: non-finite coefficient is an input error") {
  lp::LpProblem p;
  const int x = p.add_variable("x", 0, 1, 0);
  p.add_row("bad", lp::RowSense::kLessEqual, 1, {{x, std::numeric_limits<double>::infinity()}});
  CHECK_THROWS_AS(lp::to_standard_form(p), bevpsm::InputError);
  lp::LpProblem q;
  q.add_variable("nan_cost", 0, 1, std::nan(""));
  CHECK_THROWS_AS(lp::to_standard_form(q), bevpsm::InputError);
}

TEST_CASE("simplex: toy problem and its vertex-enumeration oracle") {
  const auto p = toy_problem();
  const auto oracle = enumerate_vertices(p);
  REQUIRE(oracle);
  CHECK(oracle->objective == doctest::Approx(-3.5).epsilon(1e-12));

  const auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::SolveStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.x[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(sol.objective - oracle->objective) <= 1e-9);
}

TEST_CASE("simplex: infeasible pair of bounds rows") {
  lp::LpProblem p;
  const int x = p.add_variable("x", 0, lp::kInf, 1);
  p.add_row("le", lp::RowSense::kLessEqual, 1, {{x, 1}});
  p.add_row("ge", lp::RowSense::kGreaterEqual, 2, {{x, 1}});
  CHECK(lp::solve(p).status == lp::SolveStatus::kInfeasible);
}

TEST_CASE("simplex: unbounded objective") {
  lp::LpProblem p;
  p.add_variable("x", 0, lp::kInf, -1);
  CHECK(lp::solve(p).status == lp::SolveStatus::kUnbounded);

  lp::LpProblem q;
  const int x = q.add_variable("x", 0, lp::kInf, -1);
  const int y = q.add_variable("y", 0, lp::kInf, 0);
  q.add_row("r", lp::RowSense::kLessEqual, 1, {{x, 1}, {y, -1}});
  CHECK(lp::solve(q).status == lp::SolveStatus::kUnbounded);
}

TEST_CASE("simplex: free and negative-bounded variables") {
  // min x + 2y s.t. x + y = 1, x free, y in [-3, -1] -> y = -1? cost of y is 2
  // so y as small as possible: y = -3, x = 4, objective 4 - 6 = -2.
  lp::LpProblem p;
  const int x = p.add_variable("x", -lp::kInf, lp::kInf, 1);
  const int y = p.add_variable("y", -3, -1, 2);
  p.add_row("sum", lp::RowSense::kEqual, 1, {{x, 1}, {y, 1}});
  const auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-2.0));
  CHECK(sol.x[1] == doctest::Approx(-3.0));
}

TEST_CASE("simplex: Beale's cycling example terminates under Bland's rule") {
  // Classic instance on which Dantzig pricing with naive tie-breaking cycles.
  lp::LpProblem p("beale");
  const int x4 = p.add_variable("x4", 0, lp::kInf, -0.75);
  const int x5 = p.add_variable("x5", 0, lp::kInf, 150);
  const int x6 = p.add_variable("x6", 0, lp::kInf, -0.02);
  const int x7 = p.add_variable("x7", 0, lp::kInf, 6);
  p.add_row("r1", lp::RowSense::kLessEqual, 0, {{x4, 0.25}, {x5, -60}, {x6, -0.04}, {x7, 9}});
  p.add_row("r2", lp::RowSense::kLessEqual, 0, {{x4, 0.5}, {x5, -90}, {x6, -0.02}, {x7, 3}});
  p.add_row("r3", lp::RowSense::kLessEqual, 1, {{x6, 1}});
  for (double trigger : {3.0, 0.0}) {
    lp::SimplexOptions options;
    options.bland_after_degenerate_rows = trigger;
    const auto sol = lp::solve(p, options);
    REQUIRE(sol.status == lp::SolveStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-12));
    if (trigger == 0.0) CHECK(sol.bland_pivots > 0);
  }
}

TEST_CASE("simplex: oracle equivalence on random bounded LPs") {
  bevpsm::Rng rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_bounded_lp(rng);
    const auto oracle = enumerate_vertices(p);
    const auto sol = lp::solve(p);
    if (!oracle) {
      CHECK_MESSAGE(sol.status == lp::SolveStatus::kInfeasible, "trial " << trial << "\n" << lp::to_mps(p));
      continue;
    }
    REQUIRE(sol.status == lp::SolveStatus::kOptimal);
    CHECK_MESSAGE(std::abs(sol.objective - oracle->objective) <= 1e-9,
                  "trial " << trial << ": simplex " << sol.objective << " oracle "
                           << oracle->objective);
    ++solved;
  }
  CHECK(solved >= 50);
}

TEST_CASE("simplex: optimal basic solution is a vertex and duals certify it") {
  bevpsm::Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const auto p = random_bounded_lp(rng);
    const auto standard = lp::to_standard_form(p);
    const auto sol = lp::solve_simplex(standard);
    if (sol.status != lp::SolveStatus::kOptimal) continue;
    // Nonbasic columns sit at a bound.
    std::vector<bool> basic(static_cast<std::size_t>(standard.num_columns()), false);
    for (int j : sol.basis) {
      if (j >= 0) basic[static_cast<std::size_t>(j)] = true;
    }
    for (int j = 0; j < standard.num_columns(); ++j) {
      if (basic[static_cast<std::size_t>(j)]) continue;
      const double xj = sol.x[static_cast<std::size_t>(j)];
      const bool at_bound = std::abs(xj - standard.lower[j]) <= 1e-12 ||
                            std::abs(xj - standard.upper[j]) <= 1e-12;
      CHECK(at_bound);
    }
    // Weak duality: the dual bound never exceeds the primal optimum, and the
    // optimal multipliers close the gap.
    const double dual = lp::dual_objective(standard, sol.row_duals);
    CHECK(dual <= sol.objective + 1e-7);
    CHECK(dual == doctest::Approx(sol.objective).epsilon(1e-9));
    std::vector<double> perturbed = sol.row_duals;
    for (double& y : perturbed) y += rng.normal();
    CHECK(lp::dual_objective(standard, perturbed) <= sol.objective + 1e-7);
  }
}

TEST_CASE("simplex: identical input gives identical iterate sequence") {
  bevpsm::Rng rng(5);
  const auto p = random_bounded_lp(rng);
  const auto a = lp::solve(p);
  const auto b = lp::solve(p);
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}

TEST_CASE("simplex: iteration limit reports last iterate") {
  const auto p = toy_problem();
  lp::SimplexOptions options;
  options.max_iterations = 1;
  const auto sol = lp::solve(p, options);
  CHECK(sol.status == lp::SolveStatus::kIterationLimit);
  CHECK(sol.x.size() == 2);
}

TEST_CASE("mps: write -> read is the identity on random problems") {
  bevpsm::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_lp(rng, "rand" + std::to_string(trial));
    const auto text = lp::to_mps(p);
    const auto back = lp::parse_mps(text);
    std::string why;
    CHECK_MESSAGE(lp::same_coefficients(p, back, &why), why);
    CHECK(back.name() == p.name());
    CHECK(lp::to_mps(back) == text);
  }
}

TEST_CASE("mps: deterministic bytes and coefficient count") {
  const auto p = toy_problem();
  const auto dir = temp_dir("mps");
  lp::write_mps(p, dir / "a.mps");
  lp::write_mps(p, dir / "b.mps");
  const auto a = bevpsm::read_file(dir / "a.mps");
  CHECK(a == bevpsm::read_file(dir / "b.mps"));

  // Count oracle: COLUMNS lines that target a constraint row.
  std::size_t count = 0;
  bool in_columns = false;
  for (auto line : bevpsm::split(a, '\n')) {
    if (line == "COLUMNS") { in_columns = true; continue; }
    if (line == "RHS") in_columns = false;
    if (in_columns && line.find(" OBJ ") == std::string_view::npos) ++count;
  }
  CHECK(count == p.num_nonzeros());
  const auto back = lp::read_mps(dir / "a.mps");
  CHECK(back.num_rows() == p.num_rows());
  CHECK(back.num_variables() == p.num_variables());
  // Fixed-format layout: the row name field starts at column 5.
  CHECK(a.find("\n L  c1\n") != std::string::npos);
}

TEST_CASE("mps: parse errors carry line numbers") {
  const std::string text = "NAME x\nROWS\n N  OBJ\n L  r\nCOLUMNS\n    x r notanumber\nENDATA\n";
  try {
    lp::parse_mps(text, "bad.mps");
    FAIL("expected a parse error");
  } catch (const bevpsm::ParseError& e) {
    CHECK(e.line() == 6);
  }
  CHECK_THROWS_AS(lp::parse_mps("NAME x\nROWS\n N OBJ\nCOLUMNS\n    x nope 1\nENDATA\n"),
                  bevpsm::ParseError);
  CHECK_THROWS_AS(lp::parse_mps("NAME x\nROWS\n N OBJ\n"), bevpsm::ParseError);
}

TEST_CASE("external solution: parse, validate, reject") {
  const auto p = toy_problem();
  const auto good = lp::parse_external_solution("# from another solver\nx 3\ny 0.5\n", p);
  CHECK(good.objective == doctest::Approx(-3.5));
  const auto report = lp::validate_solution(p, good.x, 1e-9);
  CHECK(report.pass);
  CHECK(report.max_row_residual == 0.0);
  CHECK(report.max_bound_violation == 0.0);

  try {
    lp::parse_external_solution("x 3\n", p);
    FAIL("expected missing-variable error");
  } catch (const bevpsm::InputError& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
  CHECK_THROWS_AS(lp::parse_external_solution("x 3\ny 0.5\nz 1\n", p), bevpsm::ParseError);

  // Corrupted value is detected.
  const auto bad = lp::parse_external_solution("x 3\ny 1.5\n", p);
  CHECK_FALSE(lp::validate_solution(p, bad.x, 1e-6).pass);

  // Round trip through files.
  const auto dir = temp_dir("sol");
  const auto sol = lp::solve(p);
  lp::write_solution(p, sol, dir / "toy.sol");
  const auto back = lp::read_external_solution(dir / "toy.sol", p);
  CHECK(back.x == sol.x);
  CHECK(back.status == lp::SolveStatus::kOptimal);
}

TEST_CASE("validate_solution: perturbation impact is reported") {
  const auto p = toy_problem();
  const auto sol = lp::solve(p);
  const auto ok = lp::validate_solution(p, sol.x, 1e-6);
  CHECK(ok.pass);
  CHECK(ok.objective == doctest::Approx(sol.objective).epsilon(1e-9));

  auto x = sol.x;
  x[1] += 1.0;  // c1 activity rises by 2, c3 by 1
  const auto bad = lp::validate_solution(p, x, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_row_residual >= 2.0 - 1e-12);
  CHECK(bad.worst_row == 0);
  CHECK_THROWS_AS(lp::validate_solution(p, std::vector<double>{1.0}, 1e-6), bevpsm::InputError);
}
