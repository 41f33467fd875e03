// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// File bridge to external solvers: MPS model files, "name value" solution
// files, and an independent feasibility check of any solution.

#ifndef BEVPSM_LP_IO_HPP
#define BEVPSM_LP_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bevpsm/lp_problem.hpp"
#include "bevpsm/simplex.hpp"

namespace bevpsm::lp {

/// MPS text for `problem`: sections NAME, ROWS, COLUMNS, RHS, BOUNDS, ENDATA in
/// the fixed-format column layout (fields start at columns 2, 5, 15, 25, 40,
/// 50). Names longer than 8 characters and 12-digit numbers widen their field
/// and are always separated by at least one blank, so the file is also valid
/// free-format MPS. Numbers are written in shortest round-trip form. Columns
/// and rows appear in declaration order; the objective row is "OBJ".
std::string to_mps(const LpProblem& problem);
void write_mps(const LpProblem& problem, const std::filesystem::path& destination);

/// Parses MPS produced by write_mps (and general free-format MPS without
/// RANGES). Errors carry line numbers.
LpProblem parse_mps(std::string_view text, const std::string& source = "<mps>");
LpProblem read_mps(const std::filesystem::path& path);

/// Writes "name value" lines, one per variable, preceded by '#' comments with
/// status and objective.
void write_solution(const LpProblem& problem, const RawSolution& solution,
                    const std::filesystem::path& destination);

/// Reads a "name value" per-line solution. Every variable of `problem` must
/// appear exactly once; unknown names are rejected. Optional "# status: s"
/// and "# objective: v" comment lines are honored; the objective is otherwise
/// recomputed from the problem.
RawSolution read_external_solution(const std::filesystem::path& path, const LpProblem& problem);
RawSolution parse_external_solution(std::string_view text, const LpProblem& problem,
                                    const std::string& source = "<solution>");

struct FeasibilityReport {
  double max_bound_violation = 0.0;       // absolute
  double max_row_residual = 0.0;          // absolute
  double max_relative_bound_violation = 0.0;
  double max_relative_row_residual = 0.0;  // residual / max(1, |rhs|, largest |a_ij x_j|)
  int worst_variable = -1;
  int worst_row = -1;
  double objective = 0.0;                 // recomputed from the problem's costs
  double tolerance = 0.0;
  bool pass = false;
};

/// Independent check of x against problem bounds and rows; pass iff both
/// relative measures are within `tolerance`.
FeasibilityReport validate_solution(const LpProblem& problem, std::span<const double> x,
                                    double tolerance = 1e-6);

}  // namespace bevpsm::lp

#endif  // BEVPSM_LP_IO_HPP
