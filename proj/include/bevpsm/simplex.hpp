// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_SIMPLEX_HPP
#define BEVPSM_SIMPLEX_HPP

#include <limits>
#include <string_view>
#include <vector>

#include "bevpsm/lp_problem.hpp"
#include "bevpsm/standard_form.hpp"

namespace bevpsm::lp {

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kTimeLimit,
  kNumericalError,
};

std::string_view status_name(SolveStatus status);
/// Inverse of status_name; throws InputError on unknown names.
SolveStatus parse_status(std::string_view name);

struct SimplexOptions {
  double primal_tolerance = 1e-9;   // bound violation, relative to 1 + |bound|
  double dual_tolerance = 1e-9;     // reduced-cost optimality threshold
  double pivot_tolerance = 1e-9;    // smallest admissible |alpha| in the ratio test
  long max_iterations = 5'000'000;
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  int refactor_interval = 100;      // eta updates between fresh LU factorizations
  double bland_after_degenerate_rows = 3.0;  // Bland after this many x rows degenerate pivots
};

struct RawSolution {
  SolveStatus status = SolveStatus::kNumericalError;
  std::vector<double> x;            // one value per column solved for
  double objective = 0.0;
  long iterations = 0;
  long phase_one_iterations = 0;
  long degenerate_pivots = 0;
  long bland_pivots = 0;
  double solve_seconds = 0.0;
  std::vector<double> row_duals;    // y with c_B' = y' B at the final basis
  std::vector<double> reduced_costs;
  std::vector<int> basis;           // basic column per row (artificials as -1)
};

/// Bounded-variable primal revised simplex (two phases). The basis is kept
/// as a sparse LU factorization plus a product-form eta file.
RawSolution solve_simplex(const StandardLp& standard, const SimplexOptions& options = {});

/// Solves a problem through its standard form; x, reduced_costs are trimmed
/// to the problem's own variables.
RawSolution solve(const LpProblem& problem, const SimplexOptions& options = {});

/// Dual objective y'b + sum_j reduced-cost bound terms for the given
/// multipliers. For dual-feasible (y, d) this is a lower bound on the optimum.
double dual_objective(const StandardLp& standard, const std::vector<double>& row_duals,
                      double dual_feasibility_tolerance = 1e-7);

}  // namespace bevpsm::lp

#endif  // BEVPSM_SIMPLEX_HPP
