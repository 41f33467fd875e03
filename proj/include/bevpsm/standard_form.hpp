// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_STANDARD_FORM_HPP
#define BEVPSM_STANDARD_FORM_HPP

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "bevpsm/lp_problem.hpp"

namespace bevpsm::lp {

/// minimize c'x  s.t.  A x = b,  lower <= x <= upper.
///
/// Columns [0, num_structural) are the problem's variables in order; every
/// inequality row i gets one slack column with bounds [0, inf): coefficient
/// +1 for a <= row, -1 for a >= row. Equality rows get none.
struct StandardLp {
  int num_structural = 0;
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd cost;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> slack_row;  // for column num_structural + k: its row
  std::vector<int> row_slack;  // for each row: slack column index or -1
  std::vector<std::string> column_names;
  std::vector<std::string> row_names;
  std::string name;

  int num_rows() const { return static_cast<int>(matrix.rows()); }
  int num_columns() const { return static_cast<int>(matrix.cols()); }
  int num_slacks() const { return static_cast<int>(slack_row.size()); }
};

/// Throws InputError on any non-finite coefficient or invalid bound.
StandardLp to_standard_form(const LpProblem& problem);

/// Inverse of to_standard_form: recovers senses from the slack signs.
LpProblem from_standard_form(const StandardLp& standard);

}  // namespace bevpsm::lp

#endif  // BEVPSM_STANDARD_FORM_HPP
