// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/standard_form.hpp"

#include "bevpsm/errors.hpp"

namespace bevpsm::lp {

StandardLp to_standard_form(const LpProblem& problem) {
  problem.validate();
  StandardLp out;
  out.name = problem.name();
  const int m = problem.num_rows();
  const int n = problem.num_variables();
  out.num_structural = n;
  out.row_slack.assign(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    if (problem.row(i).sense != RowSense::kEqual) {
      out.row_slack[static_cast<std::size_t>(i)] = n + static_cast<int>(out.slack_row.size());
      out.slack_row.push_back(i);
    }
  }
  const int total = n + static_cast<int>(out.slack_row.size());

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(problem.num_nonzeros() + out.slack_row.size());
  out.rhs.resize(m);
  out.row_names.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Row& row = problem.row(i);
    for (const Entry& e : row.entries) triplets.emplace_back(i, e.index, e.value);
    const int slack = out.row_slack[static_cast<std::size_t>(i)];
    if (slack >= 0) {
      triplets.emplace_back(i, slack, row.sense == RowSense::kLessEqual ? 1.0 : -1.0);
    }
    out.rhs[i] = row.rhs;
    out.row_names.push_back(row.name);
  }
  out.matrix.resize(m, total);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();

  out.cost = Eigen::VectorXd::Zero(total);
  out.lower = Eigen::VectorXd::Zero(total);
  out.upper = Eigen::VectorXd::Constant(total, kInf);
  out.column_names.reserve(static_cast<std::size_t>(total));
  for (int j = 0; j < n; ++j) {
    const Variable& v = problem.variable(j);
    out.cost[j] = v.cost;
    out.lower[j] = v.lower;
    out.upper[j] = v.upper;
    out.column_names.push_back(v.name);
  }
  for (std::size_t k = 0; k < out.slack_row.size(); ++k) {
    out.column_names.push_back("slack[" + problem.row(out.slack_row[k]).name + "]");
  }
  return out;
}

LpProblem from_standard_form(const StandardLp& standard) {
  const int m = standard.num_rows();
  const int n = standard.num_structural;
  LpProblem problem(standard.name);
  for (int j = 0; j < n; ++j) {
    problem.add_variable(standard.column_names[static_cast<std::size_t>(j)], standard.lower[j],
                         standard.upper[j], standard.cost[j]);
  }
  std::vector<std::vector<Entry>> row_entries(static_cast<std::size_t>(m));
  std::vector<RowSense> senses(static_cast<std::size_t>(m), RowSense::kEqual);
  for (int j = 0; j < standard.matrix.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double, Eigen::ColMajor, int>::InnerIterator it(standard.matrix, j);
         it; ++it) {
      if (j < n) {
        row_entries[static_cast<std::size_t>(it.row())].push_back(Entry{j, it.value()});
      } else {
        senses[static_cast<std::size_t>(it.row())] =
            it.value() > 0 ? RowSense::kLessEqual : RowSense::kGreaterEqual;
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    problem.add_row(standard.row_names[static_cast<std::size_t>(i)],
                    senses[static_cast<std::size_t>(i)], standard.rhs[i],
                    std::move(row_entries[static_cast<std::size_t>(i)]));
  }
  return problem;
}

}  // namespace bevpsm::lp
