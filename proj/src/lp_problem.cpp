// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/lp_problem.hpp"

#include <algorithm>
#include <cmath>

#include "bevpsm/errors.hpp"

namespace bevpsm::lp {

void DimensionRegistry::add(std::string key, IndexRange range) {
  if (lookup_.count(key) != 0) throw InternalError("duplicate dimension block '" + key + "'");
  lookup_.emplace(key, entries_.size());
  entries_.emplace_back(std::move(key), range);
}

const IndexRange* DimensionRegistry::find(std::string_view key) const {
  auto it = lookup_.find(std::string(key));
  return it == lookup_.end() ? nullptr : &entries_[it->second].second;
}

const IndexRange& DimensionRegistry::at(std::string_view key) const {
  const IndexRange* range = find(key);
  if (range == nullptr) throw InternalError("unknown dimension block '" + std::string(key) + "'");
  return *range;
}

void DimensionRegistry::shift_and_merge(const DimensionRegistry& other, int offset,
                                        std::string_view prefix) {
  for (const auto& [key, range] : other.entries_) {
    add(std::string(prefix) + key, IndexRange{range.first + offset, range.count});
  }
}

int LpProblem::add_variable(std::string name, double lower, double upper, double cost) {
  const int index = num_variables();
  auto [it, inserted] = variable_index_.emplace(name, index);
  if (!inserted) throw InternalError("duplicate variable name '" + name + "'");
  variables_.push_back(Variable{std::move(name), lower, upper, cost});
  return index;
}

int LpProblem::add_row(std::string name, RowSense sense, double rhs, std::vector<Entry> entries) {
  const int index = num_rows();
  auto [it, inserted] = row_index_.emplace(name, index);
  if (!inserted) throw InternalError("duplicate row name '" + name + "'");
  rows_.push_back(Row{std::move(name), sense, rhs, {}});
  rows_.back().entries.reserve(entries.size());
  for (const Entry& e : entries) add_to_row(index, e.index, e.value);
  return index;
}

void LpProblem::add_to_row(int row, int var, double value) {
  if (value == 0.0) return;
  auto& entries = rows_.at(static_cast<std::size_t>(row)).entries;
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (it->index == var) {
      it->value += value;
      if (it->value == 0.0) entries.erase(it);
      return;
    }
  }
  entries.push_back(Entry{var, value});
}

void LpProblem::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

std::size_t LpProblem::num_nonzeros() const {
  std::size_t count = 0;
  for (const Row& row : rows_) count += row.entries.size();
  return count;
}

int LpProblem::find_variable(std::string_view name) const {
  auto it = variable_index_.find(std::string(name));
  return it == variable_index_.end() ? -1 : it->second;
}

int LpProblem::find_row(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  return it == row_index_.end() ? -1 : it->second;
}

std::pair<int, int> LpProblem::append(const LpProblem& other, std::string_view block_prefix) {
  const int var_offset = num_variables();
  const int row_offset = num_rows();
  for (const Variable& v : other.variables_) add_variable(v.name, v.lower, v.upper, v.cost);
  for (const Row& r : other.rows_) {
    std::vector<Entry> shifted;
    shifted.reserve(r.entries.size());
    for (const Entry& e : r.entries) shifted.push_back(Entry{e.index + var_offset, e.value});
    add_row(r.name, r.sense, r.rhs, std::move(shifted));
  }
  variable_blocks_.shift_and_merge(other.variable_blocks_, var_offset, block_prefix);
  row_blocks_.shift_and_merge(other.row_blocks_, row_offset, block_prefix);
  return {var_offset, row_offset};
}

void LpProblem::validate() const {
  const int n = num_variables();
  for (const Variable& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInf || v.upper == -kInf) {
      throw InputError("variable '" + v.name + "' has invalid bounds");
    }
    if (v.lower > v.upper) throw InputError("variable '" + v.name + "' has lower > upper");
    if (!std::isfinite(v.cost)) throw InputError("variable '" + v.name + "' has non-finite cost");
  }
  for (const Row& r : rows_) {
    if (!std::isfinite(r.rhs)) throw InputError("row '" + r.name + "' has non-finite rhs");
    for (const Entry& e : r.entries) {
      if (e.index < 0 || e.index >= n) {
        throw InputError("row '" + r.name + "' references undeclared variable " +
                         std::to_string(e.index));
      }
      if (!std::isfinite(e.value)) {
        throw InputError("row '" + r.name + "' has non-finite coefficient for '" +
                         variables_[static_cast<std::size_t>(e.index)].name + "'");
      }
    }
  }
}

double objective_value(const LpProblem& problem, std::span<const double> x) {
  double total = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    const double c = problem.variable(j).cost;
    if (c != 0.0) total += c * x[static_cast<std::size_t>(j)];
  }
  return total;
}

double row_activity(const Row& row, std::span<const double> x) {
  double total = 0.0;
  for (const Entry& e : row.entries) total += e.value * x[static_cast<std::size_t>(e.index)];
  return total;
}

bool same_coefficients(const LpProblem& a, const LpProblem& b, std::string* why) {
  auto fail = [why](std::string message) {
    if (why != nullptr) *why = std::move(message);
    return false;
  };
  if (a.num_variables() != b.num_variables()) return fail("variable count differs");
  if (a.num_rows() != b.num_rows()) return fail("row count differs");
  for (int j = 0; j < a.num_variables(); ++j) {
    const Variable& va = a.variable(j);
    const Variable& vb = b.variable(j);
    if (va.name != vb.name || va.lower != vb.lower || va.upper != vb.upper ||
        va.cost != vb.cost) {
      return fail("variable " + std::to_string(j) + " ('" + va.name + "') differs");
    }
  }
  auto sorted = [](std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.index < y.index; });
    return entries;
  };
  for (int i = 0; i < a.num_rows(); ++i) {
    const Row& ra = a.row(i);
    const Row& rb = b.row(i);
    if (ra.name != rb.name || ra.sense != rb.sense || ra.rhs != rb.rhs) {
      return fail("row " + std::to_string(i) + " ('" + ra.name + "') header differs");
    }
    const auto ea = sorted(ra.entries);
    const auto eb = sorted(rb.entries);
    if (ea.size() != eb.size()) return fail("row '" + ra.name + "' entry count differs");
    for (std::size_t k = 0; k < ea.size(); ++k) {
      if (ea[k].index != eb[k].index || ea[k].value != eb[k].value) {
        return fail("row '" + ra.name + "' coefficient differs");
      }
    }
  }
  return true;
}

}  // namespace bevpsm::lp
