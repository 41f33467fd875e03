// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BEVPSM_LP_PROBLEM_HPP
#define BEVPSM_LP_PROBLEM_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bevpsm::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : char { kLessEqual = 'L', kGreaterEqual = 'G', kEqual = 'E' };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct Entry {
  int index = 0;
  double value = 0.0;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;
  std::vector<Entry> entries;  // distinct variable indices, no explicit zeros
};

/// Contiguous range of variables or rows.
struct IndexRange {
  int first = 0;
  int count = 0;
  int operator[](int k) const { return first + k; }
  int end() const { return first + count; }
};

/// Named blocks of variables or rows, kept in insertion order. Keys look like
/// "gen/DE/solar" and map to one index per hour (or a single index for
/// capacities). Solution extraction goes through this registry only.
class DimensionRegistry {
 public:
  void add(std::string key, IndexRange range);
  const IndexRange* find(std::string_view key) const;
  const IndexRange& at(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  const std::vector<std::pair<std::string, IndexRange>>& entries() const { return entries_; }
  void shift_and_merge(const DimensionRegistry& other, int offset, std::string_view prefix = {});

 private:
  std::vector<std::pair<std::string, IndexRange>> entries_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Sparse linear program: minimize cost'x over rows and variable bounds.
class LpProblem {
 public:
  LpProblem() = default;
  explicit LpProblem(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  int add_variable(std::string name, double lower, double upper, double cost);
  int add_row(std::string name, RowSense sense, double rhs, std::vector<Entry> entries = {});

  /// Adds `value` to the coefficient of `var` in `row` (merging duplicates;
  /// a coefficient that cancels to zero is removed).
  void add_to_row(int row, int var, double value);
  void set_rhs(int row, double rhs) { rows_.at(static_cast<std::size_t>(row)).rhs = rhs; }
  void set_bounds(int var, double lower, double upper);
  void set_cost(int var, double cost) { variables_.at(static_cast<std::size_t>(var)).cost = cost; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  std::size_t num_nonzeros() const;

  const Variable& variable(int i) const { return variables_[static_cast<std::size_t>(i)]; }
  const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }

  /// Index of the variable with this name, or -1.
  int find_variable(std::string_view name) const;
  int find_row(std::string_view name) const;

  DimensionRegistry& variable_blocks() { return variable_blocks_; }
  const DimensionRegistry& variable_blocks() const { return variable_blocks_; }
  DimensionRegistry& row_blocks() { return row_blocks_; }
  const DimensionRegistry& row_blocks() const { return row_blocks_; }

  /// Appends all variables/rows of `other`, prefixing block keys.
  /// Returns the variable offset and row offset applied to `other`.
  std::pair<int, int> append(const LpProblem& other, std::string_view block_prefix = {});

  /// Throws InputError on NaN/inf coefficients, out-of-range indices,
  /// lower > upper, or duplicate names.
  void validate() const;

 private:
  std::string name_ = "bevpsm";
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, int> variable_index_;
  std::unordered_map<std::string, int> row_index_;
  DimensionRegistry variable_blocks_;
  DimensionRegistry row_blocks_;
};

/// cost'x computed directly from the problem's coefficients.
double objective_value(const LpProblem& problem, std::span<const double> x);

/// Row activity a_i'x.
double row_activity(const Row& row, std::span<const double> x);

/// True when both problems have the same names, bounds, costs, senses, rhs and
/// coefficients (entry order inside a row is ignored). Comparison is exact.
bool same_coefficients(const LpProblem& a, const LpProblem& b, std::string* why = nullptr);

}  // namespace bevpsm::lp

#endif  // BEVPSM_LP_PROBLEM_HPP
