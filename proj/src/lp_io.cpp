// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/lp_io.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bevpsm/errors.hpp"
#include "bevpsm/text_io.hpp"

namespace bevpsm::lp {
namespace {

constexpr std::string_view kObjectiveRow = "OBJ";
constexpr double kMpsInfinity = 1e30;

// Appends `field` so that it starts at 1-based column `column`, or after one
// blank if the line is already longer.
void put_field(std::string& line, std::string_view field, std::size_t column) {
  const std::size_t target = column - 1;
  if (line.size() < target) {
    line.append(target - line.size(), ' ');
  } else if (!line.empty()) {
    line.push_back(' ');
  }
  line.append(field);
}

std::string mps_line(std::string_view f1, std::string_view f2, std::string_view f3 = {},
                     std::string_view f4 = {}) {
  std::string line;
  if (!f1.empty()) put_field(line, f1, 2);
  if (!f2.empty()) put_field(line, f2, 5);
  if (!f3.empty()) put_field(line, f3, 15);
  if (!f4.empty()) put_field(line, f4, 25);
  line.push_back('\n');
  return line;
}

std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string to_mps(const LpProblem& problem) {
  problem.validate();
  const int n = problem.num_variables();
  const int m = problem.num_rows();

  // Column-wise view in row order.
  std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    for (const Entry& e : problem.row(i).entries) {
      columns[static_cast<std::size_t>(e.index)].push_back(Entry{i, e.value});
    }
  }

  std::string out;
  out.reserve(problem.num_nonzeros() * 48 + static_cast<std::size_t>(n + m) * 32);
  out.append("NAME          ").append(problem.name()).append("\n");
  out.append("ROWS\n");
  out.append(mps_line("N", kObjectiveRow));
  for (int i = 0; i < m; ++i) {
    const Row& row = problem.row(i);
    const char sense[2] = {static_cast<char>(row.sense), '\0'};
    out.append(mps_line(sense, row.name));
  }
  out.append("COLUMNS\n");
  for (int j = 0; j < n; ++j) {
    const Variable& v = problem.variable(j);
    const auto& column = columns[static_cast<std::size_t>(j)];
    // A column without entries is declared through a zero objective entry.
    if (v.cost != 0.0 || column.empty()) {
      out.append(mps_line({}, v.name, kObjectiveRow, format_double(v.cost)));
    }
    for (const Entry& e : column) {
      out.append(mps_line({}, v.name, problem.row(e.index).name, format_double(e.value)));
    }
  }
  out.append("RHS\n");
  for (int i = 0; i < m; ++i) {
    const Row& row = problem.row(i);
    if (row.rhs != 0.0) out.append(mps_line({}, "RHS", row.name, format_double(row.rhs)));
  }
  out.append("BOUNDS\n");
  for (int j = 0; j < n; ++j) {
    const Variable& v = problem.variable(j);
    const bool lower_inf = v.lower == -kInf;
    const bool upper_inf = v.upper == kInf;
    if (!lower_inf && v.lower == v.upper) {
      out.append(mps_line("FX", "BND", v.name, format_double(v.lower)));
      continue;
    }
    if (lower_inf && upper_inf) {
      out.append(mps_line("FR", "BND", v.name));
      continue;
    }
    if (lower_inf) {
      out.append(mps_line("MI", "BND", v.name));
    } else if (v.lower != 0.0 || (!upper_inf && v.upper < 0.0)) {
      out.append(mps_line("LO", "BND", v.name, format_double(v.lower)));
    }
    if (!upper_inf) out.append(mps_line("UP", "BND", v.name, format_double(v.upper)));
  }
  out.append("ENDATA\n");
  return out;
}

void write_mps(const LpProblem& problem, const std::filesystem::path& destination) {
  write_file(destination, to_mps(problem));
}

LpProblem parse_mps(std::string_view text, const std::string& source) {
  enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };
  Section section = Section::kNone;
  LpProblem problem;
  std::string objective_name;
  std::unordered_map<std::string, RowSense> pending_sense;
  std::vector<std::string> free_rows;
  bool saw_name = false;
  bool saw_end = false;
  long line_no = 0;

  auto number = [&](std::string_view token) {
    double value = 0.0;
    if (!parse_double(token, value)) {
      throw ParseError(source, line_no, "invalid number '" + std::string(token) + "'");
    }
    if (value >= kMpsInfinity) return kInf;
    if (value <= -kMpsInfinity) return -kInf;
    return value;
  };
  auto row_of = [&](std::string_view name) {
    const int index = problem.find_row(name);
    if (index < 0) throw ParseError(source, line_no, "unknown row '" + std::string(name) + "'");
    return index;
  };
  auto is_free_row = [&](std::string_view name) {
    return std::find(free_rows.begin(), free_rows.end(), name) != free_rows.end();
  };

  std::string_view rest = text;
  while (!rest.empty() && !saw_end) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '*') continue;
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    const bool header = line.front() != ' ' && line.front() != '\t';
    if (header) {
      const std::string_view key = tok[0];
      if (key == "NAME") {
        section = Section::kName;
        saw_name = true;
        if (tok.size() > 1) problem.set_name(std::string(tok[1]));
      } else if (key == "ROWS") {
        section = Section::kRows;
      } else if (key == "COLUMNS") {
        section = Section::kColumns;
      } else if (key == "RHS") {
        section = Section::kRhs;
      } else if (key == "RANGES") {
        throw ParseError(source, line_no, "RANGES section is not supported");
      } else if (key == "BOUNDS") {
        section = Section::kBounds;
      } else if (key == "ENDATA") {
        saw_end = true;
      } else if (key == "OBJSENSE") {
        if (tok.size() > 1 && tok[1] != "MIN" && tok[1] != "MINIMIZE") {
          throw ParseError(source, line_no, "only minimization is supported");
        }
      } else {
        throw ParseError(source, line_no, "unknown section '" + std::string(key) + "'");
      }
      continue;
    }
    switch (section) {
      case Section::kRows: {
        if (tok.size() != 2) throw ParseError(source, line_no, "ROWS entry needs type and name");
        const std::string_view type = tok[0];
        if (type == "N") {
          if (objective_name.empty()) {
            objective_name = std::string(tok[1]);
          } else {
            free_rows.emplace_back(tok[1]);
          }
        } else if (type == "L" || type == "G" || type == "E") {
          problem.add_row(std::string(tok[1]), static_cast<RowSense>(type[0]), 0.0);
        } else {
          throw ParseError(source, line_no, "unknown row type '" + std::string(type) + "'");
        }
        break;
      }
      case Section::kColumns: {
        if (tok.size() >= 2 && tok[1] == "'MARKER'") {
          throw ParseError(source, line_no, "integer markers are not supported");
        }
        if (tok.size() != 3 && tok.size() != 5) {
          throw ParseError(source, line_no, "COLUMNS entry needs 3 or 5 fields");
        }
        int var = problem.find_variable(tok[0]);
        if (var < 0) var = problem.add_variable(std::string(tok[0]), 0.0, kInf, 0.0);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double value = number(tok[k + 1]);
          if (tok[k] == objective_name) {
            problem.set_cost(var, problem.variable(var).cost + value);
          } else if (!is_free_row(tok[k])) {
            problem.add_to_row(row_of(tok[k]), var, value);
          }
        }
        break;
      }
      case Section::kRhs: {
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        if (tok.size() < 2 || tok.size() > 5) throw ParseError(source, line_no, "bad RHS entry");
        for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
          if (tok[k] == objective_name) {
            throw ParseError(source, line_no, "objective constants are not supported");
          }
          if (is_free_row(tok[k])) continue;
          problem.set_rhs(row_of(tok[k]), number(tok[k + 1]));
        }
        break;
      }
      case Section::kBounds: {
        const std::string_view type = tok[0];
        const bool has_value = type == "UP" || type == "LO" || type == "FX";
        const bool no_value = type == "FR" || type == "MI" || type == "PL";
        if (!has_value && !no_value) {
          throw ParseError(source, line_no, "unsupported bound type '" + std::string(type) + "'");
        }
        const std::size_t expected_with_set = has_value ? 4 : 3;
        std::size_t col_tok = 0;
        if (tok.size() == expected_with_set) {
          col_tok = 2;
        } else if (tok.size() == expected_with_set - 1) {
          col_tok = 1;
        } else {
          throw ParseError(source, line_no, "bad BOUNDS entry");
        }
        const int var = problem.find_variable(tok[col_tok]);
        if (var < 0) {
          throw ParseError(source, line_no, "bound on unknown column '" + std::string(tok[col_tok]) + "'");
        }
        const Variable& v = problem.variable(var);
        double lower = v.lower;
        double upper = v.upper;
        const double value = has_value ? number(tok[col_tok + 1]) : 0.0;
        if (type == "UP") upper = value;
        if (type == "LO") lower = value;
        if (type == "FX") lower = upper = value;
        if (type == "FR") {
          lower = -kInf;
          upper = kInf;
        }
        if (type == "MI") lower = -kInf;
        if (type == "PL") upper = kInf;
        problem.set_bounds(var, lower, upper);
        break;
      }
      case Section::kName:
      case Section::kNone:
      case Section::kRanges:
      case Section::kEnd:
        throw ParseError(source, line_no, "data line outside of a section");
    }
  }
  if (!saw_name && problem.num_rows() == 0 && problem.num_variables() == 0) {
    throw ParseError(source, line_no, "empty MPS input");
  }
  if (!saw_end) throw ParseError(source, line_no, "missing ENDATA");
  return problem;
}

LpProblem read_mps(const std::filesystem::path& path) {
  return parse_mps(read_file(path), path.string());
}

void write_solution(const LpProblem& problem, const RawSolution& solution,
                    const std::filesystem::path& destination) {
  if (solution.x.size() != static_cast<std::size_t>(problem.num_variables())) {
    throw InternalError("solution length does not match the problem");
  }
  std::string out;
  out.append("# status: ").append(status_name(solution.status)).append("\n");
  out.append("# objective: ").append(format_double(solution.objective)).append("\n");
  out.append("# iterations: ").append(std::to_string(solution.iterations)).append("\n");
  for (int j = 0; j < problem.num_variables(); ++j) {
    out.append(problem.variable(j).name)
        .append(" ")
        .append(format_double(solution.x[static_cast<std::size_t>(j)]))
        .append("\n");
  }
  write_file(destination, out);
}

RawSolution parse_external_solution(std::string_view text, const LpProblem& problem,
                                    const std::string& source) {
  RawSolution solution;
  solution.status = SolveStatus::kOptimal;
  const auto n = static_cast<std::size_t>(problem.num_variables());
  solution.x.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  bool have_objective = false;
  long line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("status:")) {
        solution.status = parse_status(trim(body.substr(7)));
      } else if (body.starts_with("objective:")) {
        if (!parse_double(trim(body.substr(10)), solution.objective)) {
          throw ParseError(source, line_no, "invalid objective comment");
        }
        have_objective = true;
      }
      continue;
    }
    const auto tok = tokens_of(line);
    if (tok.size() != 2) throw ParseError(source, line_no, "expected 'name value'");
    const int var = problem.find_variable(tok[0]);
    if (var < 0) throw ParseError(source, line_no, "unknown variable '" + std::string(tok[0]) + "'");
    const auto uvar = static_cast<std::size_t>(var);
    if (seen[uvar]) throw ParseError(source, line_no, "duplicate variable '" + std::string(tok[0]) + "'");
    double value = 0.0;
    if (!parse_double(tok[1], value)) {
      throw ParseError(source, line_no, "invalid value '" + std::string(tok[1]) + "'");
    }
    solution.x[uvar] = value;
    seen[uvar] = true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!seen[j]) {
      throw InputError(source + ": missing value for variable '" +
                       problem.variable(static_cast<int>(j)).name + "'");
    }
  }
  if (!have_objective) solution.objective = objective_value(problem, solution.x);
  return solution;
}

RawSolution read_external_solution(const std::filesystem::path& path, const LpProblem& problem) {
  return parse_external_solution(read_file(path), problem, path.string());
}

FeasibilityReport validate_solution(const LpProblem& problem, std::span<const double> x,
                                    double tolerance) {
  if (x.size() != static_cast<std::size_t>(problem.num_variables())) {
    throw InputError("solution has " + std::to_string(x.size()) + " values, problem has " +
                     std::to_string(problem.num_variables()) + " variables");
  }
  FeasibilityReport report;
  report.tolerance = tolerance;
  for (int j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(j);
    const double xj = x[static_cast<std::size_t>(j)];
    double violation = 0.0;
    double scale = 1.0;
    if (xj < v.lower) {
      violation = v.lower - xj;
      scale = std::max(1.0, std::abs(v.lower));
    } else if (xj > v.upper) {
      violation = xj - v.upper;
      scale = std::max(1.0, std::abs(v.upper));
    }
    if (std::isnan(xj)) violation = kInf;
    report.max_bound_violation = std::max(report.max_bound_violation, violation);
    if (violation / scale > report.max_relative_bound_violation) {
      report.max_relative_bound_violation = violation / scale;
      report.worst_variable = j;
    }
  }
  for (int i = 0; i < problem.num_rows(); ++i) {
    const Row& row = problem.row(i);
    double activity = 0.0;
    double magnitude = std::max(1.0, std::abs(row.rhs));
    for (const Entry& e : row.entries) {
      const double term = e.value * x[static_cast<std::size_t>(e.index)];
      activity += term;
      magnitude = std::max(magnitude, std::abs(term));
    }
    double residual = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual: residual = std::max(0.0, activity - row.rhs); break;
      case RowSense::kGreaterEqual: residual = std::max(0.0, row.rhs - activity); break;
      case RowSense::kEqual: residual = std::abs(activity - row.rhs); break;
    }
    if (std::isnan(activity)) residual = kInf;
    report.max_row_residual = std::max(report.max_row_residual, residual);
    if (residual / magnitude > report.max_relative_row_residual) {
      report.max_relative_row_residual = residual / magnitude;
      report.worst_row = i;
    }
  }
  report.objective = objective_value(problem, x);
  report.pass = report.max_relative_bound_violation <= tolerance &&
                report.max_relative_row_residual <= tolerance;
  return report;
}

}  // namespace bevpsm::lp
