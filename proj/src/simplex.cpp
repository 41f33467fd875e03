// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

#include "bevpsm/simplex.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>

#include "bevpsm/errors.hpp"

namespace bevpsm::lp {

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration-limit";
    case SolveStatus::kTimeLimit: return "time-limit";
    case SolveStatus::kNumericalError: return "numerical-error";
  }
  return "unknown";
}

SolveStatus parse_status(std::string_view name) {
  for (SolveStatus s : {SolveStatus::kOptimal, SolveStatus::kInfeasible, SolveStatus::kUnbounded,
                        SolveStatus::kIterationLimit, SolveStatus::kTimeLimit,
                        SolveStatus::kNumericalError}) {
    if (status_name(s) == name) return s;
  }
  throw InputError("unknown solve status '" + std::string(name) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// One product-form update: new B^-1 = T^-1 old B^-1 where T is the identity
// with column `row` replaced by the entering column alpha.
struct Eta {
  int row = 0;
  double pivot = 0.0;
  std::vector<int> index;
  std::vector<double> value;  // alpha_i for i != row
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit, kTimeLimit, kNumericalError };

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardLp& lp, const SimplexOptions& options)
      : lp_(lp), options_(options), start_(Clock::now()) {}

  RawSolution run();

 private:
  void load_columns();
  void initial_basis();
  bool refactor();
  void recompute_basics();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  void compute_duals(const std::vector<double>& costs, Eigen::VectorXd& y) const;
  double reduced_cost(int j, const std::vector<double>& costs, const Eigen::VectorXd& y) const;
  PhaseResult iterate(const std::vector<double>& costs);
  double tolerance_for(double bound) const {
    return options_.primal_tolerance * (1.0 + std::abs(bound));
  }
  double max_primal_infeasibility() const;
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  const StandardLp& lp_;
  SimplexOptions options_;
  Clock::time_point start_;

  int m_ = 0;
  int n_ = 0;      // structural + slack columns
  int total_ = 0;  // plus artificials
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> head_;

  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;

  long iterations_ = 0;
  long degenerate_ = 0;
  long bland_pivots_ = 0;
  long consecutive_degenerate_ = 0;
  bool bland_mode_ = false;
};

void RevisedSimplex::load_columns() {
  m_ = lp_.num_rows();
  n_ = lp_.num_columns();
  col_start_.assign(1, 0);
  for (int j = 0; j < n_; ++j) {
    for (SparseMatrix::InnerIterator it(lp_.matrix, j); it; ++it) {
      if (it.value() == 0.0) continue;
      row_index_.push_back(static_cast<int>(it.row()));
      value_.push_back(it.value());
    }
    col_start_.push_back(static_cast<int>(row_index_.size()));
  }
  lower_.resize(static_cast<std::size_t>(n_));
  upper_.resize(static_cast<std::size_t>(n_));
  cost_.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    lower_[static_cast<std::size_t>(j)] = lp_.lower[j];
    upper_[static_cast<std::size_t>(j)] = lp_.upper[j];
    cost_[static_cast<std::size_t>(j)] = lp_.cost[j];
  }
}

void RevisedSimplex::initial_basis() {
  x_.assign(static_cast<std::size_t>(n_), 0.0);
  state_.assign(static_cast<std::size_t>(n_), VarState::kAtLower);
  for (int j = 0; j < n_; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (std::isfinite(lower_[uj])) {
      x_[uj] = lower_[uj];
      state_[uj] = VarState::kAtLower;
    } else if (std::isfinite(upper_[uj])) {
      x_[uj] = upper_[uj];
      state_[uj] = VarState::kAtUpper;
    } else {
      x_[uj] = 0.0;
      state_[uj] = VarState::kFree;
    }
  }
  // Residual of the rows with every slack at zero.
  std::vector<double> residual(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) residual[static_cast<std::size_t>(i)] = lp_.rhs[i];
  for (int j = 0; j < lp_.num_structural; ++j) {
    const double xj = x_[static_cast<std::size_t>(j)];
    if (xj == 0.0) continue;
    for (int k = col_start_[static_cast<std::size_t>(j)];
         k < col_start_[static_cast<std::size_t>(j) + 1]; ++k) {
      residual[static_cast<std::size_t>(row_index_[static_cast<std::size_t>(k)])] -=
          value_[static_cast<std::size_t>(k)] * xj;
    }
  }
  head_.assign(static_cast<std::size_t>(m_), -1);
  total_ = n_;
  for (int i = 0; i < m_; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int slack = lp_.row_slack[ui];
    if (slack >= 0) {
      const double sign = value_[static_cast<std::size_t>(col_start_[static_cast<std::size_t>(slack)])];
      const double needed = residual[ui] / sign;
      const auto us = static_cast<std::size_t>(slack);
      if (needed >= lower_[us] && needed <= upper_[us]) {
        head_[ui] = slack;
        state_[us] = VarState::kBasic;
        x_[us] = needed;
        continue;
      }
    }
    // Artificial column: +-e_i with value |residual|.
    const double sign = residual[ui] >= 0.0 ? 1.0 : -1.0;
    row_index_.push_back(i);
    value_.push_back(sign);
    col_start_.push_back(static_cast<int>(row_index_.size()));
    lower_.push_back(0.0);
    upper_.push_back(kInf);
    cost_.push_back(0.0);
    x_.push_back(std::abs(residual[ui]));
    state_.push_back(VarState::kBasic);
    head_[ui] = total_++;
  }
}

bool RevisedSimplex::refactor() {
  etas_.clear();
  if (m_ == 0) return true;
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 3);
  for (int k = 0; k < m_; ++k) {
    const int j = head_[static_cast<std::size_t>(k)];
    for (int p = col_start_[static_cast<std::size_t>(j)];
         p < col_start_[static_cast<std::size_t>(j) + 1]; ++p) {
      triplets.emplace_back(row_index_[static_cast<std::size_t>(p)], k,
                            value_[static_cast<std::size_t>(p)]);
    }
  }
  SparseMatrix basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  return lu_.info() == Eigen::Success;
}

void RevisedSimplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const Eta& eta : etas_) {
    const double xr = v[eta.row] / eta.pivot;
    if (xr != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * xr;
    }
    v[eta.row] = xr;
  }
}

void RevisedSimplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v[it->index[k]];
    v[it->row] = acc / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void RevisedSimplex::recompute_basics() {
  if (m_ == 0) return;
  Eigen::VectorXd r(m_);
  for (int i = 0; i < m_; ++i) r[i] = lp_.rhs[i];
  for (int j = 0; j < total_; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (state_[uj] == VarState::kBasic || x_[uj] == 0.0) continue;
    for (int p = col_start_[uj]; p < col_start_[uj + 1]; ++p) {
      r[row_index_[static_cast<std::size_t>(p)]] -= value_[static_cast<std::size_t>(p)] * x_[uj];
    }
  }
  ftran(r);
  for (int k = 0; k < m_; ++k) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(k)])] = r[k];
}

void RevisedSimplex::compute_duals(const std::vector<double>& costs, Eigen::VectorXd& y) const {
  y.resize(m_);
  for (int k = 0; k < m_; ++k) y[k] = costs[static_cast<std::size_t>(head_[static_cast<std::size_t>(k)])];
  btran(y);
}

double RevisedSimplex::reduced_cost(int j, const std::vector<double>& costs,
                                    const Eigen::VectorXd& y) const {
  const auto uj = static_cast<std::size_t>(j);
  double d = costs[uj];
  for (int p = col_start_[uj]; p < col_start_[uj + 1]; ++p) {
    d -= y[row_index_[static_cast<std::size_t>(p)]] * value_[static_cast<std::size_t>(p)];
  }
  return d;
}

double RevisedSimplex::max_primal_infeasibility() const {
  double worst = 0.0;
  for (int k = 0; k < m_; ++k) {
    const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(k)]);
    const double below = (lower_[j] - x_[j]) / (1.0 + std::abs(lower_[j]));
    const double above = (x_[j] - upper_[j]) / (1.0 + std::abs(upper_[j]));
    worst = std::max({worst, below, above});
  }
  return worst;
}

PhaseResult RevisedSimplex::iterate(const std::vector<double>& costs) {
  double cost_scale = 1.0;
  for (double c : costs) cost_scale = std::max(cost_scale, std::abs(c));
  const double dual_tol = options_.dual_tolerance * cost_scale;
  const long bland_threshold =
      static_cast<long>(std::ceil(options_.bland_after_degenerate_rows * std::max(1, m_)));
  Eigen::VectorXd y;
  Eigen::VectorXd alpha;
  bool verified = false;

  while (true) {
    if (iterations_ >= options_.max_iterations) return PhaseResult::kIterationLimit;
    if ((iterations_ & 63) == 0 && elapsed() > options_.time_limit_seconds) {
      return PhaseResult::kTimeLimit;
    }
    if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
      if (!refactor()) return PhaseResult::kNumericalError;
      recompute_basics();
    }

    compute_duals(costs, y);

    // Pricing: Dantzig (largest |d_j|), or Bland (lowest eligible index).
    int entering = -1;
    double entering_d = 0.0;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const VarState s = state_[uj];
      if (s == VarState::kBasic || lower_[uj] == upper_[uj]) continue;
      const double d = reduced_cost(j, costs, y);
      const bool eligible = (d < -dual_tol && (s == VarState::kAtLower || s == VarState::kFree)) ||
                            (d > dual_tol && (s == VarState::kAtUpper || s == VarState::kFree));
      if (!eligible) continue;
      if (bland_mode_) {
        entering = j;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        entering_d = d;
      }
    }
    if (entering < 0) {
      if (!verified && !etas_.empty()) {
        // Confirm optimality on a fresh factorization before stopping.
        if (!refactor()) return PhaseResult::kNumericalError;
        recompute_basics();
        verified = true;
        continue;
      }
      return PhaseResult::kOptimal;
    }
    verified = false;

    const auto uq = static_cast<std::size_t>(entering);
    alpha = Eigen::VectorXd::Zero(m_);
    for (int p = col_start_[uq]; p < col_start_[uq + 1]; ++p) {
      alpha[row_index_[static_cast<std::size_t>(p)]] = value_[static_cast<std::size_t>(p)];
    }
    ftran(alpha);
    const double dir = entering_d < 0.0 ? 1.0 : -1.0;

    // Ratio test. Basic variable k moves by delta_k * theta.
    const double flip = upper_[uq] - lower_[uq];  // inf when either bound is infinite
    int leaving = -1;
    double theta = kInf;
    if (!bland_mode_) {
      // Harris two-pass: bound with tolerances, then the largest pivot.
      double theta_max = kInf;
      for (int k = 0; k < m_; ++k) {
        const double a = alpha[k];
        if (std::abs(a) <= options_.pivot_tolerance) continue;
        const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(k)]);
        const double delta = -dir * a;
        double t = kInf;
        if (delta < 0.0 && std::isfinite(lower_[j])) {
          t = (x_[j] - lower_[j] + tolerance_for(lower_[j])) / -delta;
        } else if (delta > 0.0 && std::isfinite(upper_[j])) {
          t = (upper_[j] - x_[j] + tolerance_for(upper_[j])) / delta;
        }
        theta_max = std::min(theta_max, t);
      }
      if (flip <= theta_max) {
        theta = flip;
      } else if (std::isfinite(theta_max)) {
        double best_pivot = 0.0;
        for (int k = 0; k < m_; ++k) {
          const double a = alpha[k];
          if (std::abs(a) <= options_.pivot_tolerance) continue;
          const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(k)]);
          const double delta = -dir * a;
          double t = kInf;
          if (delta < 0.0 && std::isfinite(lower_[j])) {
            t = (x_[j] - lower_[j]) / -delta;
          } else if (delta > 0.0 && std::isfinite(upper_[j])) {
            t = (upper_[j] - x_[j]) / delta;
          }
          if (t <= theta_max && std::abs(a) > best_pivot) {
            best_pivot = std::abs(a);
            leaving = k;
            theta = std::max(t, 0.0);
          }
        }
      }
    } else {
      // Textbook minimum ratio; ties go to the lowest column index.
      double min_ratio = kInf;
      for (int k = 0; k < m_; ++k) {
        const double a = alpha[k];
        if (std::abs(a) <= options_.pivot_tolerance) continue;
        const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(k)]);
        const double delta = -dir * a;
        double t = kInf;
        if (delta < 0.0 && std::isfinite(lower_[j])) {
          t = std::max((x_[j] - lower_[j]) / -delta, 0.0);
        } else if (delta > 0.0 && std::isfinite(upper_[j])) {
          t = std::max((upper_[j] - x_[j]) / delta, 0.0);
        }
        if (!std::isfinite(t)) continue;
        if (leaving < 0) {
          min_ratio = t;
          leaving = k;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, min_ratio);
        if (t < min_ratio - tie ||
            (std::abs(t - min_ratio) <= tie && leaving >= 0 &&
             head_[static_cast<std::size_t>(k)] < head_[static_cast<std::size_t>(leaving)])) {
          min_ratio = std::min(t, min_ratio);
          leaving = k;
        }
      }
      if (flip <= min_ratio) {
        leaving = -1;
        theta = flip;
      } else {
        theta = min_ratio;
      }
    }

    if (!std::isfinite(theta)) return PhaseResult::kUnbounded;

    ++iterations_;
    if (bland_mode_) ++bland_pivots_;
    if (theta <= 1e-12) {
      ++degenerate_;
      if (++consecutive_degenerate_ >= bland_threshold) bland_mode_ = true;
    } else {
      consecutive_degenerate_ = 0;
      bland_mode_ = false;
    }

    // Primal update.
    if (theta != 0.0) {
      x_[uq] += dir * theta;
      for (int k = 0; k < m_; ++k) {
        if (alpha[k] != 0.0) {
          x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(k)])] -= dir * alpha[k] * theta;
        }
      }
    }
    if (leaving < 0) {
      // Bound flip of the entering variable, no basis change.
      if (dir > 0) {
        x_[uq] = upper_[uq];
        state_[uq] = VarState::kAtUpper;
      } else {
        x_[uq] = lower_[uq];
        state_[uq] = VarState::kAtLower;
      }
      continue;
    }

    const auto ul = static_cast<std::size_t>(leaving);
    const auto out = static_cast<std::size_t>(head_[ul]);
    const double delta_out = -dir * alpha[leaving];
    if (delta_out < 0.0) {
      x_[out] = lower_[out];
      state_[out] = VarState::kAtLower;
    } else {
      x_[out] = upper_[out];
      state_[out] = VarState::kAtUpper;
    }
    head_[ul] = entering;
    state_[uq] = VarState::kBasic;

    Eta eta;
    eta.row = leaving;
    eta.pivot = alpha[leaving];
    for (int k = 0; k < m_; ++k) {
      if (k != leaving && alpha[k] != 0.0) {
        eta.index.push_back(k);
        eta.value.push_back(alpha[k]);
      }
    }
    etas_.push_back(std::move(eta));
  }
}

RawSolution RevisedSimplex::run() {
  RawSolution result;
  load_columns();
  initial_basis();

  auto finish = [&](SolveStatus status) {
    result.status = status;
    result.iterations = iterations_;
    result.degenerate_pivots = degenerate_;
    result.bland_pivots = bland_pivots_;
    result.x.assign(x_.begin(), x_.begin() + n_);
    double objective = 0.0;
    for (int j = 0; j < n_; ++j) objective += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    result.objective = objective;
    result.solve_seconds = elapsed();
    return result;
  };

  if (!refactor()) return finish(SolveStatus::kNumericalError);

  auto map_phase = [](PhaseResult r) {
    switch (r) {
      case PhaseResult::kIterationLimit: return SolveStatus::kIterationLimit;
      case PhaseResult::kTimeLimit: return SolveStatus::kTimeLimit;
      case PhaseResult::kUnbounded: return SolveStatus::kUnbounded;
      default: return SolveStatus::kNumericalError;
    }
  };

  double rhs_scale = 1.0;
  for (int i = 0; i < m_; ++i) rhs_scale = std::max(rhs_scale, std::abs(lp_.rhs[i]));

  if (total_ > n_) {
    std::vector<double> phase_one(static_cast<std::size_t>(total_), 0.0);
    std::fill(phase_one.begin() + n_, phase_one.end(), 1.0);
    const PhaseResult r = iterate(phase_one);
    result.phase_one_iterations = iterations_;
    if (r != PhaseResult::kOptimal) {
      // Phase one is bounded below by zero, so unbounded means numerics.
      return finish(r == PhaseResult::kUnbounded ? SolveStatus::kNumericalError : map_phase(r));
    }
    double infeasibility = 0.0;
    for (int j = n_; j < total_; ++j) infeasibility += x_[static_cast<std::size_t>(j)];
    if (infeasibility > 1e-7 * rhs_scale) return finish(SolveStatus::kInfeasible);
    for (int j = n_; j < total_; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      upper_[uj] = 0.0;
      if (state_[uj] != VarState::kBasic) {
        x_[uj] = 0.0;
        state_[uj] = VarState::kAtLower;
      }
    }
    bland_mode_ = false;
    consecutive_degenerate_ = 0;
  }

  std::vector<double> phase_two(cost_);
  phase_two.resize(static_cast<std::size_t>(total_), 0.0);
  const PhaseResult r = iterate(phase_two);
  if (r != PhaseResult::kOptimal) return finish(map_phase(r));

  if (!refactor()) return finish(SolveStatus::kNumericalError);
  recompute_basics();
  if (max_primal_infeasibility() > 1e-6) return finish(SolveStatus::kNumericalError);

  Eigen::VectorXd y;
  compute_duals(phase_two, y);
  result.row_duals.assign(y.data(), y.data() + m_);
  result.reduced_costs.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) result.reduced_costs[static_cast<std::size_t>(j)] = reduced_cost(j, phase_two, y);
  result.basis.resize(static_cast<std::size_t>(m_));
  for (int k = 0; k < m_; ++k) {
    const int j = head_[static_cast<std::size_t>(k)];
    result.basis[static_cast<std::size_t>(k)] = j < n_ ? j : -1;
  }
  return finish(SolveStatus::kOptimal);
}

}  // namespace

RawSolution solve_simplex(const StandardLp& standard, const SimplexOptions& options) {
  RawSolution first = RevisedSimplex(standard, options).run();
  if (first.status != SolveStatus::kNumericalError) return first;
  // Retry once with more frequent refactorization.
  SimplexOptions tighter = options;
  tighter.refactor_interval = std::max(1, options.refactor_interval / 5);
  RawSolution second = RevisedSimplex(standard, tighter).run();
  second.iterations += first.iterations;
  second.solve_seconds += first.solve_seconds;
  return second;
}

RawSolution solve(const LpProblem& problem, const SimplexOptions& options) {
  const StandardLp standard = to_standard_form(problem);
  RawSolution solution = solve_simplex(standard, options);
  const auto n = static_cast<std::size_t>(problem.num_variables());
  solution.x.resize(n);
  if (!solution.reduced_costs.empty()) solution.reduced_costs.resize(n);
  return solution;
}

double dual_objective(const StandardLp& standard, const std::vector<double>& row_duals,
                      double dual_feasibility_tolerance) {
  const int m = standard.num_rows();
  if (static_cast<int>(row_duals.size()) != m) throw InputError("dual vector has wrong length");
  double value = 0.0;
  for (int i = 0; i < m; ++i) value += row_duals[static_cast<std::size_t>(i)] * standard.rhs[i];
  for (int j = 0; j < standard.num_columns(); ++j) {
    double d = standard.cost[j];
    for (SparseMatrix::InnerIterator it(standard.matrix, j); it; ++it) {
      d -= row_duals[static_cast<std::size_t>(it.row())] * it.value();
    }
    if (std::abs(d) <= dual_feasibility_tolerance) continue;
    const double bound = d > 0 ? standard.lower[j] : standard.upper[j];
    if (!std::isfinite(bound)) return -kInf;
    value += d * bound;
  }
  return value;
}

}  // namespace bevpsm::lp
