// Copyright 2026 The bevpsm Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only oracles for the LP engine. Nothing here calls the simplex code.

#ifndef BEVPSM_TESTS_LP_ORACLES_HPP
#define BEVPSM_TESTS_LP_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bevpsm/lp_problem.hpp"
#include "bevpsm/rng.hpp"

namespace bevpsm::testing {

struct VertexOptimum {
  double objective = 0.0;
  std::vector<double> x;
};

// Solves a dense n x n system by Gaussian elimination with partial pivoting.
// Returns nullopt when the matrix is (numerically) singular.
inline std::optional<std::vector<double>> dense_solve(std::vector<std::vector<double>> a,
                                                      std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-10) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a[k][c] * x[c];
    x[k] = s / a[k][k];
  }
  return x;
}

// Exhaustive vertex enumeration: every choice of n linearly independent
// constraints (rows as equalities, finite variable bounds) defines a
// candidate point; the best feasible candidate is the optimum of a bounded LP.
// Equality rows are enforced by the feasibility filter, so duplicated
// equalities do not hide vertices.
inline std::optional<VertexOptimum> enumerate_vertices(const lp::LpProblem& p,
                                                       double feas_tol = 1e-9) {
  const int n = p.num_variables();
  struct Hyperplane {
    std::vector<double> a;
    double b;
  };
  std::vector<Hyperplane> planes;
  for (int i = 0; i < p.num_rows(); ++i) {
    Hyperplane h{std::vector<double>(static_cast<std::size_t>(n), 0.0), p.row(i).rhs};
    for (const auto& e : p.row(i).entries) h.a[static_cast<std::size_t>(e.index)] = e.value;
    planes.push_back(std::move(h));
  }
  for (int j = 0; j < n; ++j) {
    for (double bound : {p.variable(j).lower, p.variable(j).upper}) {
      if (!std::isfinite(bound)) continue;
      Hyperplane h{std::vector<double>(static_cast<std::size_t>(n), 0.0), bound};
      h.a[static_cast<std::size_t>(j)] = 1.0;
      planes.push_back(std::move(h));
    }
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      const auto& v = p.variable(j);
      const double xj = x[static_cast<std::size_t>(j)];
      if (xj < v.lower - feas_tol * (1 + std::abs(v.lower))) return false;
      if (xj > v.upper + feas_tol * (1 + std::abs(v.upper))) return false;
    }
    for (int i = 0; i < p.num_rows(); ++i) {
      const auto& row = p.row(i);
      const double act = lp::row_activity(row, x);
      const double tol = feas_tol * (1 + std::abs(row.rhs)) * 10;
      if (row.sense != lp::RowSense::kGreaterEqual && act > row.rhs + tol) return false;
      if (row.sense != lp::RowSense::kLessEqual && act < row.rhs - tol) return false;
    }
    return true;
  };

  std::optional<VertexOptimum> best;
  const int total = static_cast<int>(planes.size());
  if (n == 0) return VertexOptimum{0.0, {}};
  if (total < n) return std::nullopt;
  std::vector<int> choice(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) choice[static_cast<std::size_t>(k)] = k;
  while (true) {
    {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int idx : choice) {
        a.push_back(planes[static_cast<std::size_t>(idx)].a);
        b.push_back(planes[static_cast<std::size_t>(idx)].b);
      }
      if (auto x = dense_solve(a, b); x && feasible(*x)) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += p.variable(j).cost * (*x)[static_cast<std::size_t>(j)];
        if (!best || obj < best->objective) best = VertexOptimum{obj, *x};
      }
    }
    // Next combination.
    int k = n - 1;
    while (k >= 0 && choice[static_cast<std::size_t>(k)] == total - n + k) --k;
    if (k < 0) break;
    ++choice[static_cast<std::size_t>(k)];
    for (int r = k + 1; r < n; ++r) {
      choice[static_cast<std::size_t>(r)] = choice[static_cast<std::size_t>(r - 1)] + 1;
    }
  }
  return best;
}

// Random bounded LP with at most `max_vars` variables and `max_rows` rows. A
// random point inside the bounds satisfies every row, so the LP is feasible.
inline lp::LpProblem random_bounded_lp(Rng& rng, int max_vars = 8, int max_rows = 8) {
  lp::LpProblem p("random");
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_vars)));
  const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_rows)));
  std::vector<double> interior;
  for (int j = 0; j < n; ++j) {
    const double lower = rng.bernoulli(0.7) ? 0.0 : -std::round(rng.uniform(0, 5));
    const double upper = lower + 1.0 + std::round(rng.uniform(0, 9));
    const double cost = std::round(rng.uniform(-10, 10) * 4) / 4;
    p.add_variable("x" + std::to_string(j), lower, upper, cost);
    interior.push_back(rng.uniform(lower, upper));
  }
  int equalities = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Entry> entries;
    double activity = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng.bernoulli(0.3)) continue;
      const double a = std::round(rng.uniform(-5, 5) * 2) / 2;
      if (a == 0.0) continue;
      entries.push_back({j, a});
      activity += a * interior[static_cast<std::size_t>(j)];
    }
    if (entries.empty()) {
      entries.push_back({0, 1.0});
      activity = interior[0];
    }
    const double pick = rng.uniform();
    lp::RowSense sense = lp::RowSense::kLessEqual;
    double rhs = std::ceil(activity + rng.uniform(0, 3));
    if (pick < 0.3) {
      sense = lp::RowSense::kGreaterEqual;
      rhs = std::floor(activity - rng.uniform(0, 3));
    } else if (pick < 0.4 && equalities < 2 && n > 1) {
      sense = lp::RowSense::kEqual;
      rhs = activity;
      ++equalities;
    }
    p.add_row("r" + std::to_string(i), sense, rhs, std::move(entries));
  }
  return p;
}

// Random LP with every bound kind, row sense and awkward names; not
// necessarily feasible.
inline lp::LpProblem random_lp(Rng& rng, const std::string& name) {
  lp::LpProblem p(name);
  const int n = 1 + static_cast<int>(rng.below(12));
  for (int j = 0; j < n; ++j) {
    double lower = 0.0;
    double upper = lp::kInf;
    switch (rng.below(6)) {
      case 0: break;
      case 1: upper = rng.uniform(0, 10); break;
      case 2: lower = -rng.uniform(0, 10); upper = rng.uniform(0, 10); break;
      case 3: lower = -lp::kInf; break;
      case 4: lower = -lp::kInf; upper = rng.normal(); break;
      default: lower = upper = rng.normal(); break;
    }
    p.add_variable("var_" + std::to_string(j) + "[a,b]", lower, upper,
                   rng.bernoulli(0.3) ? 0.0 : rng.normal() * 1e3);
  }
  const int m = static_cast<int>(rng.below(10));
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Entry> entries;
    for (int j = 0; j < n; ++j) {
      if (rng.bernoulli(0.5)) entries.push_back({j, rng.normal() / 3.0});
    }
    p.add_row("row_" + std::to_string(i), static_cast<lp::RowSense>("LGE"[rng.below(3)]),
              rng.bernoulli(0.2) ? 0.0 : rng.normal() * 1e5, std::move(entries));
  }
  return p;
}

}  // namespace bevpsm::testing

#endif  // BEVPSM_TESTS_LP_ORACLES_HPP
