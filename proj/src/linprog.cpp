#include "parset/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace parset {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

struct Tableau {
  std::size_t m, n;                   // constraints, structural + artificial vars
  std::vector<std::vector<double>> t; // m rows, n + 1 columns (rhs last)
  std::vector<double> z;              // reduced-cost row, n + 1 entries
  std::vector<std::size_t> basis;     // basis[i] = column basic in row i

  void pivot(std::size_t row, std::size_t col) {
    double piv = t[row][col];
    for (std::size_t j = 0; j <= n; ++j) t[row][j] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0.0) continue;
      double f = t[i][col];
      for (std::size_t j = 0; j <= n; ++j) t[i][j] -= f * t[row][j];
    }
    if (z[col] != 0.0) {
      double f = z[col];
      for (std::size_t j = 0; j <= n; ++j) z[j] -= f * t[row][j];
    }
    basis[row] = col;
  }

  void load_costs(const std::vector<double>& cost) {
    z.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < cost.size(); ++j) z[j] = cost[j];
    for (std::size_t i = 0; i < m; ++i) {
      double cb = basis[i] < cost.size() ? cost[basis[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n; ++j) z[j] -= cb * t[i][j];
    }
  }

  // Bland's rule; columns >= limit are barred from entering.
  LpStatus run(std::size_t limit) {
    for (;;) {
      std::size_t enter = n;
      for (std::size_t j = 0; j < limit; ++j) {
        if (z[j] < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == n) return LpStatus::optimal;

      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] > kPivotTol) {
          double ratio = t[i][n] / t[i][enter];
          if (ratio < best - kPivotTol ||
              (ratio < best + kPivotTol && (leave == m || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) return LpStatus::unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_standard_lp(const std::vector<std::vector<double>>& A,
                           std::vector<double> b,
                           const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t nv = c.size();
  for (const auto& row : A)
    if (row.size() != nv) throw std::invalid_argument("solve_standard_lp: ragged constraint matrix");
  if (b.size() != m) throw std::invalid_argument("solve_standard_lp: rhs size mismatch");

  Tableau tab;
  tab.m = m;
  tab.n = nv + m;  // structural + one artificial per row
  tab.t.assign(m, std::vector<double>(tab.n + 1, 0.0));
  tab.basis.resize(m);

  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) tab.t[i][j] = sign * A[i][j];
    tab.t[i][nv + i] = 1.0;
    tab.t[i][tab.n] = sign * b[i];
    scale = std::max(scale, std::abs(b[i]));
    tab.basis[i] = nv + i;
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<double> cost1(tab.n, 0.0);
  for (std::size_t j = nv; j < tab.n; ++j) cost1[j] = 1.0;
  tab.load_costs(cost1);
  tab.run(tab.n);

  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] >= nv) infeas += tab.t[i][tab.n];
  if (infeas > 1e-7 * scale) return {LpStatus::infeasible, 0.0, {}};

  // Drive leftover zero-valued artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < nv) continue;
    for (std::size_t j = 0; j < nv; ++j) {
      if (std::abs(tab.t[i][j]) > kPivotTol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 with the real costs; artificials may not re-enter.
  tab.load_costs(c);
  LpStatus st = tab.run(nv);
  if (st == LpStatus::unbounded) return {LpStatus::unbounded, 0.0, {}};

  LpResult res;
  res.status = LpStatus::optimal;
  res.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < nv) res.x[tab.basis[i]] = tab.t[i][tab.n];
  res.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace parset
