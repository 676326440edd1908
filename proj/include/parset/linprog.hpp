#pragma once

#include <vector>

namespace parset {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Minimize c.x subject to A x = b, x >= 0.
// Dense two-phase simplex with Bland's rule; sized for the small systems
// produced by gauge and support queries (tens of variables at most).
LpResult solve_standard_lp(const std::vector<std::vector<double>>& A,
                           std::vector<double> b,
                           const std::vector<double>& c);

}  // namespace parset
