#pragma once

#include <utility>
#include <vector>

#include "kadapt/instance.hpp"

namespace kadapt {

/// Classical min-max robust optimum with its minimizer and the per-threshold
/// audit trail (threshold, total value).
struct MinMaxResult {
  double value = 0.0;
  Solution minimizer;
  std::vector<std::pair<double, double>> breakdown;
};

/// Min-max robust optimum by threshold decomposition: for each τ in the
/// sorted distinct deviations plus zero, solve the deterministic problem with
/// weights ĉ_i + max(0, d_i − τ) and add Γτ; the best threshold wins.
/// Requires an integer Γ (the decomposition is stated for integer budgets).
MinMaxResult solve_minmax(const BudgetedInstance& inst);

}  // namespace kadapt
