#pragma once

#include <cstddef>
#include <vector>

#include "kadapt/common.hpp"

namespace kadapt {

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LinearRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// Dense linear program  min cᵀx  subject to row constraints and per-variable
/// bounds; bounds may be infinite. Values are immutable once handed to
/// solve_lp and may be shared across threads.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  /// n variables with bounds [lo, up] and zero objective.
  explicit LinearProgram(std::size_t n, double lo = 0.0, double up = kInf)
      : objective(n, 0.0), lower(n, lo), upper(n, up) {}

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    rows.push_back(LinearRow{std::move(coeffs), sense, rhs});
  }
  void set_bounds(std::size_t j, double lo, double up) {
    lower[j] = lo;
    upper[j] = up;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

/// Row duals follow the sensitivity convention y_i = d(optimal value)/d(rhs_i):
/// a binding ≤-row of a minimization problem has y_i ≤ 0, a ≥-row has y_i ≥ 0.
struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;
  long pivots = 0;
};

/// Two-phase bounded-variable primal simplex (dense tableau). Anti-cycling by
/// Bland's rule after 5·(rows+cols) consecutive degenerate pivots; hard pivot
/// cap of 10^6 yields LpStatus::NumericalFailure.
LpSolution solve_lp(const LinearProgram& lp);

/// Residuals of a claimed optimal solution: primal feasibility (rows and
/// bounds), complementary slackness, and |primal obj - dual obj|.
struct LpResiduals {
  double feasibility = 0.0;
  double complementary_slackness = 0.0;
  double duality_gap = 0.0;
};
LpResiduals lp_residuals(const LinearProgram& lp, const LpSolution& sol);

}  // namespace kadapt
