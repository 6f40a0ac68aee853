#pragma once

#include <optional>
#include <vector>

#include "kadapt/instance.hpp"

namespace kadapt {

/// Dual block of the nonlinear formulation: simplex weights α, the budget
/// multiplier θ ≥ 0, and the per-item excesses γ ≥ 0.
struct DualBlock {
  std::vector<double> alpha;
  double theta = 0.0;
  std::vector<double> gamma_vec;
};

struct LsStep {
  enum Kind { XStep, AlphaStep } kind = XStep;
  double value = 0.0;
  double millis = 0.0;
};

/// Search trace: per-step values are nonincreasing; per-round values (the
/// α-step value closing each round) decrease strictly until the final round.
struct LsState {
  KTuple tuple;
  DualBlock dual;
  double value = 0.0;
  std::vector<LsStep> log;
  std::vector<double> round_values;
  bool x_step_time_limited = false;
};

struct XStepOptions {
  double time_limit = kInf;  // seconds for the MIP
  const KTuple* warm_start = nullptr;
};

struct XStepResult {
  KTuple tuple;
  double theta = 0.0;
  std::vector<double> gamma_vec;
  double value = 0.0;        // Σ_j α_j ĉᵀx^(j) + Γθ + Σγ of the returned tuple
  bool time_limited = false;
};

/// The x-step MIP: k ground copies with fixed simplex weights α, coupled
/// through (γ, θ). On a time limit the incumbent is returned with a flag.
XStepResult x_step(const BudgetedInstance& inst, const std::vector<double>& alpha,
                   const XStepOptions& opts = {});

/// The α-step LP over (α, γ, θ) with the tuple fixed; its value equals
/// cost_of_tuple(t).
std::pair<DualBlock, double> alpha_step(const BudgetedInstance& inst, const KTuple& t);

struct LsOptions {
  double x_time_limit = 300.0;  // seconds per x-step
  double tol = 1e-9;            // absolute improvement threshold
  std::optional<std::vector<double>> initial_alpha;
};

struct LsResult {
  KTuple tuple;
  double value = 0.0;
  LsState state;
};

/// Alternating local search: x-steps and α-steps from α̃_j = 2j/(k(k+1))
/// until a round no longer improves by more than tol. Each x-step is
/// warm-started with the previous tuple; the reported value is the final
/// α-step value (the exact cost of the returned tuple).
LsResult local_search(const BudgetedInstance& inst, int k, const LsOptions& opts = {});

}  // namespace kadapt
