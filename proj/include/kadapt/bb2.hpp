#pragma once

#include <optional>
#include <vector>

#include "kadapt/instance.hpp"
#include "kadapt/local_search.hpp"

namespace kadapt {

/// Value of one pair at a convex weight: α·ĉᵀx + (1-α)·ĉᵀy + ||α·d∘x + (1-α)·d∘y||^(Γ).
double eval_g(const BudgetedInstance& inst, const Solution& x, const Solution& y, double alpha);

/// Data-only envelopes of the subgradient of g in α:
///   low = ĉᵀx - ĉᵀy - ||d∘y||^(Γ),  up = ĉᵀx - ĉᵀy + ||d∘x||^(Γ).
std::pair<double, double> eval_subgradient_bounds(const BudgetedInstance& inst,
                                                  const Solution& x, const Solution& y);

/// h(α): the optimal pair at a fixed weight α ∈ [0, 0.5].
struct SubEval {
  double alpha = 0.0;
  double value = 0.0;
  KTuple pair;
  double theta = 0.0;
  std::vector<double> gamma_vec;
};
SubEval solve_sub(const BudgetedInstance& inst, double alpha, const KTuple* warm = nullptr);

/// Interval lower-bound subproblems. `value` is the MIP optimum and `slope`
/// the matching subgradient envelope at the (raw) optimizer pair.
struct LowerResult {
  KTuple pair;
  double value = 0.0;
  double slope = 0.0;
};
LowerResult lower_problem_left(const BudgetedInstance& inst, double alpha1, double alpha2);
LowerResult lower_problem_right(const BudgetedInstance& inst, double alpha1, double alpha2);

/// A node of the spatial search on α with its two supporting lines
/// f1(α) = h1 + (α-α1)·slope_low and f2(α) = h2 + (α-α2)·slope_up, the bound
/// L = min over the interval of max(f1, f2), and the split candidate.
struct AlphaInterval {
  double alpha1 = 0.0, alpha2 = 0.0;
  double h1 = 0.0, h2 = 0.0;
  double slope_low = 0.0, slope_up = 0.0;
  double bound = -kInf;
  double split = 0.0;
};

/// Builds the interval node from known endpoint values h1 = h(alpha1),
/// h2 = h(alpha2) by solving the two lower-bound MIPs.
AlphaInterval interval_bound(const BudgetedInstance& inst, double alpha1, double alpha2,
                             double h1, double h2);

struct Bb2Options {
  double time_limit = kInf;   // seconds for the whole search
  double eps_alpha = 1e-9;    // discard intervals narrower than this
  long max_intervals = 100000;  // safety cap; exceeding it reports the gap
  double ls_x_time_limit = 300.0;
  /// Optional externally supplied candidate set for α; when present,
  /// intervals disjoint from it are discarded.
  std::optional<std::vector<double>> candidate_set;
};

struct Bb2Stats {
  long intervals = 0;   // nodes processed
  long sub_evals = 0;   // h evaluations
  long restarts = 0;    // heuristic restarts on incumbent improvements
};

struct Bb2Result {
  double value = 0.0;
  KTuple tuple;
  double gap = 0.0;  // UB minus the smallest surviving interval bound
  bool solved = true;
  Bb2Stats stats;
};

/// Exact k=2 solver: heuristic warm start, h(0), h(α*), h(0.5), then
/// best-first interval refinement with the subgradient interval bounds.
Bb2Result solve_bb2(const BudgetedInstance& inst, const Bb2Options& opts = {});

}  // namespace kadapt
