#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "kadapt/ground.hpp"

namespace kadapt {

/// Problem data: nonnegative nominal costs ĉ, nonnegative deviations d, the
/// uncertainty budget Γ, and the feasible ground set. Budgets above n are
/// clamped at construction (the uncertainty set is unchanged by that).
/// Immutable after construction and safe to share across threads.
struct BudgetedInstance {
  std::size_t n = 0;
  std::vector<double> c_hat;
  std::vector<double> d;
  double gamma = 0.0;
  std::shared_ptr<const GroundSet> ground;

  BudgetedInstance() = default;
  BudgetedInstance(std::vector<double> c_hat_in, std::vector<double> d_in, double gamma_in,
                   std::shared_ptr<const GroundSet> ground_in);
};

/// A feasible point with its cached nominal cost and the deviation vector
/// d^x = (d_i x_i) sorted decreasingly; perm[r] is the original index holding
/// rank r (ties broken by ascending original index).
struct Solution {
  Bits bits;
  double nominal = 0.0;
  std::vector<double> dev_sorted;
  std::vector<std::size_t> perm;
};

Solution make_solution(const BudgetedInstance& inst, Bits bits);

/// Ordered k-tuple of solutions.
struct KTuple {
  std::vector<Solution> members;
  std::size_t k() const { return members.size(); }
};

/// A cost scenario: z ∈ [0,1]^n with Σz ≤ Γ, and the realized costs
/// c_i = ĉ_i + d_i z_i.
struct Scenario {
  std::vector<double> z;
  std::vector<double> realized;
};

/// Sum of the g largest entries of v, extended to fractional g as the ⌊g⌋
/// largest plus (g-⌊g⌋) times the next largest. Requires 0 ≤ g ≤ len(v).
double gamma_norm(const std::vector<double>& v, double g);

/// Exact worst case of a single solution: ĉᵀx + ||d∘x||^(Γ).
double worst_case_single(const BudgetedInstance& inst, const Solution& x);

/// Worst-case cost of a tuple, max_{c∈U^Γ} min_j cᵀx^(j), with a maximizing
/// scenario. The LP (max z : z ≤ (ĉ+d∘ζ)ᵀx^(j) ∀j, ζ∈[0,1]^n, Σζ ≤ Γ) is
/// always feasible and bounded; any other outcome is an InternalError.
std::pair<double, Scenario> cost_of_tuple(const BudgetedInstance& inst, const KTuple& t);

/// Independent verification oracle: minimizes the dual expression
/// Σ_j α_j ĉᵀx^(j) + ||Σ_j α_j d∘x^(j)||^(Γ) over a uniform grid on the
/// simplex, with one local refinement pass around the grid minimum. Always an
/// upper bound on cost_of_tuple; supports k ≤ 3 with grid ≥ 10.
double cost_of_tuple_dual_oracle(const BudgetedInstance& inst, const KTuple& t, int grid);

/// Exact optimum over unordered k-tuples by full enumeration. Requires the
/// ground enumerator to yield at most `max_solutions` solutions and the
/// number of combinations to stay within `max_tuples` (SizeError otherwise).
std::pair<double, KTuple> brute_force_optimum(const BudgetedInstance& inst, int k,
                                              std::size_t max_solutions = 5000,
                                              double max_tuples = 1e7);

/// Which enumeration backend computes X' = {x ∈ X : ĉᵀx < ub}.
enum class EnumeratorKind { Recursive, BranchAndBound };

/// Enumerated solutions under ub as fully cached Solution values, sorted by
/// (nominal, lexicographic bits). Recursive falls back to the generic route
/// when the ground set has no recursive enumerator.
std::vector<Solution> enumerate_solutions_under(const BudgetedInstance& inst, double ub,
                                                EnumeratorKind kind = EnumeratorKind::Recursive,
                                                std::size_t cap = 10000000);

/// All feasible solutions (enumeration with ub just above the maximum
/// attainable nominal cost).
std::vector<Solution> enumerate_all_solutions(const BudgetedInstance& inst,
                                              std::size_t cap = 10000000);

}  // namespace kadapt
