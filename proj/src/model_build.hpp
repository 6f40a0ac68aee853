#pragma once

// Internal assembly of the tuple MIPs shared by the local search and the k=2
// branch-and-bound: k copies of the ground-set description, the (γ, θ) block
// dualizing the Γ-norm, and an optional β block expressing -(α2-α1)·||d∘x||^(Γ)
// of one copy via a fractional knapsack.

#include <vector>

#include "kadapt/instance.hpp"
#include "kadapt/mip.hpp"

namespace kadapt::detail {

struct TupleMip {
  MixedBinaryProgram program;
  std::size_t k = 0;
  std::size_t copy_cols = 0;              // columns per ground copy
  std::vector<std::size_t> dev_items;     // items with d_i > 0
  std::size_t gamma_offset = 0;           // first γ column
  std::size_t theta_col = 0;
  std::size_t beta_offset = SIZE_MAX;     // first β column, if present
  std::size_t beta_copy = SIZE_MAX;       // copy the β block couples to
  std::size_t beta_excluded_copy = SIZE_MAX;  // copy whose items cap β at 1-x
};

/// Objective: Σ_j obj_weights[j]·ĉᵀx^(j) + Σγ + Γθ + beta_coef·Σ d_i β_i,
/// coupling rows: Σ_j coupling_weights[j]·d_i·x^(j)_i − θ − γ_i ≤ 0. The β
/// block satisfies β_i ≤ x^(beta_copy)_i, Σβ ≤ Γ, and additionally
/// β_i ≤ 1 − x^(beta_excluded_copy)_i when an excluded copy is given.
TupleMip build_tuple_mip(const BudgetedInstance& inst,
                         const std::vector<double>& obj_weights,
                         const std::vector<double>& coupling_weights,
                         std::size_t beta_copy = SIZE_MAX, double beta_coef = 0.0,
                         std::size_t beta_excluded_copy = SIZE_MAX);

/// Optimal (θ, γ) for fixed member bits under the given coupling weights:
/// minimizes Γθ + Σ max(0, w_i − θ) with w_i = Σ_j weights[j] d_i x^(j)_i.
struct ThetaGamma {
  double theta = 0.0;
  std::vector<double> gamma;  // dense over all n items
  double norm_value = 0.0;    // Γθ + Σγ
};
ThetaGamma optimal_theta_gamma(const BudgetedInstance& inst, const std::vector<Bits>& members,
                               const std::vector<double>& coupling_weights);

/// Integral-feasible warm-start vector for a tuple MIP from member bits.
std::vector<double> tuple_warm_start(const TupleMip& mip, const BudgetedInstance& inst,
                                     const std::vector<Bits>& members,
                                     const std::vector<double>& coupling_weights);

/// Member solutions from a MIP incumbent (per-copy extraction and cleanup).
KTuple extract_tuple(const TupleMip& mip, const BudgetedInstance& inst,
                     const std::vector<double>& x);

}  // namespace kadapt::detail
