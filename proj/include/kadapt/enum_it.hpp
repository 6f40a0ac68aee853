#pragma once

#include <unordered_map>
#include <vector>

#include "kadapt/instance.hpp"

namespace kadapt {

/// Per-solution preprocessed bounds keyed by the solution bits.
struct BoundCache {
  struct Entry {
    double lb = 0.0;          // equal-budget-split scenario bound
    double worst_case = 0.0;  // exact single-solution worst case
  };
  std::unordered_map<Bits, Entry, BitsHash> entries;
};

/// min(rob_opt, heur): the seed upper bound of the enumerative algorithm.
/// For fractional budgets (where the threshold decomposition does not apply)
/// the heuristic value alone is used.
double initial_upper_bound(const BudgetedInstance& inst, int k,
                           double ls_x_time_limit = 300.0);

/// Scenario bound assigning Γ/k deviations to one solution:
/// ĉᵀx + Σ_{i≤⌊Γ/k⌋} d^x_i + (Γ/k − ⌊Γ/k⌋)·d^x_{⌈Γ/k⌉}.
double lb_solution(const BudgetedInstance& inst, const Solution& x, int k);

/// LB1 = min over members of the cached lb values; members must be cached.
double lb1_tuple(const BoundCache& cache, const KTuple& t);

/// LB2: greedy scenario affecting the Γ deviations sequentially to the member
/// with the smallest running cost (ties: lowest member index); fractional
/// budgets finish with one fractional assignment.
double lb2_tuple(const BudgetedInstance& inst, const KTuple& t);

/// Discrete resistance: the smallest ω ∈ ℕ such that deviation mass ω/q
/// pushes ĉᵀx past ub, capped at ⌊q·Γ⌋.
int resistance(const BudgetedInstance& inst, const Solution& x, double ub, int q);

/// The partition of a solution list by resistance under a fixed ub snapshot.
/// Bucket 0 (solutions at or past ub on nominal cost alone) is retained but
/// excluded from the tuple search.
struct ResistanceBuckets {
  int q = 1;
  double ub_snapshot = 0.0;
  int cap = 0;                                   // ⌊q·Γ⌋
  std::vector<std::vector<std::size_t>> buckets; // indices per ω ∈ [0, cap]
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out(buckets.size());
    for (std::size_t w = 0; w < buckets.size(); ++w) out[w] = buckets[w].size();
    return out;
  }
};
ResistanceBuckets build_buckets(const BudgetedInstance& inst,
                                const std::vector<Solution>& solutions, double ub, int q);

struct ItOptions {
  int q = 2;
  double time_limit = kInf;        // seconds
  EnumeratorKind enumerator = EnumeratorKind::Recursive;
  std::size_t memory_cap = 2000000;  // max enumerated solutions per pass
  double ls_x_time_limit = 300.0;
};

struct ItPass {
  std::size_t x_size = 0;   // |X'| enumerated this pass
  long lb1 = 0, lb2 = 0, cost = 0;
};

struct ItStats {
  long passes = 0;
  long lb1_evals = 0, lb2_evals = 0, cost_evals = 0;
  std::vector<ItPass> per_pass;
};

struct ItResult {
  double value = 0.0;
  KTuple tuple;
  bool solved = true;  // false only on a time/memory limit; no gap is reported
  ItStats stats;
};

/// The enumerative algorithm for k ∈ {2, 3}: enumerate X' = {ĉᵀx < UB},
/// partition by resistance, walk the symmetry-reduced tuples whose resistance
/// indices sum past q·Γ through the LB1 → LB2 → cost cascade, and restart the
/// whole enumeration whenever UB improves.
ItResult solve_it(const BudgetedInstance& inst, int k, const ItOptions& opts = {});

}  // namespace kadapt
