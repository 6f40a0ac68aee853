#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kadapt/lp.hpp"

namespace kadapt {

/// A linear program plus the index set of binary-constrained variables.
/// Binary indices must be in range with bounds within [0, 1].
struct MixedBinaryProgram {
  LinearProgram lp;
  std::vector<std::size_t> binary;
};

enum class MipStatus { Optimal, Infeasible, TimeLimit };

/// With a finite cutoff, status Optimal together with has_incumbent == false
/// means the search proved that no feasible point has value < cutoff.
struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  double value = 0.0;
  std::vector<double> x;
  double bound = -kInf;
  long nodes = 0;
};

struct MipOptions {
  double time_limit = kInf;                       // seconds
  long node_limit = -1;                           // -1: unlimited
  std::optional<std::vector<double>> warm_start;  // integral-feasible point
  double cutoff = kInf;  // prune nodes with relaxation value >= cutoff
};

/// Best-first branch-and-bound over lp-core relaxations. Branches on the most
/// fractional binary (ties: lowest index); nodes are pruned on infeasible
/// relaxations or relaxation value >= min(incumbent, cutoff). Exhausting the
/// tree yields Optimal; hitting a limit yields TimeLimit with the incumbent
/// and an honest bound.
MipResult solve_mip(const MixedBinaryProgram& p, const MipOptions& opts = {});

/// Enumerates every integral feasible point with objective < ub by branching
/// on all binaries and collecting fully-fixed leaves; prunes only on
/// infeasibility or relaxation value >= ub, never on an incumbent. Returned
/// vectors hold the binary variables in index order, sorted by (objective,
/// lexicographic). Throws SizeError past `cap` results.
std::vector<Bits> enumerate_binary_feasible(const MixedBinaryProgram& p, double ub,
                                            std::size_t cap = 10000000);

}  // namespace kadapt
