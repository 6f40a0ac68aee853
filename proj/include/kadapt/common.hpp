#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kadapt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Numeric comparison tolerances used across the solvers. Instance data is
// small-magnitude rational, so absolute tolerances dominate.
inline constexpr double kAbsTol = 1e-9;
inline constexpr double kRelTol = 1e-7;
inline constexpr double kFeasTol = 1e-7;   // LP primal feasibility
inline constexpr double kOptTol = 1e-7;    // LP reduced-cost optimality
inline constexpr double kIntTol = 1e-6;    // MIP integrality

/// A binary incidence vector over the ground-set items.
using Bits = std::vector<std::uint8_t>;

/// Thrown when an enumeration or search exceeds its size/output cap.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a ground set or subproblem turns out to be infeasible.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on broken internal invariants (LP failures that cannot occur on
/// well-formed inputs, violated bound orderings, missing cache entries).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (std::uint8_t v : b) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace kadapt
