#include "kadapt/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace kadapt {
namespace {

using Clock = std::chrono::steady_clock;

void validate_program(const MixedBinaryProgram& p) {
  const std::size_t n = p.lp.num_vars();
  for (std::size_t j : p.binary) {
    if (j >= n) throw std::invalid_argument("mip: binary index out of range");
    if (p.lp.lower[j] < -kIntTol || p.lp.upper[j] > 1.0 + kIntTol)
      throw std::invalid_argument("mip: binary bounds must lie within [0,1]");
  }
}

double point_objective(const LinearProgram& lp, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) v += lp.objective[j] * x[j];
  return v;
}

bool point_feasible(const LinearProgram& lp, const std::vector<double>& x, double tol) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol) return false;
  }
  for (const LinearRow& r : lp.rows) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) ax += r.coeffs[j] * x[j];
    switch (r.sense) {
      case RowSense::LessEqual:
        if (ax > r.rhs + tol) return false;
        break;
      case RowSense::GreaterEqual:
        if (ax < r.rhs - tol) return false;
        break;
      case RowSense::Equal:
        if (std::abs(ax - r.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

// Branching decisions as an immutable chain shared between siblings.
struct BoundPatch {
  std::shared_ptr<const BoundPatch> parent;
  std::size_t var;
  double lo, up;
};

void apply_patches(LinearProgram& lp, const BoundPatch* patch) {
  for (const BoundPatch* p = patch; p != nullptr; p = p->parent.get())
    lp.set_bounds(p->var, p->lo, p->up);
}

struct Node {
  std::shared_ptr<const BoundPatch> patch;
  double bound;
  long seq;
};
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;  // ties FIFO
  }
};

}  // namespace

MipResult solve_mip(const MixedBinaryProgram& p, const MipOptions& opts) {
  validate_program(p);
  const auto start = Clock::now();
  auto out_of_time = [&]() {
    if (!std::isfinite(opts.time_limit)) return false;
    return std::chrono::duration<double>(Clock::now() - start).count() > opts.time_limit;
  };

  MipResult res;
  res.bound = -kInf;
  double incumbent_val = kInf;
  std::vector<double> incumbent;
  if (opts.warm_start) {
    const std::vector<double>& w = *opts.warm_start;
    if (!point_feasible(p.lp, w, 1e-6))
      throw std::invalid_argument("mip: warm start is not feasible");
    for (std::size_t j : p.binary)
      if (std::abs(w[j] - std::round(w[j])) > kIntTol)
        throw std::invalid_argument("mip: warm start is not integral");
    incumbent = w;
    incumbent_val = point_objective(p.lp, w);
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  open.push(Node{nullptr, -kInf, seq++});
  LinearProgram work = p.lp;
  bool limit_hit = false;
  double limit_bound = kInf;

  while (!open.empty()) {
    const double best_ub = std::min(incumbent_val, opts.cutoff);
    Node node = open.top();
    open.pop();
    if (node.bound >= best_ub - kAbsTol) continue;
    if (out_of_time() || (opts.node_limit >= 0 && res.nodes >= opts.node_limit)) {
      limit_hit = true;
      limit_bound = node.bound;
      break;
    }
    ++res.nodes;

    work = p.lp;
    apply_patches(work, node.patch.get());
    const LpSolution rel = solve_lp(work);
    if (rel.status == LpStatus::Infeasible) continue;
    if (rel.status == LpStatus::Unbounded)
      throw InternalError("mip: unbounded relaxation");
    if (rel.status == LpStatus::NumericalFailure)
      throw InternalError("mip: LP numerical failure");
    if (rel.objective >= best_ub - kAbsTol) continue;

    // Most fractional binary (distance to the nearest integer), ties by
    // lowest index; variables within tolerance of integrality are excluded.
    std::size_t branch_var = p.lp.num_vars();
    double best_frac = kIntTol;
    for (std::size_t j : p.binary) {
      const double frac = std::abs(rel.primal[j] - std::round(rel.primal[j]));
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = j;
      }
    }

    if (branch_var == p.lp.num_vars()) {
      // Integral on all binaries: candidate incumbent.
      if (rel.objective < incumbent_val) {
        incumbent_val = rel.objective;
        incumbent = rel.primal;
        for (std::size_t j : p.binary) incumbent[j] = std::round(incumbent[j]);
      }
      continue;
    }
    auto fix0 = std::make_shared<BoundPatch>(BoundPatch{node.patch, branch_var, 0.0, 0.0});
    auto fix1 = std::make_shared<BoundPatch>(BoundPatch{node.patch, branch_var, 1.0, 1.0});
    open.push(Node{std::move(fix0), rel.objective, seq++});
    open.push(Node{std::move(fix1), rel.objective, seq++});
  }

  if (limit_hit) {
    res.status = MipStatus::TimeLimit;
    double bound = limit_bound;
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
    if (!incumbent.empty()) bound = std::min(bound, incumbent_val);
    res.bound = bound;
  } else if (!incumbent.empty()) {
    res.status = MipStatus::Optimal;
    res.bound = incumbent_val;
  } else {
    // Tree exhausted without an incumbent: genuinely infeasible when no
    // cutoff was active, otherwise an exhaustive proof against the cutoff.
    res.status = std::isfinite(opts.cutoff) ? MipStatus::Optimal : MipStatus::Infeasible;
    res.bound = opts.cutoff;
  }
  if (!incumbent.empty()) {
    res.has_incumbent = true;
    res.value = incumbent_val;
    res.x = std::move(incumbent);
  }
  return res;
}

std::vector<Bits> enumerate_binary_feasible(const MixedBinaryProgram& p, double ub,
                                            std::size_t cap) {
  validate_program(p);
  std::vector<Bits> out;
  LinearProgram work = p.lp;

  // Depth-first over branching decisions; bounds are mutated in place and
  // restored on backtrack.
  struct Frame {
    std::size_t var;
    double lo, up;
    int next_value;  // 0, 1, then done
  };
  std::vector<Frame> stack;

  auto solve_and_descend = [&](auto&& self) -> void {
    const LpSolution rel = solve_lp(work);
    if (rel.status == LpStatus::Infeasible) return;
    if (rel.status != LpStatus::Optimal)
      throw InternalError("enumerate: LP relaxation not optimal");
    if (rel.objective >= ub) return;
    // Lowest-index binary not yet fixed by branching.
    std::size_t var = p.lp.num_vars();
    for (std::size_t j : p.binary) {
      if (work.upper[j] - work.lower[j] > 0.5) {
        var = j;
        break;
      }
    }
    if (var == p.lp.num_vars()) {
      Bits bits(p.binary.size(), 0);
      double obj = 0.0;
      for (std::size_t idx = 0; idx < p.binary.size(); ++idx) {
        bits[idx] = work.lower[p.binary[idx]] > 0.5 ? 1 : 0;
        obj += p.lp.objective[p.binary[idx]] * bits[idx];
      }
      if (obj < ub) {
        if (out.size() >= cap)
          throw SizeError("enumerate: output cap exceeded");
        out.push_back(std::move(bits));
      }
      return;
    }
    const double lo = work.lower[var], up = work.upper[var];
    for (int v = 0; v <= 1; ++v) {
      work.set_bounds(var, v, v);
      self(self);
      work.set_bounds(var, lo, up);
    }
  };
  solve_and_descend(solve_and_descend);

  auto nominal = [&](const Bits& b) {
    double s = 0.0;
    for (std::size_t idx = 0; idx < b.size(); ++idx)
      s += p.lp.objective[p.binary[idx]] * b[idx];
    return s;
  };
  std::sort(out.begin(), out.end(), [&](const Bits& a, const Bits& b) {
    const double na = nominal(a), nb = nominal(b);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

}  // namespace kadapt
