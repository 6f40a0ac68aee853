#include "kadapt/bb2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>

#include "model_build.hpp"

namespace kadapt {
namespace {

std::vector<double> weighted_dev(const BudgetedInstance& inst, const Solution& x,
                                 const Solution& y, double alpha) {
  std::vector<double> w(inst.n, 0.0);
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (x.bits[i]) w[i] += alpha * inst.d[i];
    if (y.bits[i]) w[i] += (1.0 - alpha) * inst.d[i];
  }
  return w;
}

KTuple extract_raw_pair(const detail::TupleMip& mip, const BudgetedInstance& inst,
                        const std::vector<double>& x) {
  KTuple t;
  for (std::size_t j = 0; j < 2; ++j) {
    Bits bits(inst.n, 0);
    for (std::size_t i = 0; i < inst.n; ++i)
      bits[i] = x[j * mip.copy_cols + i] > 0.5 ? 1 : 0;
    t.members.push_back(make_solution(inst, std::move(bits)));
  }
  return t;
}

}  // namespace

double eval_g(const BudgetedInstance& inst, const Solution& x, const Solution& y, double alpha) {
  if (alpha < -kAbsTol || alpha > 1.0 + kAbsTol)
    throw std::invalid_argument("eval_g: alpha must lie in [0,1]");
  const double nominal = alpha * x.nominal + (1.0 - alpha) * y.nominal;
  return nominal + gamma_norm(weighted_dev(inst, x, y, alpha), inst.gamma);
}

std::pair<double, double> eval_subgradient_bounds(const BudgetedInstance& inst,
                                                  const Solution& x, const Solution& y) {
  const double diff = x.nominal - y.nominal;
  const double low = diff - gamma_norm(weighted_dev(inst, y, y, 0.0), inst.gamma);
  const double up = diff + gamma_norm(weighted_dev(inst, x, x, 1.0), inst.gamma);
  return {low, up};
}

SubEval solve_sub(const BudgetedInstance& inst, double alpha, const KTuple* warm) {
  if (alpha < -kAbsTol || alpha > 0.5 + kAbsTol)
    throw std::invalid_argument("solve_sub: alpha must lie in [0, 0.5]");
  alpha = std::clamp(alpha, 0.0, 0.5);
  const std::vector<double> weights{alpha, 1.0 - alpha};
  detail::TupleMip mip = detail::build_tuple_mip(inst, weights, weights);
  MipOptions mo;
  if (warm != nullptr && warm->k() == 2) {
    std::vector<Bits> bits{warm->members[0].bits, warm->members[1].bits};
    mo.warm_start = detail::tuple_warm_start(mip, inst, bits, weights);
  }
  const MipResult r = solve_mip(mip.program, mo);
  if (r.status == MipStatus::Infeasible) throw InfeasibleError("solve_sub: ground set is empty");
  if (r.status != MipStatus::Optimal || !r.has_incumbent)
    throw InternalError("solve_sub: MIP not solved to optimality");

  SubEval out;
  out.alpha = alpha;
  out.pair = detail::extract_tuple(mip, inst, r.x);  // cleaned members
  std::vector<Bits> bits{out.pair.members[0].bits, out.pair.members[1].bits};
  const detail::ThetaGamma tg = detail::optimal_theta_gamma(inst, bits, weights);
  out.theta = tg.theta;
  out.gamma_vec = tg.gamma;
  out.value = alpha * out.pair.members[0].nominal + (1.0 - alpha) * out.pair.members[1].nominal +
              tg.norm_value;
  return out;
}

namespace {

LowerResult lower_problem(const BudgetedInstance& inst, double alpha1, double alpha2,
                          bool left) {
  if (!(alpha1 >= -kAbsTol) || !(alpha2 <= 0.5 + kAbsTol) || !(alpha1 < alpha2))
    throw std::invalid_argument("lower problem: need 0 <= alpha1 < alpha2 <= 0.5");
  // Left: nominal weights at α2, coupling at α1, β ≤ y (copy 1).
  // Right: nominal weights at α1, coupling at α2, β ≤ x (copy 0).
  const std::vector<double> obj = left ? std::vector<double>{alpha2, 1.0 - alpha2}
                                       : std::vector<double>{alpha1, 1.0 - alpha1};
  const std::vector<double> coup = left ? std::vector<double>{alpha1, 1.0 - alpha1}
                                        : std::vector<double>{alpha2, 1.0 - alpha2};
  const std::size_t beta_copy = left ? 1 : 0;
  detail::TupleMip mip = detail::build_tuple_mip(inst, obj, coup, beta_copy, alpha1 - alpha2);
  const MipResult r = solve_mip(mip.program);
  if (r.status == MipStatus::Infeasible)
    throw InfeasibleError("lower problem: ground set is empty");
  if (r.status != MipStatus::Optimal || !r.has_incumbent)
    throw InternalError("lower problem: MIP not solved to optimality");

  LowerResult out;
  // The slope envelopes must be evaluated at the raw optimizer (the pair the
  // MIP value belongs to), before any cleanup.
  out.pair = extract_raw_pair(mip, inst, r.x);
  out.value = r.value;
  const auto [low, up] = eval_subgradient_bounds(inst, out.pair.members[0], out.pair.members[1]);
  out.slope = left ? low : up;
  return out;
}

}  // namespace

LowerResult lower_problem_left(const BudgetedInstance& inst, double alpha1, double alpha2) {
  return lower_problem(inst, alpha1, alpha2, true);
}

LowerResult lower_problem_right(const BudgetedInstance& inst, double alpha1, double alpha2) {
  return lower_problem(inst, alpha1, alpha2, false);
}

namespace {

// Tightened subgradient envelopes counting only items where the members
// differ: low = ĉᵀx − ĉᵀy − ||d∘y∘(1−x)||, up = ĉᵀx − ĉᵀy + ||d∘x∘(1−y)||.
// Still valid bounds on every subgradient of g (shared items contribute
// zero), and exact (zero) for identical members, which closes plateaus of h
// that the data-only envelopes cannot.
double tight_slope(const BudgetedInstance& inst, const Solution& x, const Solution& y,
                   bool lower) {
  std::vector<double> dev(inst.n, 0.0);
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (lower) {
      if (y.bits[i] && !x.bits[i]) dev[i] = inst.d[i];
    } else {
      if (x.bits[i] && !y.bits[i]) dev[i] = inst.d[i];
    }
  }
  const double norm = gamma_norm(dev, inst.gamma);
  const double diff = x.nominal - y.nominal;
  return lower ? diff - norm : diff + norm;
}

// Analogue of the lower problems with β restricted to items absent from the
// other member (β ≤ y, β ≤ 1−x on the left; β ≤ x, β ≤ 1−y on the right).
LowerResult tight_lower_problem(const BudgetedInstance& inst, double alpha1, double alpha2,
                                bool left) {
  const std::vector<double> obj = left ? std::vector<double>{alpha2, 1.0 - alpha2}
                                       : std::vector<double>{alpha1, 1.0 - alpha1};
  const std::vector<double> coup = left ? std::vector<double>{alpha1, 1.0 - alpha1}
                                        : std::vector<double>{alpha2, 1.0 - alpha2};
  const std::size_t beta_copy = left ? 1 : 0;
  const std::size_t excluded = left ? 0 : 1;
  detail::TupleMip mip =
      detail::build_tuple_mip(inst, obj, coup, beta_copy, alpha1 - alpha2, excluded);
  const MipResult r = solve_mip(mip.program);
  if (r.status == MipStatus::Infeasible)
    throw InfeasibleError("lower problem: ground set is empty");
  if (r.status != MipStatus::Optimal || !r.has_incumbent)
    throw InternalError("lower problem: MIP not solved to optimality");
  LowerResult out;
  out.pair = extract_raw_pair(mip, inst, r.x);
  out.value = r.value;
  out.slope = tight_slope(inst, out.pair.members[0], out.pair.members[1], left);
  return out;
}

// Interval node for the search loop, pruned with the tightened envelopes.
AlphaInterval search_interval_bound(const BudgetedInstance& inst, double alpha1, double alpha2,
                                    double h1, double h2) {
  const LowerResult l = tight_lower_problem(inst, alpha1, alpha2, true);
  const LowerResult r = tight_lower_problem(inst, alpha1, alpha2, false);

  AlphaInterval iv;
  iv.alpha1 = alpha1;
  iv.alpha2 = alpha2;
  iv.h1 = h1;
  iv.h2 = h2;
  iv.slope_low = l.slope;
  iv.slope_up = r.slope;

  const auto f1 = [&](double a) { return h1 + (a - alpha1) * iv.slope_low; };
  const auto f2 = [&](double a) { return h2 + (a - alpha2) * iv.slope_up; };
  const auto fmax = [&](double a) { return std::max(f1(a), f2(a)); };
  double split = 0.5 * (alpha1 + alpha2);
  double bound = std::min(fmax(alpha1), fmax(alpha2));
  const double denom = iv.slope_low - iv.slope_up;
  if (std::abs(denom) > 1e-12) {
    const double cross = (h2 - h1 + alpha1 * iv.slope_low - alpha2 * iv.slope_up) / denom;
    if (cross > alpha1 && cross < alpha2) {
      const double cv = fmax(cross);
      if (cv < bound) bound = cv;
      split = cross;
    }
  }
  iv.bound = bound;
  iv.split = split;
  return iv;
}

}  // namespace

AlphaInterval interval_bound(const BudgetedInstance& inst, double alpha1, double alpha2,
                             double h1, double h2) {
  const LowerResult l = lower_problem_left(inst, alpha1, alpha2);
  const LowerResult r = lower_problem_right(inst, alpha1, alpha2);

  AlphaInterval iv;
  iv.alpha1 = alpha1;
  iv.alpha2 = alpha2;
  iv.h1 = h1;
  iv.h2 = h2;
  iv.slope_low = l.slope;
  iv.slope_up = r.slope;

  const auto f1 = [&](double a) { return h1 + (a - alpha1) * iv.slope_low; };
  const auto f2 = [&](double a) { return h2 + (a - alpha2) * iv.slope_up; };
  const auto fmax = [&](double a) { return std::max(f1(a), f2(a)); };

  // Exact minimum of max(f1, f2) over the interval: the endpoints plus the
  // crossing point when it lies inside.
  double split = 0.5 * (alpha1 + alpha2);
  double bound = std::min(fmax(alpha1), fmax(alpha2));
  const double denom = iv.slope_low - iv.slope_up;
  if (std::abs(denom) > 1e-12) {
    const double cross = (h2 - h1 + alpha1 * iv.slope_low - alpha2 * iv.slope_up) / denom;
    if (cross > alpha1 && cross < alpha2) {
      const double cv = fmax(cross);
      if (cv < bound) bound = cv;
      split = cross;
    }
  }
  iv.bound = bound;
  iv.split = split;
  if (iv.bound > std::min(h1, h2) + 1e-6)
    throw InternalError("interval_bound: bound exceeds an endpoint value");
  return iv;
}

Bb2Result solve_bb2(const BudgetedInstance& inst, const Bb2Options& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto timed_out = [&]() {
    return std::isfinite(opts.time_limit) && elapsed() > opts.time_limit;
  };

  Bb2Result res;
  LsOptions lso;
  lso.x_time_limit = opts.ls_x_time_limit;
  const LsResult ls = local_search(inst, 2, lso);
  // Map the heuristic's simplex weights into [0, 0.5] of the two-copy form.
  double alpha_star = 0.5;
  if (ls.state.dual.alpha.size() == 2)
    alpha_star = std::min(ls.state.dual.alpha[0], ls.state.dual.alpha[1]);
  alpha_star = std::clamp(alpha_star, 0.0, 0.5);

  double ub = ls.value;
  KTuple incumbent = ls.tuple;
  std::map<double, KTuple> evaluated;

  auto evaluate = [&](double a, const KTuple* warm_hint) -> double {
    const KTuple* warm = warm_hint;
    if (warm == nullptr && !evaluated.empty()) {
      auto it = evaluated.lower_bound(a);
      if (it == evaluated.end()) --it;
      else if (it != evaluated.begin()) {
        auto prev = std::prev(it);
        if (a - prev->first < it->first - a) it = prev;
      }
      warm = &it->second;
    }
    const SubEval se = solve_sub(inst, a, warm);
    ++res.stats.sub_evals;
    evaluated[a] = se.pair;
    if (se.value < ub) {
      ub = se.value;
      incumbent = se.pair;
    }
    return se.value;
  };

  const double h0 = evaluate(0.0, &ls.tuple);
  const double h5 = evaluate(0.5, &ls.tuple);
  double hstar = h0;
  if (alpha_star > opts.eps_alpha && alpha_star < 0.5 - opts.eps_alpha)
    hstar = evaluate(alpha_star, &ls.tuple);
  else
    alpha_star = 0.0;

  auto intersects_candidates = [&](double lo, double hi) {
    if (!opts.candidate_set) return true;
    const auto& cs = *opts.candidate_set;
    auto it = std::lower_bound(cs.begin(), cs.end(), lo - 1e-12);
    return it != cs.end() && *it <= hi + 1e-12;
  };

  struct NodeOrder {
    bool operator()(const AlphaInterval& a, const AlphaInterval& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return (a.alpha2 - a.alpha1) < (b.alpha2 - b.alpha1);  // ties: wider first
    }
  };
  std::priority_queue<AlphaInterval, std::vector<AlphaInterval>, NodeOrder> open;

  auto push_interval = [&](double a1, double a2, double v1, double v2) {
    if (a2 - a1 < opts.eps_alpha) return;
    if (!intersects_candidates(a1, a2)) return;
    const AlphaInterval iv = search_interval_bound(inst, a1, a2, v1, v2);
    if (iv.bound < ub - kAbsTol) open.push(iv);
  };

  if (alpha_star > 0.0) {
    push_interval(0.0, alpha_star, h0, hstar);
    push_interval(alpha_star, 0.5, hstar, h5);
  } else {
    push_interval(0.0, 0.5, h0, h5);
  }

  bool clean_exit = true;
  while (!open.empty()) {
    if (timed_out() || res.stats.intervals >= opts.max_intervals) {
      clean_exit = false;
      break;
    }
    AlphaInterval iv = open.top();
    open.pop();
    if (iv.bound >= ub - kAbsTol) continue;  // best-first: the rest follow
    ++res.stats.intervals;

    // Keep the split strictly interior so both children make progress.
    const double width = iv.alpha2 - iv.alpha1;
    const double margin = std::min(width / 4.0, std::max(opts.eps_alpha, width * 1e-3));
    const double split = std::clamp(iv.split, iv.alpha1 + margin, iv.alpha2 - margin);

    const double prev_ub = ub;
    const double hs = evaluate(split, nullptr);
    if (ub < prev_ub - kAbsTol) {
      // Restart the iterative heuristic at the improving weight.
      ++res.stats.restarts;
      LsOptions restart = lso;
      restart.initial_alpha = std::vector<double>{split, 1.0 - split};
      const LsResult again = local_search(inst, 2, restart);
      if (again.value < ub) {
        ub = again.value;
        incumbent = again.tuple;
      }
    }
    push_interval(iv.alpha1, split, iv.h1, hs);
    push_interval(split, iv.alpha2, hs, iv.h2);
  }

  // Report the incumbent's exact tuple cost (== UB at a clean exit; on a
  // timeout the fixed pair may be slightly better than g at the evaluated α).
  res.value = std::min(ub, cost_of_tuple(inst, incumbent).first);
  res.tuple = incumbent;
  if (clean_exit) {
    res.gap = 0.0;
    res.solved = true;
  } else {
    double lb = res.value;
    while (!open.empty()) {
      lb = std::min(lb, open.top().bound);
      open.pop();
    }
    res.gap = std::max(0.0, res.value - lb);
    res.solved = res.gap <= 1e-6;
  }
  return res;
}

}  // namespace kadapt
