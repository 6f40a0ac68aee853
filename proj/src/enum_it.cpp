#include "kadapt/enum_it.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kadapt/local_search.hpp"
#include "kadapt/minmax.hpp"

namespace kadapt {

double initial_upper_bound(const BudgetedInstance& inst, int k, double ls_x_time_limit) {
  LsOptions lso;
  lso.x_time_limit = ls_x_time_limit;
  const double heur = local_search(inst, k, lso).value;
  if (std::abs(inst.gamma - std::round(inst.gamma)) > kAbsTol) return heur;
  return std::min(solve_minmax(inst).value, heur);
}

double lb_solution(const BudgetedInstance& inst, const Solution& x, int k) {
  if (k < 1) throw std::invalid_argument("lb_solution: k must be >= 1");
  const double share = inst.gamma / k;
  const std::size_t whole = static_cast<std::size_t>(std::floor(share + kAbsTol));
  const double frac = share - static_cast<double>(whole);
  double total = x.nominal;
  for (std::size_t i = 0; i < whole && i < x.dev_sorted.size(); ++i) total += x.dev_sorted[i];
  if (frac > kAbsTol && whole < x.dev_sorted.size()) total += frac * x.dev_sorted[whole];
  return total;
}

double lb1_tuple(const BoundCache& cache, const KTuple& t) {
  double best = kInf;
  for (const Solution& m : t.members) {
    const auto it = cache.entries.find(m.bits);
    if (it == cache.entries.end()) throw InternalError("lb1: member not cached");
    best = std::min(best, it->second.lb);
  }
  return best;
}

double lb2_tuple(const BudgetedInstance& inst, const KTuple& t) {
  const std::size_t k = t.k();
  if (k == 0) throw std::invalid_argument("lb2: empty tuple");
  std::vector<double> running(k);
  std::vector<std::size_t> used(k, 0);
  for (std::size_t j = 0; j < k; ++j) running[j] = t.members[j].nominal;
  auto cheapest = [&]() {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (running[j] < running[arg]) arg = j;
    return arg;
  };
  const std::size_t whole = static_cast<std::size_t>(std::floor(inst.gamma + kAbsTol));
  const double frac = inst.gamma - static_cast<double>(whole);
  for (std::size_t u = 0; u < whole; ++u) {
    const std::size_t j = cheapest();
    if (used[j] < t.members[j].dev_sorted.size())
      running[j] += t.members[j].dev_sorted[used[j]++];
  }
  if (frac > kAbsTol) {
    const std::size_t j = cheapest();
    if (used[j] < t.members[j].dev_sorted.size())
      running[j] += frac * t.members[j].dev_sorted[used[j]++];
  }
  return *std::min_element(running.begin(), running.end());
}

int resistance(const BudgetedInstance& inst, const Solution& x, double ub, int q) {
  if (q < 1) throw std::invalid_argument("resistance: q must be >= 1");
  const int cap = static_cast<int>(std::floor(q * inst.gamma + kAbsTol));
  for (int omega = 0; omega < cap; ++omega) {
    const double share = static_cast<double>(omega) / q;
    const std::size_t whole = static_cast<std::size_t>(std::floor(share + kAbsTol));
    const double frac = share - static_cast<double>(whole);
    double total = x.nominal;
    for (std::size_t i = 0; i < whole && i < x.dev_sorted.size(); ++i)
      total += x.dev_sorted[i];
    if (frac > kAbsTol && whole < x.dev_sorted.size()) total += frac * x.dev_sorted[whole];
    if (total >= ub) return omega;
  }
  return cap;
}

ResistanceBuckets build_buckets(const BudgetedInstance& inst,
                                const std::vector<Solution>& solutions, double ub, int q) {
  ResistanceBuckets out;
  out.q = q;
  out.ub_snapshot = ub;
  out.cap = static_cast<int>(std::floor(q * inst.gamma + kAbsTol));
  out.buckets.assign(static_cast<std::size_t>(out.cap) + 1, {});
  for (std::size_t s = 0; s < solutions.size(); ++s)
    out.buckets[static_cast<std::size_t>(resistance(inst, solutions[s], ub, q))].push_back(s);
  return out;
}

namespace {

// Greedy scenario bound over member pointers (allocation-free form of
// lb2_tuple for the hot cascade path).
double lb2_over(const BudgetedInstance& inst, const Solution* const* members, std::size_t k) {
  double running[3];
  std::size_t used[3] = {0, 0, 0};
  for (std::size_t j = 0; j < k; ++j) running[j] = members[j]->nominal;
  auto cheapest = [&]() {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < k; ++j)
      if (running[j] < running[arg]) arg = j;
    return arg;
  };
  const std::size_t whole = static_cast<std::size_t>(std::floor(inst.gamma + kAbsTol));
  const double frac = inst.gamma - static_cast<double>(whole);
  for (std::size_t u = 0; u < whole; ++u) {
    const std::size_t j = cheapest();
    if (used[j] < members[j]->dev_sorted.size()) running[j] += members[j]->dev_sorted[used[j]++];
  }
  if (frac > kAbsTol) {
    const std::size_t j = cheapest();
    if (used[j] < members[j]->dev_sorted.size())
      running[j] += frac * members[j]->dev_sorted[used[j]++];
  }
  double best = running[0];
  for (std::size_t j = 1; j < k; ++j) best = std::min(best, running[j]);
  return best;
}

struct SearchContext {
  const BudgetedInstance& inst;
  const std::vector<Solution>& pool;
  const std::vector<double>& lb_by_index;
  ItStats& stats;
  ItPass& pass;
  long since_time_check = 0;
  const std::chrono::steady_clock::time_point start;
  double time_limit;

  bool timed_out() {
    if (++since_time_check < 1024) return false;
    since_time_check = 0;
    if (!std::isfinite(time_limit)) return false;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
           time_limit;
  }
};

enum class StepOutcome { Continue, Improved, TimedOut };

// LB1 -> LB2 -> cost cascade on one tuple; updates ub and the incumbent.
StepOutcome consider(SearchContext& ctx, const std::size_t* members, std::size_t k, double& ub,
                     KTuple& incumbent) {
  if (ctx.timed_out()) return StepOutcome::TimedOut;
  ++ctx.stats.lb1_evals;
  ++ctx.pass.lb1;
  double lb1 = kInf;
  for (std::size_t j = 0; j < k; ++j) lb1 = std::min(lb1, ctx.lb_by_index[members[j]]);
  if (lb1 > ub) return StepOutcome::Continue;
  const Solution* ptrs[3];
  for (std::size_t j = 0; j < k; ++j) ptrs[j] = &ctx.pool[members[j]];
  ++ctx.stats.lb2_evals;
  ++ctx.pass.lb2;
  if (lb2_over(ctx.inst, ptrs, k) > ub) return StepOutcome::Continue;
  KTuple t;
  t.members.reserve(k);
  for (std::size_t j = 0; j < k; ++j) t.members.push_back(*ptrs[j]);
  ++ctx.stats.cost_evals;
  ++ctx.pass.cost;
  const double cost = cost_of_tuple(ctx.inst, t).first;
  if (cost < ub) {
    ub = cost;
    incumbent = std::move(t);
    return StepOutcome::Improved;
  }
  return StepOutcome::Continue;
}

}  // namespace

ItResult solve_it(const BudgetedInstance& inst, int k, const ItOptions& opts) {
  if (k != 2 && k != 3) throw std::invalid_argument("solve_it: k must be 2 or 3");
  const auto t0 = std::chrono::steady_clock::now();

  ItResult res;
  // Seed UB = min(rob_opt, heur) with the matching witness.
  LsOptions lso;
  lso.x_time_limit = opts.ls_x_time_limit;
  const LsResult ls = local_search(inst, k, lso);
  double ub = ls.value;
  KTuple incumbent = ls.tuple;
  if (std::abs(inst.gamma - std::round(inst.gamma)) <= kAbsTol) {
    const MinMaxResult mm = solve_minmax(inst);
    if (mm.value < ub) {
      ub = mm.value;
      incumbent.members.assign(static_cast<std::size_t>(k), mm.minimizer);
    }
  }

  while (true) {
    ++res.stats.passes;
    res.stats.per_pass.push_back({});
    ItPass& pass = res.stats.per_pass.back();

    std::vector<Solution> pool;
    try {
      pool = enumerate_solutions_under(inst, ub, opts.enumerator, opts.memory_cap);
    } catch (const SizeError&) {
      res.value = ub;
      res.tuple = std::move(incumbent);
      res.solved = false;
      return res;
    }
    pass.x_size = pool.size();
    if (pool.empty()) break;

    std::vector<double> lb_by_index(pool.size());
    for (std::size_t s = 0; s < pool.size(); ++s) lb_by_index[s] = lb_solution(inst, pool[s], k);

    const ResistanceBuckets rb = build_buckets(inst, pool, ub, opts.q);
    const int cap = rb.cap;
    const double qgamma = opts.q * inst.gamma;

    SearchContext ctx{inst, pool, lb_by_index, res.stats, pass, 0, t0, opts.time_limit};

    bool improved = false;
    bool timed_out = false;
    if (pool.size() < static_cast<std::size_t>(k)) {
      // Fewer solutions than members: the full pool is the only candidate
      // multiset (duplicates never beat it).
      std::vector<std::size_t> all(pool.size());
      for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
      const StepOutcome o = consider(ctx, all.data(), all.size(), ub, incumbent);
      improved = (o == StepOutcome::Improved);
      timed_out = (o == StepOutcome::TimedOut);
    } else if (k == 2) {
      for (int w1 = cap; w1 >= 1 && !improved && !timed_out; --w1) {
        for (std::size_t i1 = 0; i1 < rb.buckets[w1].size() && !improved && !timed_out; ++i1) {
          const std::size_t s1 = rb.buckets[w1][i1];
          for (int w2 = std::min(w1, cap); w2 >= 1; --w2) {
            if (static_cast<double>(w1) + w2 <= qgamma + kAbsTol) break;
            const std::size_t first = (w2 == w1) ? i1 + 1 : 0;
            for (std::size_t i2 = first; i2 < rb.buckets[w2].size(); ++i2) {
              const std::size_t pair[2] = {s1, rb.buckets[w2][i2]};
              const StepOutcome o = consider(ctx, pair, 2, ub, incumbent);
              if (o == StepOutcome::Improved) { improved = true; break; }
              if (o == StepOutcome::TimedOut) { timed_out = true; break; }
            }
            if (improved || timed_out) break;
          }
        }
      }
    } else {
      for (int w1 = cap; w1 >= 1 && !improved && !timed_out; --w1) {
        for (std::size_t i1 = 0; i1 < rb.buckets[w1].size() && !improved && !timed_out; ++i1) {
          const std::size_t s1 = rb.buckets[w1][i1];
          for (int w2 = std::min(w1, cap); w2 >= 1 && !improved && !timed_out; --w2) {
            const std::size_t first2 = (w2 == w1) ? i1 + 1 : 0;
            for (std::size_t i2 = first2; i2 < rb.buckets[w2].size() && !improved && !timed_out;
                 ++i2) {
              const std::size_t s2 = rb.buckets[w2][i2];
              for (int w3 = w2; w3 >= 1; --w3) {
                if (static_cast<double>(w1) + w2 + w3 <= qgamma + kAbsTol) break;
                const std::size_t first3 = (w3 == w2) ? i2 + 1 : 0;
                for (std::size_t i3 = first3; i3 < rb.buckets[w3].size(); ++i3) {
                  const std::size_t triple[3] = {s1, s2, rb.buckets[w3][i3]};
                  const StepOutcome o = consider(ctx, triple, 3, ub, incumbent);
                  if (o == StepOutcome::Improved) { improved = true; break; }
                  if (o == StepOutcome::TimedOut) { timed_out = true; break; }
                }
                if (improved || timed_out) break;
              }
            }
          }
        }
      }
    }

    if (timed_out) {
      res.value = ub;
      res.tuple = std::move(incumbent);
      res.solved = false;
      return res;
    }
    if (!improved) break;  // full pass without an update: ub is optimal
  }

  res.value = ub;
  res.tuple = std::move(incumbent);
  res.solved = true;
  return res;
}

}  // namespace kadapt
