#include "kadapt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kadapt {

BudgetedInstance::BudgetedInstance(std::vector<double> c_hat_in, std::vector<double> d_in,
                                   double gamma_in,
                                   std::shared_ptr<const GroundSet> ground_in)
    : c_hat(std::move(c_hat_in)), d(std::move(d_in)), gamma(gamma_in),
      ground(std::move(ground_in)) {
  if (!ground) throw std::invalid_argument("instance: ground set required");
  n = ground->items();
  if (c_hat.size() != n || d.size() != n)
    throw std::invalid_argument("instance: cost vectors must match the item count");
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  for (double v : c_hat)
    if (!ok(v)) throw std::invalid_argument("instance: nominal costs must be finite and >= 0");
  for (double v : d)
    if (!ok(v)) throw std::invalid_argument("instance: deviations must be finite and >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("instance: gamma must be finite and >= 0");
  gamma = std::min(gamma, static_cast<double>(n));
}

Solution make_solution(const BudgetedInstance& inst, Bits bits) {
  if (bits.size() != inst.n)
    throw std::invalid_argument("solution: bit vector must match the item count");
  Solution s;
  s.bits = std::move(bits);
  s.perm.resize(inst.n);
  std::iota(s.perm.begin(), s.perm.end(), std::size_t{0});
  std::vector<double> dev(inst.n, 0.0);
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (s.bits[i]) {
      s.nominal += inst.c_hat[i];
      dev[i] = inst.d[i];
    }
  }
  std::stable_sort(s.perm.begin(), s.perm.end(),
                   [&](std::size_t a, std::size_t b) { return dev[a] > dev[b]; });
  s.dev_sorted.resize(inst.n);
  for (std::size_t r = 0; r < inst.n; ++r) s.dev_sorted[r] = dev[s.perm[r]];
  return s;
}

double gamma_norm(const std::vector<double>& v, double g) {
  if (!(g >= 0.0) || g > static_cast<double>(v.size()) + kAbsTol)
    throw std::invalid_argument("gamma_norm: budget must lie in [0, len(v)]");
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t whole = static_cast<std::size_t>(std::floor(g + kAbsTol));
  const double frac = g - static_cast<double>(whole);
  double total = 0.0;
  for (std::size_t i = 0; i < whole && i < sorted.size(); ++i) total += sorted[i];
  if (frac > kAbsTol && whole < sorted.size()) total += frac * sorted[whole];
  return total;
}

double worst_case_single(const BudgetedInstance& inst, const Solution& x) {
  // The adversary fills the budget greedily over d^x, which is presorted.
  const std::size_t whole = static_cast<std::size_t>(std::floor(inst.gamma + kAbsTol));
  const double frac = inst.gamma - static_cast<double>(whole);
  double total = x.nominal;
  for (std::size_t i = 0; i < whole && i < x.dev_sorted.size(); ++i) total += x.dev_sorted[i];
  if (frac > kAbsTol && whole < x.dev_sorted.size()) total += frac * x.dev_sorted[whole];
  return total;
}

std::pair<double, Scenario> cost_of_tuple(const BudgetedInstance& inst, const KTuple& t) {
  if (t.members.empty()) throw std::invalid_argument("cost_of_tuple: empty tuple");
  // Variables: z (free), then ζ_i for items in the union support with d_i > 0.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.d[i] <= 0.0) continue;
    for (const Solution& m : t.members) {
      if (m.bits[i]) {
        support.push_back(i);
        break;
      }
    }
  }
  const std::size_t ns = support.size();
  LinearProgram lp(1 + ns, 0.0, 1.0);
  lp.set_bounds(0, -kInf, kInf);
  lp.objective[0] = -1.0;  // max z
  for (const Solution& m : t.members) {
    std::vector<double> row(1 + ns, 0.0);
    row[0] = 1.0;
    for (std::size_t s = 0; s < ns; ++s)
      if (m.bits[support[s]]) row[1 + s] = -inst.d[support[s]];
    lp.add_row(std::move(row), RowSense::LessEqual, m.nominal);
  }
  {
    std::vector<double> budget(1 + ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) budget[1 + s] = 1.0;
    lp.add_row(std::move(budget), RowSense::LessEqual, inst.gamma);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw InternalError("cost_of_tuple: evaluation LP not optimal (status " +
                        std::to_string(static_cast<int>(sol.status)) + ")");
  Scenario scen;
  scen.z.assign(inst.n, 0.0);
  for (std::size_t s = 0; s < ns; ++s)
    scen.z[support[s]] = std::clamp(sol.primal[1 + s], 0.0, 1.0);
  scen.realized.resize(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i)
    scen.realized[i] = inst.c_hat[i] + inst.d[i] * scen.z[i];
  return {-sol.objective, std::move(scen)};
}

namespace {

// Dual value at a fixed simplex point: Σ_j α_j ĉᵀx^(j) + ||Σ_j α_j d∘x^(j)||^(Γ).
double dual_value(const BudgetedInstance& inst, const KTuple& t,
                  const std::vector<std::size_t>& support,
                  const std::vector<std::vector<double>>& dev_on_support,
                  const std::vector<double>& alpha, std::vector<double>& scratch) {
  double value = 0.0;
  scratch.assign(support.size(), 0.0);
  for (std::size_t j = 0; j < t.k(); ++j) {
    value += alpha[j] * t.members[j].nominal;
    if (alpha[j] == 0.0) continue;
    const std::vector<double>& dev = dev_on_support[j];
    for (std::size_t s = 0; s < support.size(); ++s) scratch[s] += alpha[j] * dev[s];
  }
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  const double g = std::min(inst.gamma, static_cast<double>(scratch.size()));
  const std::size_t whole = static_cast<std::size_t>(std::floor(g + kAbsTol));
  const double frac = g - static_cast<double>(whole);
  for (std::size_t i = 0; i < whole && i < scratch.size(); ++i) value += scratch[i];
  if (frac > kAbsTol && whole < scratch.size()) value += frac * scratch[whole];
  return value;
}

}  // namespace

double cost_of_tuple_dual_oracle(const BudgetedInstance& inst, const KTuple& t, int grid) {
  const std::size_t k = t.k();
  if (k == 0) throw std::invalid_argument("dual oracle: empty tuple");
  if (k > 3) throw std::invalid_argument("dual oracle: only k <= 3 supported");
  if (grid < 10) throw std::invalid_argument("dual oracle: grid must be >= 10");

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.d[i] <= 0.0) continue;
    for (const Solution& m : t.members)
      if (m.bits[i]) {
        support.push_back(i);
        break;
      }
  }
  std::vector<std::vector<double>> dev_on_support(k, std::vector<double>(support.size(), 0.0));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t s = 0; s < support.size(); ++s)
      if (t.members[j].bits[support[s]]) dev_on_support[j][s] = inst.d[support[s]];

  std::vector<double> scratch;
  auto eval = [&](const std::vector<double>& alpha) {
    return dual_value(inst, t, support, dev_on_support, alpha, scratch);
  };

  if (k == 1) return eval({1.0});

  const double step = 1.0 / grid;
  double best = kInf;
  std::vector<double> best_alpha(k, 0.0);
  auto consider = [&](const std::vector<double>& alpha) {
    const double v = eval(alpha);
    if (v < best) {
      best = v;
      best_alpha = alpha;
    }
  };

  auto sweep = [&](double lo0, double hi0, double lo1, double hi1, double h) {
    std::vector<double> alpha(k, 0.0);
    if (k == 2) {
      for (double a = lo0; a <= hi0 + 1e-12; a += h) {
        alpha[0] = std::clamp(a, 0.0, 1.0);
        alpha[1] = 1.0 - alpha[0];
        consider(alpha);
      }
    } else {
      for (double a = lo0; a <= hi0 + 1e-12; a += h) {
        const double ca = std::clamp(a, 0.0, 1.0);
        for (double b = lo1; b <= hi1 + 1e-12; b += h) {
          const double cb = std::clamp(b, 0.0, 1.0);
          if (ca + cb > 1.0 + 1e-12) break;
          alpha[0] = ca;
          alpha[1] = std::min(cb, 1.0 - ca);
          alpha[2] = 1.0 - alpha[0] - alpha[1];
          consider(alpha);
        }
      }
    }
  };

  sweep(0.0, 1.0, 0.0, 1.0, step);
  // One refinement pass over the +-1-cell neighborhood of the grid minimum.
  const double fine = 2.0 * step / grid;
  sweep(std::max(0.0, best_alpha[0] - step), std::min(1.0, best_alpha[0] + step),
        k == 3 ? std::max(0.0, best_alpha[1] - step) : 0.0,
        k == 3 ? std::min(1.0, best_alpha[1] + step) : 1.0, fine);
  return best;
}

std::vector<Solution> enumerate_solutions_under(const BudgetedInstance& inst, double ub,
                                                EnumeratorKind kind, std::size_t cap) {
  std::vector<Bits> raw;
  if (kind == EnumeratorKind::Recursive && inst.ground->has_recursive_enumerator())
    raw = inst.ground->enumerate_under(inst.c_hat, ub, cap);
  else
    raw = enumerate_generic_under(*inst.ground, inst.c_hat, ub, cap);
  std::vector<Solution> out;
  out.reserve(raw.size());
  for (Bits& b : raw) out.push_back(make_solution(inst, std::move(b)));
  return out;
}

std::vector<Solution> enumerate_all_solutions(const BudgetedInstance& inst, std::size_t cap) {
  double total = 1.0;
  for (double c : inst.c_hat) total += c;
  return enumerate_solutions_under(inst, total, EnumeratorKind::Recursive, cap);
}

std::pair<double, KTuple> brute_force_optimum(const BudgetedInstance& inst, int k,
                                              std::size_t max_solutions, double max_tuples) {
  if (k < 1) throw std::invalid_argument("brute force: k must be >= 1");
  const std::vector<Solution> all = enumerate_all_solutions(inst, max_solutions + 1);
  if (all.empty()) throw InfeasibleError("brute force: ground set is empty");
  if (all.size() > max_solutions)
    throw SizeError("brute force: ground set too large; use a smaller instance");
  const std::size_t r = all.size();
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(k), r);

  double combos = 1.0;
  for (std::size_t i = 0; i < m; ++i) combos = combos * static_cast<double>(r - i) / (i + 1);
  if (combos > max_tuples)
    throw SizeError("brute force: too many tuples; use a smaller instance");

  // By monotonicity in k, unordered m-subsets of distinct solutions suffice
  // (duplicated members never beat a strictly larger member set).
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  double best = kInf;
  std::vector<std::size_t> best_idx;
  while (true) {
    KTuple t;
    t.members.reserve(m);
    for (std::size_t i : idx) t.members.push_back(all[i]);
    const double value = cost_of_tuple(inst, t).first;
    if (value < best) {
      best = value;
      best_idx = idx;
    }
    std::size_t i = m;
    bool done = true;
    while (i-- > 0) {
      if (idx[i] + (m - i) < r) {
        ++idx[i];
        for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
        done = false;
        break;
      }
    }
    if (done) break;
  }
  KTuple bt;
  for (std::size_t i : best_idx) bt.members.push_back(all[i]);
  return {best, std::move(bt)};
}

}  // namespace kadapt
