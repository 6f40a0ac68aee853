#include "kadapt/local_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "model_build.hpp"

namespace kadapt {
namespace {

void check_simplex(const std::vector<double>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("alpha must be nonempty");
  double sum = 0.0;
  for (double a : alpha) {
    if (a < -kAbsTol) throw std::invalid_argument("alpha must be nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("alpha must sum to one");
}

double tuple_objective(const BudgetedInstance& inst, const KTuple& t,
                       const std::vector<double>& alpha, const detail::ThetaGamma& tg) {
  double v = inst.gamma * tg.theta;
  for (double g : tg.gamma) v += g;
  for (std::size_t j = 0; j < t.k(); ++j) v += alpha[j] * t.members[j].nominal;
  return v;
}

}  // namespace

XStepResult x_step(const BudgetedInstance& inst, const std::vector<double>& alpha,
                   const XStepOptions& opts) {
  check_simplex(alpha);
  const std::size_t k = alpha.size();
  detail::TupleMip mip = detail::build_tuple_mip(inst, alpha, alpha);

  MipOptions mo;
  mo.time_limit = opts.time_limit;
  std::vector<Bits> seed_bits;
  if (opts.warm_start != nullptr) {
    if (opts.warm_start->k() != k)
      throw std::invalid_argument("x_step: warm start arity mismatch");
    for (const Solution& m : opts.warm_start->members) seed_bits.push_back(m.bits);
  } else {
    // Always seed an incumbent so a time limit still returns a tuple.
    const auto [v, bits] = inst.ground->deterministic_min(inst.c_hat);
    (void)v;
    seed_bits.assign(k, bits);
  }
  mo.warm_start = detail::tuple_warm_start(mip, inst, seed_bits, alpha);
  const MipResult r = solve_mip(mip.program, mo);
  if (r.status == MipStatus::Infeasible) throw InfeasibleError("x_step: ground set is empty");
  if (!r.has_incumbent) throw InternalError("x_step: no incumbent");

  XStepResult out;
  out.time_limited = (r.status == MipStatus::TimeLimit);
  out.tuple = detail::extract_tuple(mip, inst, r.x);
  std::vector<Bits> bits;
  for (const Solution& m : out.tuple.members) bits.push_back(m.bits);
  const detail::ThetaGamma tg = detail::optimal_theta_gamma(inst, bits, alpha);
  out.theta = tg.theta;
  out.gamma_vec = tg.gamma;
  out.value = tuple_objective(inst, out.tuple, alpha, tg);
  return out;
}

std::pair<DualBlock, double> alpha_step(const BudgetedInstance& inst, const KTuple& t) {
  if (t.members.empty()) throw std::invalid_argument("alpha_step: empty tuple");
  const std::size_t k = t.k();
  // Variables: α_1..α_k, then γ_i on the deviation support, then θ.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.d[i] <= 0.0) continue;
    for (const Solution& m : t.members)
      if (m.bits[i]) {
        support.push_back(i);
        break;
      }
  }
  const std::size_t ns = support.size();
  LinearProgram lp(k + ns + 1, 0.0, kInf);
  for (std::size_t j = 0; j < k; ++j) {
    lp.set_bounds(j, 0.0, 1.0);
    lp.objective[j] = t.members[j].nominal;
  }
  for (std::size_t s = 0; s < ns; ++s) lp.objective[k + s] = 1.0;
  lp.objective[k + ns] = inst.gamma;
  {
    std::vector<double> simplex(k + ns + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j) simplex[j] = 1.0;
    lp.add_row(std::move(simplex), RowSense::Equal, 1.0);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    const std::size_t i = support[s];
    std::vector<double> row(k + ns + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      if (t.members[j].bits[i]) row[j] = inst.d[i];
    row[k + s] = -1.0;
    row[k + ns] = -1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw InternalError("alpha_step: LP not optimal");

  DualBlock db;
  db.alpha.resize(k);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    db.alpha[j] = std::max(0.0, sol.primal[j]);
    sum += db.alpha[j];
  }
  for (double& a : db.alpha) a /= sum;
  db.theta = std::max(0.0, sol.primal[k + ns]);
  db.gamma_vec.assign(inst.n, 0.0);
  for (std::size_t s = 0; s < ns; ++s)
    db.gamma_vec[support[s]] = std::max(0.0, sol.primal[k + s]);
  return {std::move(db), sol.objective};
}

LsResult local_search(const BudgetedInstance& inst, int k, const LsOptions& opts) {
  if (k < 1) throw std::invalid_argument("local_search: k must be >= 1");
  std::vector<double> alpha;
  if (opts.initial_alpha) {
    alpha = *opts.initial_alpha;
    check_simplex(alpha);
    if (alpha.size() != static_cast<std::size_t>(k))
      throw std::invalid_argument("local_search: initial alpha arity mismatch");
  } else {
    alpha.resize(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j)
      alpha[static_cast<std::size_t>(j - 1)] = 2.0 * j / (k * (k + 1.0));
  }

  LsResult res;
  LsState& st = res.state;
  const auto t0 = std::chrono::steady_clock::now();
  auto ms = [&]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  double prev = kInf;
  KTuple warm;
  while (true) {
    XStepOptions xo;
    xo.time_limit = opts.x_time_limit;
    if (!warm.members.empty()) xo.warm_start = &warm;
    const XStepResult xr = x_step(inst, alpha, xo);
    st.log.push_back({LsStep::XStep, xr.value, ms()});
    if (xr.time_limited) st.x_step_time_limited = true;

    auto [db, va] = alpha_step(inst, xr.tuple);
    st.log.push_back({LsStep::AlphaStep, va, ms()});
    st.round_values.push_back(va);

    const bool improving = va < prev - opts.tol;
    if (va < prev) {
      st.tuple = xr.tuple;
      st.dual = db;
      st.value = va;
      prev = va;
    }
    if (!improving) break;
    alpha = st.dual.alpha;
    warm = st.tuple;
  }
  res.tuple = st.tuple;
  res.value = st.value;
  return res;
}

}  // namespace kadapt
