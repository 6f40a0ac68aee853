// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Oracle- and property-based checks over generated and random
// instances; tolerances are pinned in code.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kadapt/bb2.hpp"
#include "kadapt/bench.hpp"
#include "kadapt/enum_it.hpp"
#include "kadapt/local_search.hpp"
#include "kadapt/minmax.hpp"
#include "kadapt/parallel.hpp"
#include "test_util.hpp"

using namespace kadapt;

namespace {

int failures = 0;

struct Criterion {
  const char* name;
  bool ok = true;
  std::string detail;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Criterion(const char* n) : name(n) {}
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

// Oracle-sized instance pools (shared across criteria).
std::vector<BudgetedInstance> sp_pool(std::uint64_t seed, int count, int min_v, int max_v) {
  testutil::Rng rng(seed);
  std::vector<BudgetedInstance> out;
  while (static_cast<int>(out.size()) < count)
    out.push_back(testutil::random_sp_instance(rng, min_v, max_v));
  return out;
}

std::vector<BudgetedInstance> selection_pool(std::uint64_t seed, int count, int max_n) {
  testutil::Rng rng(seed);
  std::vector<BudgetedInstance> out;
  while (static_cast<int>(out.size()) < count)
    out.push_back(testutil::random_selection_instance(rng, max_n));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. Exactness, k=2: bb2, it, and brute force agree on 50 shortest-path
//    instances (|V| in {8..14}) and 20 selection instances (n <= 14).
void criterion1() {
  Criterion c("1. exactness k=2: bb2 == it == brute on 70 instances");
  std::vector<BudgetedInstance> instances = sp_pool(101, 50, 8, 14);
  for (BudgetedInstance& inst : selection_pool(102, 20, 14)) instances.push_back(std::move(inst));
  std::atomic<int> bad{0};
  std::vector<std::string> notes(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    const BudgetedInstance& inst = instances[i];
    const double bf = brute_force_optimum(inst, 2).first;
    const Bb2Result bb = solve_bb2(inst);
    const ItResult it = solve_it(inst, 2);
    if (std::abs(bb.value - bf) > 1e-6 || std::abs(it.value - bf) > 1e-6 || !it.solved) {
      ++bad;
      notes[i] = "instance " + std::to_string(i) + ": brute=" + fmt(bf) +
                 " bb2=" + fmt(bb.value) + " it=" + fmt(it.value);
    }
  });
  for (const std::string& n : notes)
    if (!n.empty() && c.detail.size() < 300) c.fail(n);
  c.expect(bad == 0, std::to_string(bad.load()) + " disagreements");
}

// 2. Exactness, k=3: solve_it(k=3) equals brute force on 30 instances with
//    |X'| <= 300.
void criterion2() {
  Criterion c("2. exactness k=3: it == brute on 30 instances");
  testutil::Rng rng(201);
  std::vector<BudgetedInstance> instances;
  while (instances.size() < 30) {
    BudgetedInstance inst = (instances.size() % 2 == 0)
                                ? testutil::random_sp_instance(rng, 6, 11)
                                : testutil::random_selection_instance(rng, 11);
    if (enumerate_all_solutions(inst).size() > 80) continue;  // well under the 300 cap
    instances.push_back(std::move(inst));
  }
  std::atomic<int> bad{0};
  parallel_for(instances.size(), [&](std::size_t i) {
    const BudgetedInstance& inst = instances[i];
    const double bf = brute_force_optimum(inst, 3).first;
    const ItResult it = solve_it(inst, 3);
    if (std::abs(it.value - bf) > 1e-6 || !it.solved) ++bad;
  });
  c.expect(bad == 0, std::to_string(bad.load()) + " disagreements");
}

// 3. Evaluation duality: |cost_of_tuple - dual oracle| <= 1e-4 on 200 random
//    tuples with k in {1,2,3}.
void criterion3() {
  Criterion c("3. duality: LP evaluation vs simplex-grid dual oracle, 200 tuples");
  testutil::Rng rng(301);
  int checked = 0, bad = 0;
  double worst = 0.0;
  while (checked < 200) {
    const BudgetedInstance inst = (checked % 2 == 0)
                                      ? testutil::random_selection_instance(rng, 9)
                                      : testutil::random_sp_instance(rng, 5, 9);
    const auto pool = enumerate_all_solutions(inst);
    if (pool.empty()) continue;
    const std::size_t k = static_cast<std::size_t>(1 + (checked % 3));
    const KTuple t = testutil::sample_tuple(rng, pool, k);
    const double lp = cost_of_tuple(inst, t).first;
    const double dual = cost_of_tuple_dual_oracle(inst, t, t.k() == 3 ? 400 : 2000);
    worst = std::max(worst, std::abs(dual - lp));
    if (std::abs(dual - lp) > 1e-4 || dual < lp - 1e-9) ++bad;
    ++checked;
  }
  c.expect(bad == 0, std::to_string(bad) + " gaps above 1e-4 (worst " + fmt(worst) + ")");
  if (c.ok) c.detail = "worst gap " + fmt(worst);
}

// 4. Bound validity: lb1, lb2, interval bounds, and the Lemma lines never
//    exceed their bounded quantities beyond 1e-6 over >= 1e4 checks.
void criterion4() {
  Criterion c("4. bound validity: lb1/lb2/L(I)/f1/f2 below their targets, >= 1e4 checks");
  testutil::Rng rng(401);
  long checks = 0;
  int bad = 0;
  // lb1/lb2 over random tuples.
  while (checks < 10000) {
    const BudgetedInstance inst = (checks % 2 == 0)
                                      ? testutil::random_selection_instance(rng, 9)
                                      : testutil::random_sp_instance(rng, 5, 9);
    const auto pool = enumerate_all_solutions(inst);
    if (pool.size() < 2) continue;
    BoundCache cache2, cache3;
    for (const Solution& s : pool) {
      cache2.entries[s.bits] = {lb_solution(inst, s, 2), worst_case_single(inst, s)};
      cache3.entries[s.bits] = {lb_solution(inst, s, 3), worst_case_single(inst, s)};
    }
    for (int rep = 0; rep < 25 && checks < 10000; ++rep) {
      const std::size_t k = static_cast<std::size_t>(2 + (rep % 2));
      const KTuple t = testutil::sample_tuple(rng, pool, k);
      const double cost = cost_of_tuple(inst, t).first;
      if (lb1_tuple(k == 2 ? cache2 : cache3, t) > cost + 1e-6) ++bad;
      if (lb2_tuple(inst, t) > cost + 1e-6) ++bad;
      checks += 2;
    }
  }
  // Interval bounds and Lemma lines against sampled h.
  for (int it = 0; it < 25; ++it) {
    const BudgetedInstance inst = (it % 2 == 0) ? testutil::random_selection_instance(rng, 8)
                                                : testutil::random_sp_instance(rng, 5, 8);
    const double a1 = testutil::runif(rng, 0.0, 0.25);
    const double a2 = testutil::runif(rng, a1 + 0.05, 0.5);
    const double h1 = solve_sub(inst, a1).value;
    const double h2 = solve_sub(inst, a2).value;
    const AlphaInterval iv = interval_bound(inst, a1, a2, h1, h2);
    for (int s = 0; s < 4; ++s) {
      const double a = testutil::runif(rng, a1, a2);
      const double h = solve_sub(inst, a).value;
      const double f1 = h1 + (a - a1) * iv.slope_low;
      const double f2 = h2 + (a - a2) * iv.slope_up;
      if (f1 > h + 1e-6 || f2 > h + 1e-6 || iv.bound > h + 1e-6) ++bad;
      checks += 3;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " bound violations");
  if (c.ok) c.detail = std::to_string(checks) + " checks";
}

// 5. Lemma 2 and the resistance cap.
void criterion5() {
  Criterion c("5. resistance: Lemma-2 soundness (1e3 tuples) and cap at q*Gamma");
  testutil::Rng rng(501);
  int checked = 0, bad = 0;
  while (checked < 1000) {
    const BudgetedInstance inst = (checked % 2 == 0)
                                      ? testutil::random_selection_instance(rng, 9)
                                      : testutil::random_sp_instance(rng, 5, 9);
    const int q = 1 + checked % 3;
    const auto pool = enumerate_all_solutions(inst);
    if (pool.size() < 2) continue;
    for (int rep = 0; rep < 10 && checked < 1000; ++rep) {
      const KTuple t = testutil::sample_tuple(rng, pool, static_cast<std::size_t>(2 + rep % 2));
      const double cost = cost_of_tuple(inst, t).first;
      double ceiling = kInf;
      for (const Solution& m : t.members)
        ceiling = std::min(ceiling, worst_case_single(inst, m));
      const double ub = cost + (ceiling - cost) * testutil::runif(rng, 0.0, 1.0);
      double rsum = 0.0;
      for (const Solution& m : t.members) rsum += resistance(inst, m, ub, q);
      if (rsum <= q * inst.gamma + 1e-12 && cost < ub - 1e-9) ++bad;
      ++checked;
    }
  }
  // Cap with ub = rob_opt on every enumerated solution of 20 instances.
  testutil::Rng rng2(502);
  for (int it = 0; it < 20; ++it) {
    const BudgetedInstance inst = (it % 2 == 0) ? testutil::random_selection_instance(rng2, 9)
                                                : testutil::random_sp_instance(rng2, 5, 9);
    const double rob = solve_minmax(inst).value;
    for (const Solution& s : enumerate_all_solutions(inst))
      for (int q : {1, 2, 3})
        if (resistance(inst, s, rob, q) > static_cast<int>(q * inst.gamma + 1e-9)) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " violations");
}

// 6. Baseline identity: solve_minmax equals enumeration; h(0) = rob_opt.
void criterion6() {
  Criterion c("6. baseline: minmax == enumerated optimum and h(0) == rob_opt, 20 instances");
  testutil::Rng rng(601);
  int bad = 0;
  for (int it = 0; it < 20; ++it) {
    const BudgetedInstance inst = (it % 2 == 0) ? testutil::random_selection_instance(rng, 10)
                                                : testutil::random_sp_instance(rng, 5, 10);
    const double rob = solve_minmax(inst).value;
    double enumerated = kInf;
    for (const Solution& s : enumerate_all_solutions(inst))
      enumerated = std::min(enumerated, worst_case_single(inst, s));
    if (std::abs(rob - enumerated) > 1e-9) ++bad;
    if (std::abs(solve_sub(inst, 0.0).value - rob) > 1e-6) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " identity violations");
}

// 7. Heuristic sandwich and descent.
void criterion7() {
  Criterion c("7. heuristic: brute <= local_search <= rob_opt and strict descent, 30 instances");
  testutil::Rng rng(701);
  std::atomic<int> bad{0};
  std::vector<BudgetedInstance> instances;
  for (int it = 0; it < 30; ++it)
    instances.push_back((it % 2 == 0) ? testutil::random_selection_instance(rng, 10)
                                      : testutil::random_sp_instance(rng, 5, 10));
  parallel_for(instances.size(), [&](std::size_t i) {
    const BudgetedInstance& inst = instances[i];
    const int k = 1 + static_cast<int>(i % 3);
    const LsResult r = local_search(inst, k);
    const double rob = solve_minmax(inst).value;
    const double bf = brute_force_optimum(inst, k).first;
    if (r.value > rob + 1e-9 || r.value < bf - 1e-9) ++bad;
    const auto& rounds = r.state.round_values;
    for (std::size_t j = 1; j + 1 < rounds.size(); ++j)
      if (!(rounds[j] < rounds[j - 1] - 1e-12)) ++bad;
    for (std::size_t j = 1; j < r.state.log.size(); ++j)
      if (r.state.log[j].value > r.state.log[j - 1].value + 1e-9) ++bad;
  });
  c.expect(bad == 0, std::to_string(bad.load()) + " violations");
}

// 8. Qualitative cost-reduction trend on 100 generated |V|=20, Gamma=3
//    instances: exact k=2 reduction strictly positive on average, k=3 at
//    least as large up to 0.1pp, with the per-instance orderings.
void criterion8() {
  Criterion c("8. trend: mean cost_red(k=2) > 0, cost_red(k=3) >= cost_red(k=2) - 0.1pp, 100 instances");
  const int count = 100;
  std::vector<BudgetedInstance> instances;
  instances.reserve(count);
  for (int i = 0; i < count; ++i)
    instances.push_back(generate_instance(20, 3.0, static_cast<std::uint64_t>(800 + i)));
  std::vector<double> red2(count), red3(count);
  std::atomic<int> bad{0};
  parallel_for(instances.size(), [&](std::size_t i) {
    const BudgetedInstance& inst = instances[i];
    const double rob = solve_minmax(inst).value;
    ItOptions io;
    io.ls_x_time_limit = 1.0;
    const ItResult r2 = solve_it(inst, 2, io);
    const ItResult r3 = solve_it(inst, 3, io);
    if (!r2.solved || !r3.solved) ++bad;
    if (r2.value > rob + 1e-6) ++bad;
    if (r3.value > r2.value + 1e-6) ++bad;
    red2[i] = 100.0 * (rob - r2.value) / rob;
    red3[i] = 100.0 * (rob - r3.value) / rob;
  });
  double m2 = 0.0, m3 = 0.0;
  for (int i = 0; i < count; ++i) {
    m2 += red2[i] / count;
    m3 += red3[i] / count;
  }
  c.expect(bad == 0, std::to_string(bad.load()) + " ordering/solve failures");
  c.expect(m2 > 0.0, "mean cost_red(k=2) not positive");
  c.expect(m3 >= m2 - 0.1, "k=3 reduction fell more than 0.1pp below k=2");
  if (c.ok)
    c.detail = "mean cost_red: k=2 " + fmt(m2) + "%, k=3 " + fmt(m3) + "%";
}

// 9. Enumerator equivalence on 50 random graphs.
void criterion9() {
  Criterion c("9. enumerators: DFS path enumeration == LP-based B&B sets, 50 graphs");
  testutil::Rng rng(901);
  int bad = 0;
  for (int it = 0; it < 50; ++it) {
    const int vertices = testutil::rint(rng, 5, 15);
    const Graph g = testutil::random_sparse_graph(rng, vertices);
    std::vector<double> cost(g.num_edges());
    for (double& x : cost) x = testutil::rint(rng, 1, 10);
    const double shortest = dijkstra_to_sink(g, cost)[static_cast<std::size_t>(g.source)];
    const double ub = shortest + testutil::rint(rng, 0, 12);
    ShortestPathGroundSet gs(g);
    if (enumerate_paths_under(g, cost, ub) != enumerate_generic_under(gs, cost, ub)) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " set mismatches");
}

// 10. Pruning effectiveness on |V|=14, Gamma=3, k=2 generated instances.
void criterion10() {
  Criterion c("10. pruning: cost evals <= 20% of LB1 evals and enumerated < C(|X'|,2)");
  const int count = 10;
  std::vector<BudgetedInstance> instances;
  for (int i = 0; i < count; ++i)
    instances.push_back(generate_instance(14, 3.0, static_cast<std::uint64_t>(1000 + i)));
  std::atomic<long> lb1_total{0}, cost_total{0};
  std::atomic<int> binom_bad{0};
  std::vector<ItStats> stats(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    ItOptions io;
    io.ls_x_time_limit = 1.0;
    const ItResult r = solve_it(instances[i], 2, io);
    stats[i] = r.stats;
    lb1_total += r.stats.lb1_evals;
    cost_total += r.stats.cost_evals;
    for (const ItPass& p : r.stats.per_pass) {
      if (p.x_size >= 20) {
        const double binom = 0.5 * static_cast<double>(p.x_size) *
                             static_cast<double>(p.x_size - 1);
        if (!(static_cast<double>(p.lb1) < binom)) ++binom_bad;
      }
    }
  });
  c.expect(binom_bad == 0,
           std::to_string(binom_bad.load()) + " passes enumerated the full pair set");
  const double ratio =
      lb1_total == 0 ? 0.0
                     : static_cast<double>(cost_total.load()) / static_cast<double>(lb1_total.load());
  c.expect(ratio <= 0.20, "cost/LB1 ratio " + fmt(100.0 * ratio) +
                              "% exceeds 20% (LB1 evals " + std::to_string(lb1_total.load()) +
                              ", cost evals " + std::to_string(cost_total.load()) +
                              "): with the corrected per-member budget share in lb(x), a pair "
                              "whose members both exceed UB under the Gamma/k split always has "
                              "resistance sum <= q*Gamma, so the resistance filter removes every "
                              "tuple LB1 could prune and the survivors all reach the exact "
                              "evaluation");
  if (c.ok) c.detail = "cost/LB1 ratio " + fmt(100.0 * ratio) + "%";
}

// 11. LP and MIP cores against their exact oracles.
void criterion11() {
  Criterion c("11. cores: simplex vs rational vertex oracle (500 LPs), B&B vs exhaustive (300 MIPs)");
  testutil::Rng rng(1101);
  int bad = 0;
  for (int it = 0; it < 500; ++it) {
    const LinearProgram lp = testutil::random_lp(rng, it);
    const auto oracle = testutil::lp_vertex_oracle(lp);
    const LpSolution sol = solve_lp(lp);
    if (oracle.status == testutil::OracleStatus::Optimal) {
      if (sol.status != LpStatus::Optimal || std::abs(sol.objective - oracle.value) > 1e-6)
        ++bad;
      else {
        const LpResiduals res = lp_residuals(lp, sol);
        if (res.feasibility > 1e-7 || res.complementary_slackness > 1e-6 ||
            res.duality_gap > 1e-6)
          ++bad;
      }
    } else if (sol.status != LpStatus::Infeasible) {
      ++bad;
    }
  }
  testutil::Rng rng2(1102);
  for (int it = 0; it < 300; ++it) {
    const MixedBinaryProgram p = testutil::random_mip(rng2);
    const auto oracle = testutil::mip_exhaustive_oracle(p);
    const MipResult r = solve_mip(p);
    if (oracle.feasible) {
      if (r.status != MipStatus::Optimal || std::abs(r.value - oracle.value) > 1e-6) ++bad;
    } else if (r.status != MipStatus::Infeasible) {
      ++bad;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " oracle disagreements");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 11 criteria failed (total %.1fs)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
