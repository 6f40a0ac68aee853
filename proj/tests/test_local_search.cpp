#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kadapt/local_search.hpp"
#include "kadapt/minmax.hpp"
#include "test_util.hpp"

using namespace kadapt;

namespace {

Solution pick(const BudgetedInstance& inst, std::initializer_list<int> ones) {
  Bits b(inst.n, 0);
  for (int i : ones) b[static_cast<std::size_t>(i)] = 1;
  return make_solution(inst, std::move(b));
}

double x_step_identity(const BudgetedInstance& inst, const XStepResult& xr,
                       const std::vector<double>& alpha) {
  double v = inst.gamma * xr.theta;
  for (double g : xr.gamma_vec) v += g;
  for (std::size_t j = 0; j < xr.tuple.k(); ++j)
    v += alpha[j] * xr.tuple.members[j].nominal;
  return v;
}

}  // namespace

TEST_CASE("x_step objective identity") {
  const BudgetedInstance t1 = testutil::t1_instance();
  const std::vector<double> alpha{1.0 / 3.0, 2.0 / 3.0};
  const XStepResult xr = x_step(t1, alpha);
  CHECK(xr.value == doctest::Approx(x_step_identity(t1, xr, alpha)).epsilon(1e-9));
}

TEST_CASE("x_step with a unit weight solves the min-max problem") {
  const BudgetedInstance t1 = testutil::t1_instance();
  const XStepResult xr = x_step(t1, {1.0, 0.0});
  CHECK(xr.value == doctest::Approx(solve_minmax(t1).value).epsilon(1e-9));
}

TEST_CASE("x_step with d = 0 returns deterministic minima and zero duals") {
  const BudgetedInstance inst({1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0}, 2.0,
                              make_selection_ground(4, 2));
  const XStepResult xr = x_step(inst, {0.5, 0.5});
  CHECK(xr.theta == doctest::Approx(0.0));
  for (double g : xr.gamma_vec) CHECK(g == doctest::Approx(0.0));
  for (const Solution& m : xr.tuple.members) CHECK(m.nominal == doctest::Approx(3.0));
}

TEST_CASE("alpha_step recovers the dual weights on the T1 pair") {
  const BudgetedInstance t1 = testutil::t1_instance();
  const KTuple t{{pick(t1, {0, 1}), pick(t1, {1, 2})}};
  const auto [db, value] = alpha_step(t1, t);
  CHECK(value == doctest::Approx(6.5).epsilon(1e-9));
  CHECK(db.alpha[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(db.alpha[1] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(value == doctest::Approx(cost_of_tuple(t1, t).first).epsilon(1e-9));
}

TEST_CASE("alpha_step trivial cases") {
  const BudgetedInstance t1 = testutil::t1_instance();
  SUBCASE("identical members") {
    const KTuple t{{pick(t1, {0, 1}), pick(t1, {0, 1})}};
    const auto [db, value] = alpha_step(t1, t);
    CHECK(value == doctest::Approx(worst_case_single(t1, t.members[0])));
  }
  SUBCASE("k = 1") {
    const KTuple t{{pick(t1, {0, 1})}};
    const auto [db, value] = alpha_step(t1, t);
    CHECK(db.alpha[0] == doctest::Approx(1.0));
    CHECK(value == doctest::Approx(7.0));
  }
}

TEST_CASE("initial alpha is the documented simplex point") {
  // 2j/(k(k+1)) sums to one for every k; spot-check k=3 -> (1/6, 1/3, 1/2).
  for (int k = 1; k <= 10; ++k) {
    double sum = 0.0;
    for (int j = 1; j <= k; ++j) sum += 2.0 * j / (k * (k + 1.0));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("local_search on the desk instances") {
  const BudgetedInstance t1 = testutil::t1_instance();
  SUBCASE("k = 2 lands between brute force and rob_opt") {
    const LsResult r = local_search(t1, 2);
    CHECK(r.value <= 7.0 + 1e-9);
    CHECK(r.value >= 6.5 - 1e-9);
  }
  SUBCASE("k = 1 equals rob_opt") {
    const LsResult r = local_search(t1, 1);
    CHECK(r.value == doctest::Approx(solve_minmax(t1).value).epsilon(1e-9));
  }
  SUBCASE("gamma = 0 collapses to the deterministic optimum") {
    const BudgetedInstance inst = testutil::t1_instance(0.0);
    const LsResult r = local_search(inst, 2);
    CHECK(r.value == doctest::Approx(3.0));
  }
}

TEST_CASE("descent, feasibility, and the sandwich on random instances") {
  testutil::Rng rng(60221);
  for (int it = 0; it < 20; ++it) {
    const BudgetedInstance inst = (it % 2 == 0)
                                      ? testutil::random_selection_instance(rng, 10)
                                      : testutil::random_sp_instance(rng, 5, 10);
    const int k = 1 + it % 3;
    const LsResult r = local_search(inst, k);

    // Log values never increase; round values decrease strictly until the
    // terminal round.
    for (std::size_t i = 1; i < r.state.log.size(); ++i)
      CHECK(r.state.log[i].value <= r.state.log[i - 1].value + 1e-9);
    const auto& rounds = r.state.round_values;
    REQUIRE(!rounds.empty());
    for (std::size_t i = 1; i + 1 < rounds.size(); ++i)
      CHECK(rounds[i] < rounds[i - 1] - 1e-12);

    // Reported value is the exact cost of the returned tuple.
    CHECK(r.value == doctest::Approx(cost_of_tuple(inst, r.tuple).first).epsilon(1e-6));

    // Sandwich against the exact bounds.
    const double rob = solve_minmax(inst).value;
    const auto [bf, bft] = brute_force_optimum(inst, k);
    CHECK(r.value <= rob + 1e-9);
    CHECK(r.value >= bf - 1e-9);
  }
}
