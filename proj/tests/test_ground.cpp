#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "kadapt/ground.hpp"
#include "test_util.hpp"

using namespace kadapt;

namespace {

// T2: two vertex-disjoint source-sink paths.
// e0={s,a} c=1, e1={a,t} c=1 (P1); e2={s,b} c=2, e3={b,t} c=2 (P2).
Graph t2_graph() { return Graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}}, 0, 3); }
const std::vector<double> t2_cost{1.0, 1.0, 2.0, 2.0};
const Bits kP1{1, 1, 0, 0};
const Bits kP2{0, 0, 1, 1};

}  // namespace

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}, 0, 2), std::invalid_argument);      // self-loop
  CHECK_THROWS_AS(Graph(3, {{0, 1}}, 0, 2), std::invalid_argument);      // t unreachable
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 2}}, 1, 1), std::invalid_argument);  // s == t
}

TEST_CASE("dijkstra_to_sink on T2") {
  const Graph g = t2_graph();
  const auto d = dijkstra_to_sink(g, t2_cost);
  CHECK(d[1] == doctest::Approx(1.0));  // a
  CHECK(d[2] == doctest::Approx(2.0));  // b
  CHECK(d[0] == doctest::Approx(2.0));  // s
}

TEST_CASE("dijkstra single edge and unreachable vertex") {
  // s - t plus an isolated-but-connected-to-s vertex 2 reachable only via s.
  Graph g(3, {{0, 1}, {0, 2}}, 0, 1);
  const auto d = dijkstra_to_sink(g, {7.0, 1.0});
  CHECK(d[0] == doctest::Approx(7.0));
  CHECK(d[2] == doctest::Approx(8.0));

  // A vertex with no edges at all is unreachable from the sink.
  Graph g2(3, {{0, 1}}, 0, 1);
  const auto d2 = dijkstra_to_sink(g2, {2.0});
  CHECK(d2[2] == kInf);
}

TEST_CASE("enumerate_paths_under on T2") {
  const Graph g = t2_graph();
  SUBCASE("ub=5 keeps both paths") {
    const auto got = enumerate_paths_under(g, t2_cost, 5.0);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == kP1);
    CHECK(got[1] == kP2);
  }
  SUBCASE("ub=3 keeps only P1") {
    const auto got = enumerate_paths_under(g, t2_cost, 3.0);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == kP1);
  }
  SUBCASE("ub at the shortest length is empty") {
    CHECK(enumerate_paths_under(g, t2_cost, 2.0).empty());
  }
}

TEST_CASE("deterministic_min") {
  SUBCASE("T2 shortest path is P1") {
    ShortestPathGroundSet gs(t2_graph());
    const auto [v, bits] = gs.deterministic_min(t2_cost);
    CHECK(v == doctest::Approx(2.0));
    CHECK(bits == kP1);
  }
  SUBCASE("T1 selection minimum is {1,2}") {
    auto gs = make_selection_ground(4, 2);
    const auto [v, bits] = gs->deterministic_min({1.0, 2.0, 3.0, 4.0});
    CHECK(v == doctest::Approx(3.0));
    CHECK(bits == Bits{1, 1, 0, 0});
  }
  SUBCASE("zero weights give a zero-value feasible solution") {
    ShortestPathGroundSet gs(t2_graph());
    const auto [v, bits] = gs.deterministic_min({0.0, 0.0, 0.0, 0.0});
    CHECK(v == doctest::Approx(0.0));
    // Still a well-formed s-t path.
    double nominal = 0.0;
    for (std::size_t e = 0; e < bits.size(); ++e) nominal += t2_cost[e] * bits[e];
    CHECK((nominal == doctest::Approx(2.0) || nominal == doctest::Approx(4.0)));
  }
}

TEST_CASE("enumerate_generic_under matches the path enumerator on T2") {
  ShortestPathGroundSet gs(t2_graph());
  const auto generic = enumerate_generic_under(gs, t2_cost, 5.0);
  const auto dfs = enumerate_paths_under(gs.graph(), t2_cost, 5.0);
  CHECK(generic == dfs);
}

TEST_CASE("enumerate_generic_under on T1") {
  auto gs = make_selection_ground(4, 2);
  const std::vector<double> c{1.0, 2.0, 3.0, 4.0};
  CHECK(enumerate_generic_under(*gs, c, 6.0).size() == 4);
  CHECK(enumerate_generic_under(*gs, c, 0.0).empty());
}

TEST_CASE("cross-enumerator equality on 50 random graphs") {
  testutil::Rng rng(555);
  for (int it = 0; it < 50; ++it) {
    const int vertices = testutil::rint(rng, 5, 15);
    const Graph g = testutil::random_sparse_graph(rng, vertices);
    std::vector<double> c(g.num_edges());
    for (double& x : c) x = testutil::rint(rng, 1, 10);
    const auto d = dijkstra_to_sink(g, c);
    const double shortest = d[static_cast<std::size_t>(g.source)];
    const double ub = shortest + testutil::rint(rng, 0, 12);
    ShortestPathGroundSet gs(g);

    const auto dfs = enumerate_paths_under(g, c, ub);
    const auto generic = enumerate_generic_under(gs, c, ub);
    REQUIRE_MESSAGE(dfs == generic, "iteration ", it, " dfs=", dfs.size(),
                    " generic=", generic.size());

    // Every enumerated path is simple and connects source to sink.
    for (const Bits& path : dfs) {
      std::vector<int> degree(g.num_vertices, 0);
      for (std::size_t e = 0; e < path.size(); ++e) {
        if (!path[e]) continue;
        degree[static_cast<std::size_t>(g.edges[e].first)]++;
        degree[static_cast<std::size_t>(g.edges[e].second)]++;
      }
      CHECK(degree[static_cast<std::size_t>(g.source)] == 1);
      CHECK(degree[static_cast<std::size_t>(g.sink)] == 1);
      for (std::size_t v = 0; v < g.num_vertices; ++v) {
        if (static_cast<int>(v) == g.source || static_cast<int>(v) == g.sink) continue;
        CHECK((degree[v] == 0 || degree[v] == 2));
      }
    }

    // Dijkstra route equals the MIP route on the flow description.
    const auto [dv, dbits] = gs.deterministic_min(c);
    const MixedBinaryProgram flow = [&] {
      MixedBinaryProgram p;
      p.lp = LinearProgram(gs.description().columns, 0.0, 1.0);
      for (std::size_t j = 0; j < g.num_edges(); ++j) p.lp.objective[j] = c[j];
      p.lp.rows = gs.description().rows;
      for (std::size_t j = 0; j < gs.description().columns; ++j) p.binary.push_back(j);
      return p;
    }();
    const MipResult mr = solve_mip(flow);
    REQUIRE(mr.status == MipStatus::Optimal);
    CHECK(dv == doctest::Approx(mr.value).epsilon(1e-9));
  }
}
