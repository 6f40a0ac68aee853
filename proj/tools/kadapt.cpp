// Command-line front end: instance generation, single solves, benchmark
// matrices, and the brute-force oracle.
//
// Exit codes: 0 success, 2 when some benchmark cells failed, 1 on hard errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kadapt/bench.hpp"
#include "kadapt/bb2.hpp"
#include "kadapt/enum_it.hpp"
#include "kadapt/local_search.hpp"
#include "kadapt/minmax.hpp"

using namespace kadapt;

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::string> parse_str_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

EnumeratorKind parse_enumerator(const std::string& name) {
  if (name == "dfs") return EnumeratorKind::Recursive;
  if (name == "bnb") return EnumeratorKind::BranchAndBound;
  throw CLI::ValidationError("--enumerator", "must be dfs or bnb");
}

void print_tuple(const KTuple& t) {
  for (std::size_t j = 0; j < t.k(); ++j) {
    std::printf("  member %zu (nominal %g): {", j + 1, t.members[j].nominal);
    bool first = true;
    for (std::size_t i = 0; i < t.members[j].bits.size(); ++i) {
      if (!t.members[j].bits[i]) continue;
      std::printf("%s%zu", first ? "" : ",", i);
      first = false;
    }
    std::printf("}\n");
  }
}

int cmd_generate(int nodes, double gamma, std::uint64_t seed, const std::string& out) {
  const BudgetedInstance inst = generate_instance(nodes, gamma, seed);
  if (out.empty()) {
    std::cout << instance_to_json(inst) << "\n";
  } else {
    write_instance_file(out, inst);
    std::printf("wrote %s (n=%zu, gamma=%g)\n", out.c_str(), inst.n, inst.gamma);
  }
  return 0;
}

int cmd_solve(const std::string& in, const std::string& algo, int k, double gamma_override,
              int q, double time_limit, const std::string& enumerator, std::uint64_t seed,
              const std::string& out) {
  (void)seed;  // all implemented algorithms are deterministic
  BudgetedInstance inst = read_instance_file(in);
  if (gamma_override >= 0.0)
    inst = BudgetedInstance(inst.c_hat, inst.d, gamma_override, inst.ground);

  RunSpec spec;
  spec.algo = algo;
  spec.k = k;
  spec.q = q;
  spec.time_limit = time_limit;
  spec.enumerator = parse_enumerator(enumerator);
  const auto records = run_matrix({{in, inst}}, {spec});
  const RunRecord& rec = records.at(0);
  if (rec.failed) {
    std::fprintf(stderr, "error: %s\n", rec.error.c_str());
    return 1;
  }
  std::printf("algo=%s k=%d gamma=%g value=%.9g time_ms=%ld solved=%d nodes=%ld tuples=%ld cost_red=%.4f\n",
              rec.algo.c_str(), rec.k, rec.gamma, rec.value, rec.time_ms, rec.solved ? 1 : 0,
              rec.nodes, rec.tuples, rec.cost_red);
  if (!out.empty()) {
    std::ofstream f(out);
    f << records_to_csv(records);
  }
  return 0;
}

int cmd_oracle(const std::string& in, int k, double gamma_override) {
  BudgetedInstance inst = read_instance_file(in);
  if (gamma_override >= 0.0)
    inst = BudgetedInstance(inst.c_hat, inst.d, gamma_override, inst.ground);
  const auto [value, tuple] = brute_force_optimum(inst, k);
  std::printf("brute force optimum (k=%d): %.9g\n", k, value);
  print_tuple(tuple);
  return 0;
}

int cmd_bench(const std::string& nodes_list, const std::string& gamma_list,
              const std::string& k_list, const std::string& algos, int instances,
              std::uint64_t seed, int q, double time_limit, const std::string& enumerator,
              const std::string& out) {
  std::vector<std::pair<std::string, BudgetedInstance>> insts;
  for (int nodes : parse_int_list(nodes_list)) {
    for (int gamma : parse_int_list(gamma_list)) {
      for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        std::ostringstream id;
        id << "sp_v" << nodes << "_g" << gamma << "_s" << s;
        insts.push_back({id.str(), generate_instance(nodes, gamma, s)});
      }
    }
  }
  std::vector<RunSpec> specs;
  for (const std::string& algo : parse_str_list(algos)) {
    for (int k : parse_int_list(k_list)) {
      RunSpec spec;
      spec.algo = algo;
      spec.k = algo == "minmax" ? 1 : k;
      spec.q = q;
      spec.time_limit = time_limit;
      spec.enumerator = parse_enumerator(enumerator);
      specs.push_back(spec);
      if (algo == "minmax") break;  // k-independent
    }
  }
  const auto records = run_matrix(insts, specs);
  if (!out.empty()) {
    std::ofstream f(out);
    f << records_to_csv(records);
    std::printf("wrote %zu records to %s\n", records.size(), out.c_str());
  } else {
    std::cout << records_to_csv(records);
  }
  std::printf("%-8s %2s %6s %12s %12s %10s %8s\n", "algo", "k", "cells", "mean_cstred",
              "sd_costred", "mean_ms", "%solved");
  for (const Aggregate& a : aggregate_records(records))
    std::printf("%-8s %2d %6zu %12.3f %12.3f %10.1f %8.1f\n", a.algo.c_str(), a.k, a.cells,
                a.mean_cost_red, a.stddev_cost_red, a.mean_time_ms, a.solved_pct);
  bool any_failed = false;
  for (const RunRecord& r : records)
    if (r.failed) {
      any_failed = true;
      std::fprintf(stderr, "cell failed: %s %s k=%d: %s\n", r.instance_id.c_str(),
                   r.algo.c_str(), r.k, r.error.c_str());
    }
  return any_failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for min-max-min robust combinatorial optimization with budgeted uncertainty"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a shortest-path instance");
  int nodes = 20;
  double gamma = 3.0;
  std::uint64_t seed = 1;
  std::string out;
  gen->add_option("--nodes", nodes, "Number of vertices")->check(CLI::Range(5, 1000));
  gen->add_option("--gamma", gamma, "Uncertainty budget");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--out", out, "Output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver on an instance file");
  std::string in, algo = "it", enumerator = "dfs", solve_out;
  int k = 2, q = 2;
  double time_limit = kInf, gamma_override = -1.0;
  std::uint64_t solve_seed = 1;
  solve->add_option("--in", in, "Instance file")->required();
  solve->add_option("--algo", algo, "minmax | heur | bb2 | it | brute");
  solve->add_option("--k", k, "Number of prepared solutions");
  solve->add_option("--gamma", gamma_override, "Override the instance budget");
  solve->add_option("--q", q, "Resistance granularity for it");
  solve->add_option("--seed", solve_seed, "Seed (reserved; solvers are deterministic)");
  solve->add_option("--time-limit", time_limit, "Time limit in seconds");
  solve->add_option("--enumerator", enumerator, "dfs | bnb");
  solve->add_option("--out", solve_out, "Write a one-row CSV report");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum (oracle-sized instances)");
  std::string oracle_in;
  int oracle_k = 2;
  double oracle_gamma = -1.0;
  oracle->add_option("--in", oracle_in, "Instance file")->required();
  oracle->add_option("--k", oracle_k, "Number of prepared solutions");
  oracle->add_option("--gamma", oracle_gamma, "Override the instance budget");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark matrix and emit CSV");
  std::string nodes_list = "20", gamma_list = "3", k_list = "2", algos = "minmax,heur,it";
  std::string bench_out, bench_enum = "dfs";
  int bench_instances = 10, bench_q = 2;
  double bench_time_limit = kInf;
  std::uint64_t bench_seed = 1;
  bench->add_option("--nodes", nodes_list, "Vertex counts, comma separated");
  bench->add_option("--gamma", gamma_list, "Budgets, comma separated");
  bench->add_option("--k", k_list, "Arities, comma separated");
  bench->add_option("--algos", algos, "Algorithms, comma separated");
  bench->add_option("--instances", bench_instances, "Instances per (nodes, gamma) group");
  bench->add_option("--seed", bench_seed, "Base seed; instance i uses seed+i");
  bench->add_option("--q", bench_q, "Resistance granularity for it");
  bench->add_option("--time-limit", bench_time_limit, "Per-cell time limit in seconds");
  bench->add_option("--enumerator", bench_enum, "dfs | bnb");
  bench->add_option("--out", bench_out, "Report file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_generate(nodes, gamma, seed, out);
    if (solve->parsed())
      return cmd_solve(in, algo, k, gamma_override, q, time_limit, enumerator, solve_seed,
                       solve_out);
    if (oracle->parsed()) return cmd_oracle(oracle_in, oracle_k, oracle_gamma);
    if (bench->parsed())
      return cmd_bench(nodes_list, gamma_list, k_list, algos, bench_instances, bench_seed,
                       bench_q, bench_time_limit, bench_enum, bench_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
