#pragma once

#include <string>
#include <vector>

#include "kadapt/instance.hpp"

namespace kadapt {

/// Deterministic shortest-path instance generator. All randomness flows from
/// the seed through a fixed recipe (documented in the implementation); the
/// same (nodes, gamma, seed) always produces a bit-identical instance.
BudgetedInstance generate_instance(int nodes, double gamma, std::uint64_t seed);

/// Self-describing JSON text form of an instance; serialize -> parse ->
/// serialize is byte-identical.
std::string instance_to_json(const BudgetedInstance& inst);
BudgetedInstance instance_from_json(const std::string& text);
void write_instance_file(const std::string& path, const BudgetedInstance& inst);
BudgetedInstance read_instance_file(const std::string& path);

/// One solver invocation: algorithm, arity, and the knobs it honors.
struct RunSpec {
  std::string algo;  // minmax | heur | bb2 | it | brute
  int k = 2;
  double time_limit = kInf;
  int q = 2;
  EnumeratorKind enumerator = EnumeratorKind::Recursive;
  double ls_x_time_limit = 300.0;
};

/// One benchmark cell. cost_red = 100·(rob_opt − value)/rob_opt against the
/// instance's min-max optimum; nodes/tuples are the solver's search counters
/// (intervals and h-evaluations for bb2; passes and cost evaluations for it;
/// thresholds for minmax; rounds for heur; tuple count for brute).
struct RunRecord {
  std::string instance_id;
  std::string algo;
  int k = 0;
  double gamma = 0.0;
  double value = 0.0;
  long time_ms = 0;
  bool solved = false;
  long nodes = 0;
  long tuples = 0;
  double cost_red = 0.0;
  bool failed = false;
  std::string error;
};

/// Executes every (instance, spec) cell; failures are recorded per cell and
/// never abort the matrix. Each value is re-validated against cost_of_tuple
/// on the witness tuple before it is accepted. Cells run in parallel up to
/// the KADAPT_THREADS worker cap.
std::vector<RunRecord> run_matrix(
    const std::vector<std::pair<std::string, BudgetedInstance>>& instances,
    const std::vector<RunSpec>& specs);

/// CSV with the fixed header
/// instance,algo,k,gamma,value,time_ms,solved,nodes,tuples,cost_red.
/// Doubles use shortest round-trip formatting; serialize -> parse ->
/// serialize is byte-identical.
std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);

/// Per-(algo, k) aggregates over a report.
struct Aggregate {
  std::string algo;
  int k = 0;
  std::size_t cells = 0;
  double mean_value = 0.0;
  double mean_cost_red = 0.0;
  double stddev_cost_red = 0.0;
  double mean_time_ms = 0.0;
  double solved_pct = 0.0;
};
std::vector<Aggregate> aggregate_records(const std::vector<RunRecord>& records);

}  // namespace kadapt
