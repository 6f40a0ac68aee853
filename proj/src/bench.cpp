#include "kadapt/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include <json.hpp>

#include "kadapt/bb2.hpp"
#include "kadapt/enum_it.hpp"
#include "kadapt/local_search.hpp"
#include "kadapt/minmax.hpp"
#include "kadapt/parallel.hpp"

namespace kadapt {
namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// 53-bit uniform in [0,1); engine-independent given the 64-bit stream.
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

// Recipe (fixed; same seed => bit-identical instance):
//   stream a = mt19937_64(splitmix64(seed + a * 0x9E3779B97F4A7C15)), a = 0,1,...
//   draw x_i then y_i for every node, uniform on [0,1);
//   edges are all pairs {u<v} with euclidean distance <= sqrt(4 ln V / V),
//   in lexicographic (u,v) order; edge index = position in that order;
//   source = node closest to (0,0), sink = closest to (1,1) (ties: lowest
//   index); c_e = max(1, ceil(1000 dist)), d_e = ceil(delta_e c_e) with
//   delta_e drawn uniform per edge in index order;
//   if source == sink or they are disconnected, move to the next stream.
BudgetedInstance generate_instance(int nodes, double gamma, std::uint64_t seed) {
  if (nodes < 5) throw std::invalid_argument("generate: need at least 5 nodes");
  const std::size_t V = static_cast<std::size_t>(nodes);
  const double radius = std::sqrt(4.0 * std::log(static_cast<double>(nodes)) / nodes);

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    std::mt19937_64 rng(splitmix64(seed + attempt * 0x9E3779B97F4A7C15ull));
    std::vector<double> xs(V), ys(V);
    for (std::size_t i = 0; i < V; ++i) {
      xs[i] = u01(rng);
      ys[i] = u01(rng);
    }
    std::vector<std::pair<int, int>> edges;
    std::vector<double> dist;
    for (std::size_t u = 0; u < V; ++u) {
      for (std::size_t v = u + 1; v < V; ++v) {
        const double dx = xs[u] - xs[v], dy = ys[u] - ys[v];
        const double e = std::sqrt(dx * dx + dy * dy);
        if (e <= radius) {
          edges.push_back({static_cast<int>(u), static_cast<int>(v)});
          dist.push_back(e);
        }
      }
    }
    int s = 0, t = 0;
    double bs = kInf, bt = kInf;
    for (std::size_t i = 0; i < V; ++i) {
      const double d0 = xs[i] * xs[i] + ys[i] * ys[i];
      const double d1 = (1 - xs[i]) * (1 - xs[i]) + (1 - ys[i]) * (1 - ys[i]);
      if (d0 < bs) {
        bs = d0;
        s = static_cast<int>(i);
      }
      if (d1 < bt) {
        bt = d1;
        t = static_cast<int>(i);
      }
    }
    if (s == t) continue;
    // Connectivity check before constructing the graph.
    std::vector<std::vector<int>> adj(V);
    for (const auto& [u, v] : edges) {
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<char> seen(V, 0);
    std::queue<int> q;
    q.push(s);
    seen[static_cast<std::size_t>(s)] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          q.push(w);
        }
    }
    if (!seen[static_cast<std::size_t>(t)]) continue;

    const std::size_t n = edges.size();
    std::vector<double> c_hat(n), d(n);
    for (std::size_t e = 0; e < n; ++e) {
      c_hat[e] = std::max(1.0, std::ceil(1000.0 * dist[e]));
      d[e] = std::ceil(u01(rng) * c_hat[e]);
    }
    Graph g(V, std::move(edges), s, t);
    return BudgetedInstance(std::move(c_hat), std::move(d), gamma,
                            std::make_shared<ShortestPathGroundSet>(std::move(g)));
  }
  throw std::runtime_error("generate: no connected draw in 100 attempts");
}

std::string instance_to_json(const BudgetedInstance& inst) {
  ordered_json j;
  j["version"] = 1;
  j["n"] = inst.n;
  j["gamma"] = inst.gamma;
  j["c_hat"] = inst.c_hat;
  j["d"] = inst.d;
  ordered_json ground;
  if (const auto* sp = dynamic_cast<const ShortestPathGroundSet*>(inst.ground.get())) {
    const Graph& g = sp->graph();
    ground["type"] = "shortest_path";
    ground["vertices"] = g.num_vertices;
    ordered_json edges = ordered_json::array();
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      edges.push_back({g.edges[e].first, g.edges[e].second, e});
    ground["edges"] = std::move(edges);
    ground["s"] = g.source;
    ground["t"] = g.sink;
  } else {
    ground["type"] = "linear";
    ordered_json rows = ordered_json::array();
    for (const LinearRow& r : inst.ground->description().rows) {
      ordered_json row;
      row["coeffs"] = r.coeffs;
      row["sense"] = r.sense == RowSense::LessEqual ? "le"
                     : r.sense == RowSense::Equal   ? "eq"
                                                    : "ge";
      row["rhs"] = r.rhs;
      rows.push_back(std::move(row));
    }
    ground["rows"] = std::move(rows);
  }
  j["ground"] = std::move(ground);
  return j.dump();
}

BudgetedInstance instance_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  if (j.at("version").get<int>() != 1)
    throw std::invalid_argument("instance: unsupported version");
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<double> c_hat = j.at("c_hat").get<std::vector<double>>();
  std::vector<double> d = j.at("d").get<std::vector<double>>();
  const double gamma = j.at("gamma").get<double>();
  const ordered_json& ground = j.at("ground");
  std::shared_ptr<const GroundSet> gs;
  if (ground.at("type") == "shortest_path") {
    const std::size_t vertices = ground.at("vertices").get<std::size_t>();
    std::vector<std::pair<int, int>> edges(n);
    for (const auto& e : ground.at("edges")) {
      const std::size_t idx = e.at(2).get<std::size_t>();
      if (idx >= n) throw std::invalid_argument("instance: edge index out of range");
      edges[idx] = {e.at(0).get<int>(), e.at(1).get<int>()};
    }
    gs = std::make_shared<ShortestPathGroundSet>(
        Graph(vertices, std::move(edges), ground.at("s").get<int>(),
              ground.at("t").get<int>()));
  } else if (ground.at("type") == "linear") {
    std::vector<LinearRow> rows;
    for (const auto& r : ground.at("rows")) {
      LinearRow row;
      row.coeffs = r.at("coeffs").get<std::vector<double>>();
      const std::string sense = r.at("sense").get<std::string>();
      row.sense = sense == "le"   ? RowSense::LessEqual
                  : sense == "eq" ? RowSense::Equal
                                  : RowSense::GreaterEqual;
      row.rhs = r.at("rhs").get<double>();
      rows.push_back(std::move(row));
    }
    gs = std::make_shared<LinearGroundSet>(n, std::move(rows));
  } else {
    throw std::invalid_argument("instance: unknown ground type");
  }
  return BudgetedInstance(std::move(c_hat), std::move(d), gamma, std::move(gs));
}

void write_instance_file(const std::string& path, const BudgetedInstance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << instance_to_json(inst) << "\n";
}

BudgetedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return instance_from_json(text);
}

namespace {

struct CellOutcome {
  double value = 0.0;
  KTuple witness;
  bool solved = true;
  long nodes = 0;
  long tuples = 0;
};

CellOutcome run_cell(const BudgetedInstance& inst, const RunSpec& spec) {
  CellOutcome out;
  if (spec.algo == "minmax") {
    const MinMaxResult mm = solve_minmax(inst);
    out.value = mm.value;
    out.witness.members = {mm.minimizer};
    out.nodes = static_cast<long>(mm.breakdown.size());
  } else if (spec.algo == "heur") {
    LsOptions lso;
    lso.x_time_limit = spec.ls_x_time_limit;
    const LsResult ls = local_search(inst, spec.k, lso);
    out.value = ls.value;
    out.witness = ls.tuple;
    out.nodes = static_cast<long>(ls.state.round_values.size());
  } else if (spec.algo == "bb2") {
    if (spec.k != 2) throw std::invalid_argument("bb2 requires k = 2");
    Bb2Options bo;
    bo.time_limit = spec.time_limit;
    bo.ls_x_time_limit = spec.ls_x_time_limit;
    const Bb2Result r = solve_bb2(inst, bo);
    out.value = r.value;
    out.witness = r.tuple;
    out.solved = r.solved;
    out.nodes = r.stats.intervals;
    out.tuples = r.stats.sub_evals;
  } else if (spec.algo == "it") {
    ItOptions io;
    io.q = spec.q;
    io.time_limit = spec.time_limit;
    io.enumerator = spec.enumerator;
    io.ls_x_time_limit = spec.ls_x_time_limit;
    const ItResult r = solve_it(inst, spec.k, io);
    out.value = r.value;
    out.witness = r.tuple;
    out.solved = r.solved;
    out.nodes = r.stats.passes;
    out.tuples = r.stats.cost_evals;
  } else if (spec.algo == "brute") {
    const auto [value, tuple] = brute_force_optimum(inst, spec.k);
    out.value = value;
    out.witness = tuple;
    const std::size_t r = enumerate_all_solutions(inst).size();
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(spec.k), r);
    double combos = 1.0;
    for (std::size_t i = 0; i < m; ++i) combos = combos * static_cast<double>(r - i) / (i + 1);
    out.tuples = static_cast<long>(combos);
  } else {
    throw std::invalid_argument("unknown algorithm: " + spec.algo);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<RunRecord> run_matrix(
    const std::vector<std::pair<std::string, BudgetedInstance>>& instances,
    const std::vector<RunSpec>& specs) {
  // rob_opt per instance, for the cost_red column.
  std::vector<double> rob(instances.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(instances.size(), [&](std::size_t i) {
    try {
      rob[i] = solve_minmax(instances[i].second).value;
    } catch (...) {
      // Fractional budgets (or empty ground sets): no cost_red reference.
    }
  });

  std::vector<RunRecord> records(instances.size() * specs.size());
  parallel_for(records.size(), [&](std::size_t cell) {
    const std::size_t ii = cell / specs.size();
    const std::size_t si = cell % specs.size();
    const auto& [id, inst] = instances[ii];
    const RunSpec& spec = specs[si];
    RunRecord& rec = records[cell];
    rec.instance_id = id;
    rec.algo = spec.algo;
    rec.k = spec.k;
    rec.gamma = inst.gamma;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const CellOutcome out = run_cell(inst, spec);
      rec.value = out.value;
      rec.solved = out.solved;
      rec.nodes = out.nodes;
      rec.tuples = out.tuples;
      // Re-validate the reported value on the stored witness tuple.
      if (out.witness.members.empty())
        throw InternalError("no witness tuple");
      const double check = cost_of_tuple(inst, out.witness).first;
      if (std::abs(check - out.value) > 1e-6)
        throw InternalError("witness validation failed: value " + format_double(out.value) +
                            " vs tuple cost " + format_double(check));
      if (std::isfinite(rob[ii]) && rob[ii] > 0.0)
        rec.cost_red = 100.0 * (rob[ii] - out.value) / rob[ii];
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.solved = false;
      rec.value = std::numeric_limits<double>::quiet_NaN();
      rec.error = e.what();
    }
    rec.time_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count());
  });
  return records;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out = "instance,algo,k,gamma,value,time_ms,solved,nodes,tuples,cost_red\n";
  for (const RunRecord& r : records) {
    out += r.instance_id;
    out += ',';
    out += r.algo;
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += format_double(r.gamma);
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += std::to_string(r.time_ms);
    out += ',';
    out += r.solved ? "1" : "0";
    out += ',';
    out += std::to_string(r.nodes);
    out += ',';
    out += std::to_string(r.tuples);
    out += ',';
    out += format_double(r.cost_red);
    out += '\n';
  }
  return out;
}

std::vector<RunRecord> records_from_csv(const std::string& text) {
  std::vector<RunRecord> out;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return out;
  if (line != "instance,algo,k,gamma,value,time_ms,solved,nodes,tuples,cost_red")
    throw std::invalid_argument("report: unexpected CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 10) throw std::invalid_argument("report: malformed CSV row");
    RunRecord r;
    r.instance_id = f[0];
    r.algo = f[1];
    r.k = std::stoi(f[2]);
    r.gamma = std::strtod(f[3].c_str(), nullptr);
    r.value = std::strtod(f[4].c_str(), nullptr);
    r.time_ms = std::stol(f[5]);
    r.solved = f[6] == "1";
    r.nodes = std::stol(f[7]);
    r.tuples = std::stol(f[8]);
    r.cost_red = std::strtod(f[9].c_str(), nullptr);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Aggregate> aggregate_records(const std::vector<RunRecord>& records) {
  std::vector<Aggregate> out;
  auto find = [&](const std::string& algo, int k) -> Aggregate& {
    for (Aggregate& a : out)
      if (a.algo == algo && a.k == k) return a;
    out.push_back({algo, k, 0, 0.0, 0.0, 0.0, 0.0, 0.0});
    return out.back();
  };
  for (const RunRecord& r : records) {
    Aggregate& a = find(r.algo, r.k);
    ++a.cells;
    if (r.solved) a.solved_pct += 1.0;
    if (!r.failed) {
      a.mean_value += r.value;
      a.mean_cost_red += r.cost_red;
      a.stddev_cost_red += r.cost_red * r.cost_red;
      a.mean_time_ms += static_cast<double>(r.time_ms);
    }
  }
  for (Aggregate& a : out) {
    const double n = static_cast<double>(a.cells);
    if (n > 0) {
      a.mean_value /= n;
      a.mean_cost_red /= n;
      a.mean_time_ms /= n;
      const double var = std::max(0.0, a.stddev_cost_red / n - a.mean_cost_red * a.mean_cost_red);
      a.stddev_cost_red = std::sqrt(var);
      a.solved_pct = 100.0 * a.solved_pct / n;
    }
  }
  return out;
}

}  // namespace kadapt
