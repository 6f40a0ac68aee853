#include "kadapt/ground.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "kadapt/mip.hpp"

namespace kadapt {

Graph::Graph(std::size_t vertices, std::vector<std::pair<int, int>> edge_list, int s, int t)
    : num_vertices(vertices), edges(std::move(edge_list)), source(s), sink(t) {
  if (s == t) throw std::invalid_argument("graph: source equals sink");
  auto in_range = [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < vertices; };
  if (!in_range(s) || !in_range(t)) throw std::invalid_argument("graph: terminal out of range");
  adj_.assign(vertices, {});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (!in_range(u) || !in_range(v)) throw std::invalid_argument("graph: endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop");
    adj_[static_cast<std::size_t>(u)].push_back({e, v});
    adj_[static_cast<std::size_t>(v)].push_back({e, u});
  }
  // BFS reachability check source -> sink.
  std::vector<char> seen(vertices, 0);
  std::queue<int> q;
  q.push(s);
  seen[static_cast<std::size_t>(s)] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (auto [e, w] : adj_[static_cast<std::size_t>(u)]) {
      (void)e;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        q.push(w);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(t)])
    throw std::invalid_argument("graph: sink not reachable from source");
}

std::vector<double> dijkstra_to_sink(const Graph& g, const std::vector<double>& weights) {
  if (weights.size() != g.num_edges())
    throw std::invalid_argument("dijkstra: weight count must match edge count");
  for (double w : weights)
    if (!(w >= 0.0)) throw std::invalid_argument("dijkstra: weights must be nonnegative");
  std::vector<double> dist(g.num_vertices, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(g.sink)] = 0.0;
  heap.push({0.0, g.sink});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [e, v] : g.adjacency()[static_cast<std::size_t>(u)]) {
      const double nd = d + weights[e];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

void sort_by_nominal(std::vector<Bits>& list, const std::vector<double>& c_hat) {
  auto nominal = [&](const Bits& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i]) s += c_hat[i];
    return s;
  };
  std::sort(list.begin(), list.end(), [&](const Bits& a, const Bits& b) {
    const double na = nominal(a), nb = nominal(b);
    if (na != nb) return na < nb;
    return a < b;
  });
}

namespace {

MixedBinaryProgram description_program(const LinearDescription& desc,
                                       const std::vector<double>& objective_items) {
  MixedBinaryProgram p;
  p.lp = LinearProgram(desc.columns, 0.0, 1.0);
  for (std::size_t j = 0; j < desc.items && j < objective_items.size(); ++j)
    p.lp.objective[j] = objective_items[j];
  p.lp.rows = desc.rows;
  p.binary.resize(desc.columns);
  for (std::size_t j = 0; j < desc.columns; ++j) p.binary[j] = j;
  return p;
}

}  // namespace

std::pair<double, Bits> GroundSet::deterministic_min(const std::vector<double>& weights) const {
  const LinearDescription& desc = description();
  if (weights.size() != desc.items)
    throw std::invalid_argument("deterministic_min: weight count must match item count");
  const MixedBinaryProgram p = description_program(desc, weights);
  const MipResult r = solve_mip(p);
  if (r.status == MipStatus::Infeasible) throw InfeasibleError("ground set is empty");
  if (!r.has_incumbent) throw InternalError("deterministic_min: no incumbent");
  const Bits bits = extract_items(r.x);
  double value = 0.0;
  for (std::size_t j = 0; j < desc.items; ++j)
    if (bits[j]) value += weights[j];
  return {value, bits};
}

std::vector<Bits> GroundSet::enumerate_under(const std::vector<double>& c_hat, double ub,
                                             std::size_t cap) const {
  return enumerate_generic_under(*this, c_hat, ub, cap);
}

Bits GroundSet::extract_items(const std::vector<double>& columns) const {
  const std::size_t n = description().items;
  Bits bits(n, 0);
  for (std::size_t j = 0; j < n; ++j) bits[j] = columns[j] > 0.5 ? 1 : 0;
  return bits;
}

std::vector<double> GroundSet::lift_items(const Bits& bits) const {
  const LinearDescription& desc = description();
  if (desc.columns != desc.items)
    throw InternalError("lift_items: ground set with auxiliaries must override");
  return std::vector<double>(bits.begin(), bits.end());
}

std::vector<Bits> enumerate_generic_under(const GroundSet& gs, const std::vector<double>& c_hat,
                                          double ub, std::size_t cap) {
  const LinearDescription& desc = gs.description();
  if (c_hat.size() != desc.items)
    throw std::invalid_argument("enumerate: cost count must match item count");
  const MixedBinaryProgram p = description_program(desc, c_hat);
  const std::vector<Bits> leaves = enumerate_binary_feasible(p, ub, cap);
  std::vector<Bits> out;
  out.reserve(leaves.size());
  for (const Bits& leaf : leaves) {
    std::vector<double> cols(leaf.begin(), leaf.end());
    Bits item_bits = gs.extract_items(cols);
    double nominal = 0.0;
    for (std::size_t j = 0; j < desc.items; ++j)
      if (item_bits[j]) nominal += c_hat[j];
    if (nominal < ub) out.push_back(std::move(item_bits));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  sort_by_nominal(out, c_hat);
  return out;
}

LinearGroundSet::LinearGroundSet(std::size_t n, std::vector<LinearRow> rows) {
  for (const LinearRow& r : rows)
    if (r.coeffs.size() != n)
      throw std::invalid_argument("ground: row length must match item count");
  desc_.items = n;
  desc_.columns = n;
  desc_.rows = std::move(rows);
}

std::shared_ptr<LinearGroundSet> make_selection_ground(std::size_t n, int choose) {
  std::vector<LinearRow> rows;
  rows.push_back(LinearRow{std::vector<double>(n, 1.0), RowSense::Equal,
                           static_cast<double>(choose)});
  return std::make_shared<LinearGroundSet>(n, std::move(rows));
}

ShortestPathGroundSet::ShortestPathGroundSet(Graph g) : graph_(std::move(g)) {
  const std::size_t E = graph_.num_edges();
  const std::size_t V = graph_.num_vertices;
  desc_.items = E;

  // Columns: one binary per edge, then one parity binary per vertex other
  // than the terminals (degree = 2 * parity).
  std::vector<std::size_t> aux_col(V, 0);
  std::size_t next = E;
  for (std::size_t v = 0; v < V; ++v) {
    if (static_cast<int>(v) == graph_.source || static_cast<int>(v) == graph_.sink) continue;
    aux_col[v] = next++;
  }
  desc_.columns = next;

  auto degree_row = [&](std::size_t v) {
    std::vector<double> row(desc_.columns, 0.0);
    for (auto [e, other] : graph_.adjacency()[v]) {
      (void)other;
      row[e] += 1.0;
    }
    return row;
  };
  desc_.rows.push_back(LinearRow{degree_row(static_cast<std::size_t>(graph_.source)),
                                 RowSense::Equal, 1.0});
  desc_.rows.push_back(LinearRow{degree_row(static_cast<std::size_t>(graph_.sink)),
                                 RowSense::Equal, 1.0});
  for (std::size_t v = 0; v < V; ++v) {
    if (static_cast<int>(v) == graph_.source || static_cast<int>(v) == graph_.sink) continue;
    std::vector<double> row = degree_row(v);
    row[aux_col[v]] = -2.0;
    desc_.rows.push_back(LinearRow{std::move(row), RowSense::Equal, 0.0});
  }
}

std::pair<double, Bits> ShortestPathGroundSet::deterministic_min(
    const std::vector<double>& weights) const {
  if (weights.size() != graph_.num_edges())
    throw std::invalid_argument("deterministic_min: weight count must match edge count");
  for (double w : weights)
    if (!(w >= 0.0))
      throw std::invalid_argument("deterministic_min: path weights must be nonnegative");
  // Dijkstra from the source with parent edges; ties resolved by the heap's
  // (distance, vertex) order, deterministic across runs.
  const std::size_t V = graph_.num_vertices;
  std::vector<double> dist(V, kInf);
  std::vector<std::size_t> parent_edge(V, SIZE_MAX);
  std::vector<int> parent(V, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(graph_.source)] = 0.0;
  heap.push({0.0, graph_.source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [e, v] : graph_.adjacency()[static_cast<std::size_t>(u)]) {
      const double nd = d + weights[e];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        parent_edge[static_cast<std::size_t>(v)] = e;
        parent[static_cast<std::size_t>(v)] = u;
        heap.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[static_cast<std::size_t>(graph_.sink)]))
    throw InfeasibleError("no source-sink path");
  Bits bits(graph_.num_edges(), 0);
  for (int v = graph_.sink; v != graph_.source; v = parent[static_cast<std::size_t>(v)])
    bits[parent_edge[static_cast<std::size_t>(v)]] = 1;
  return {dist[static_cast<std::size_t>(graph_.sink)], bits};
}

std::vector<Bits> ShortestPathGroundSet::enumerate_under(const std::vector<double>& c_hat,
                                                         double ub, std::size_t cap) const {
  return enumerate_paths_under(graph_, c_hat, ub, cap);
}

Bits ShortestPathGroundSet::extract_items(const std::vector<double>& columns) const {
  Bits bits(graph_.num_edges(), 0);
  for (std::size_t e = 0; e < graph_.num_edges(); ++e) bits[e] = columns[e] > 0.5 ? 1 : 0;
  // Strip every connected component not containing the source (detached
  // cycles carried by the parity formulation).
  std::vector<char> keep_vertex(graph_.num_vertices, 0);
  std::queue<int> q;
  q.push(graph_.source);
  keep_vertex[static_cast<std::size_t>(graph_.source)] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (auto [e, v] : graph_.adjacency()[static_cast<std::size_t>(u)]) {
      if (!bits[e]) continue;
      if (!keep_vertex[static_cast<std::size_t>(v)]) {
        keep_vertex[static_cast<std::size_t>(v)] = 1;
        q.push(v);
      }
    }
  }
  for (std::size_t e = 0; e < graph_.num_edges(); ++e) {
    if (!bits[e]) continue;
    const auto [u, v] = graph_.edges[e];
    if (!keep_vertex[static_cast<std::size_t>(u)] || !keep_vertex[static_cast<std::size_t>(v)])
      bits[e] = 0;
  }
  return bits;
}

std::vector<double> ShortestPathGroundSet::lift_items(const Bits& bits) const {
  std::vector<double> cols(desc_.columns, 0.0);
  std::vector<int> degree(graph_.num_vertices, 0);
  for (std::size_t e = 0; e < graph_.num_edges(); ++e) {
    if (!bits[e]) continue;
    cols[e] = 1.0;
    degree[static_cast<std::size_t>(graph_.edges[e].first)]++;
    degree[static_cast<std::size_t>(graph_.edges[e].second)]++;
  }
  std::size_t aux = graph_.num_edges();
  for (std::size_t v = 0; v < graph_.num_vertices; ++v) {
    if (static_cast<int>(v) == graph_.source || static_cast<int>(v) == graph_.sink) continue;
    cols[aux++] = degree[v] / 2 > 0 ? 1.0 : 0.0;
  }
  return cols;
}

std::vector<Bits> enumerate_paths_under(const Graph& g, const std::vector<double>& c_hat,
                                        double ub, std::size_t cap) {
  if (c_hat.size() != g.num_edges())
    throw std::invalid_argument("enumerate: cost count must match edge count");
  if (!std::isfinite(ub)) throw std::invalid_argument("enumerate: ub must be finite");
  const std::vector<double> dist = dijkstra_to_sink(g, c_hat);
  std::vector<Bits> out;
  std::vector<char> visited(g.num_vertices, 0);
  Bits current(g.num_edges(), 0);

  auto dfs = [&](auto&& self, int v, double cost) -> void {
    for (auto [e, w] : g.adjacency()[static_cast<std::size_t>(v)]) {
      if (visited[static_cast<std::size_t>(w)]) continue;
      const double ncost = cost + c_hat[e];
      if (w == g.sink) {
        if (ncost < ub) {
          if (out.size() >= cap) throw SizeError("enumerate: output cap exceeded");
          current[e] = 1;
          out.push_back(current);
          current[e] = 0;
        }
        continue;
      }
      if (ncost + dist[static_cast<std::size_t>(w)] < ub) {
        visited[static_cast<std::size_t>(w)] = 1;
        current[e] = 1;
        self(self, w, ncost);
        current[e] = 0;
        visited[static_cast<std::size_t>(w)] = 0;
      }
    }
  };
  visited[static_cast<std::size_t>(g.source)] = 1;
  dfs(dfs, g.source, 0.0);
  sort_by_nominal(out, c_hat);
  return out;
}

}  // namespace kadapt
