#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "kadapt/lp.hpp"

namespace kadapt {

/// Undirected graph with an edge-index ↔ item-index bijection: edge i of
/// `edges` is item i. Construction validates: no self-loops, endpoints in
/// range, source ≠ sink, and sink reachable from source.
struct Graph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  int source = 0;
  int sink = 0;

  Graph() = default;
  Graph(std::size_t vertices, std::vector<std::pair<int, int>> edge_list, int s, int t);

  std::size_t num_edges() const { return edges.size(); }
  /// Incident (edge, other endpoint) pairs per vertex, ascending edge index.
  const std::vector<std::vector<std::pair<std::size_t, int>>>& adjacency() const {
    return adj_;
  }

 private:
  std::vector<std::vector<std::pair<std::size_t, int>>> adj_;
};

/// Exact shortest distances d(v, sink) for every vertex; +inf when
/// unreachable. Weights are per-edge and must be nonnegative.
std::vector<double> dijkstra_to_sink(const Graph& g, const std::vector<double>& weights);

/// Linear description of a feasible set: rows over `columns` binary columns,
/// of which the first `items` are the ground-set items and the rest are
/// auxiliary modelling columns.
struct LinearDescription {
  std::size_t items = 0;
  std::size_t columns = 0;
  std::vector<LinearRow> rows;
};

/// A combinatorial feasible set X ⊆ {0,1}^n exposed through a linear
/// description (whose integral points project onto X), a deterministic
/// minimization oracle, and a bounded enumerator. Instances are immutable and
/// shareable across threads.
class GroundSet {
 public:
  virtual ~GroundSet() = default;

  std::size_t items() const { return description().items; }
  virtual const LinearDescription& description() const = 0;
  virtual bool has_recursive_enumerator() const { return false; }

  /// argmin over X of weightsᵀx. Throws InfeasibleError when X is empty.
  virtual std::pair<double, Bits> deterministic_min(const std::vector<double>& weights) const;

  /// All x in X with c_hatᵀx < ub, sorted by (nominal, lexicographic bits).
  virtual std::vector<Bits> enumerate_under(const std::vector<double>& c_hat, double ub,
                                            std::size_t cap = 10000000) const;

  /// Item bits from a full column assignment of the linear description
  /// (rounding plus any set-specific cleanup).
  virtual Bits extract_items(const std::vector<double>& columns) const;

  /// Inverse of extract_items for feasible points: completes item bits to a
  /// full column assignment satisfying the linear description.
  virtual std::vector<double> lift_items(const Bits& bits) const;
};

/// Ground set given directly by linear rows over the items (no auxiliaries),
/// e.g. a cardinality-constrained selection. All operations run through the
/// mixed-binary core.
class LinearGroundSet : public GroundSet {
 public:
  LinearGroundSet(std::size_t n, std::vector<LinearRow> rows);
  const LinearDescription& description() const override { return desc_; }

 private:
  LinearDescription desc_;
};

/// Convenience: the selection set {x ∈ {0,1}^n : Σx_i = choose}.
std::shared_ptr<LinearGroundSet> make_selection_ground(std::size_t n, int choose);

/// Simple source–sink paths of an undirected graph. The linear description
/// models each edge as one binary with unit degree at the endpoints and
/// degree parity (one auxiliary binary per interior vertex); integral points
/// are a source–sink path plus possibly detached cycles, which extract_items
/// strips. The recursive enumerator is a distance-pruned depth-first search.
class ShortestPathGroundSet : public GroundSet {
 public:
  explicit ShortestPathGroundSet(Graph g);
  const LinearDescription& description() const override { return desc_; }
  bool has_recursive_enumerator() const override { return true; }
  std::pair<double, Bits> deterministic_min(const std::vector<double>& weights) const override;
  std::vector<Bits> enumerate_under(const std::vector<double>& c_hat, double ub,
                                    std::size_t cap = 10000000) const override;
  Bits extract_items(const std::vector<double>& columns) const override;
  std::vector<double> lift_items(const Bits& bits) const override;

  const Graph& graph() const { return graph_; }

 private:
  Graph graph_;
  LinearDescription desc_;
};

/// Pruned depth-first enumeration of simple source–sink paths with nominal
/// cost strictly below ub: a prefix ending at v survives only while
/// cost(prefix) + d(v, sink) < ub. Neighbor order is ascending edge index;
/// output is sorted by (nominal, lexicographic bits).
std::vector<Bits> enumerate_paths_under(const Graph& g, const std::vector<double>& c_hat,
                                        double ub, std::size_t cap = 10000000);

/// Enumeration through the mixed-binary core on the linear description,
/// usable for any ground set; same output contract as enumerate_under.
std::vector<Bits> enumerate_generic_under(const GroundSet& gs, const std::vector<double>& c_hat,
                                          double ub, std::size_t cap = 10000000);

/// Free-function form of the deterministic oracle.
inline std::pair<double, Bits> deterministic_min(const GroundSet& gs,
                                                 const std::vector<double>& weights) {
  return gs.deterministic_min(weights);
}

/// Sort bit vectors by (c_hatᵀbits ascending, lexicographic bits).
void sort_by_nominal(std::vector<Bits>& list, const std::vector<double>& c_hat);

}  // namespace kadapt
