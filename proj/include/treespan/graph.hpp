#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "treespan/common.hpp"

namespace treespan {

// Vertices are dense 0-based ids.  Both graph types are immutable values:
// transformations return new graphs.  Edge lists are kept sorted so that
// every traversal below is deterministic.

class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int n);
  // Rejects out-of-range endpoints, self-loops and duplicate edges.
  UndirectedGraph(int n, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool has_edge(int u, int v) const;
  const std::vector<int>& neighbors(int v) const;
  // Edges as (min,max) pairs in lexicographic order.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // New graph with extra edges added (duplicates of existing edges allowed
  // and ignored; self-loops still rejected).
  UndirectedGraph with_edges(const std::vector<std::pair<int, int>>& extra) const;

  // Same vertex set, edges restricted to `keep` (callers keep global ids).
  UndirectedGraph induced(const std::vector<int>& keep) const;

  bool operator==(const UndirectedGraph& o) const = default;

 private:
  void check_vertex(int v) const;
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(int n);
  // Rejects out-of-range endpoints, self-loops and duplicate arcs.
  DirectedGraph(int n, std::vector<std::pair<int, int>> arcs);

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const std::vector<int>& parents(int v) const;
  const std::vector<int>& children(int v) const;
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }

  // Roots = vertices with no parents.
  std::vector<int> roots() const;

  // If the graph has a directed cycle, returns one as a vertex sequence
  // v0 -> v1 -> ... -> v0 (first == last).
  std::optional<std::vector<int>> find_cycle() const;

 private:
  void check_vertex(int v) const;
  int n_ = 0;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<std::pair<int, int>> arcs_;
};

// Moral graph of a DAG: undirect every arc and marry co-parents.  Throws
// InvalidArgument with the cycle spelled out if the input is not acyclic.
UndirectedGraph moralize(const DirectedGraph& dag);

// Add one clique per scope (used to fold criterion/utility scopes into a
// graph before decomposition).  Scope variables must be valid vertices.
UndirectedGraph augment_with_scopes(const UndirectedGraph& g,
                                    const std::vector<std::vector<int>>& scopes);

// Primal (interaction) graph of a set of scopes over n variables: one clique
// per scope.
UndirectedGraph primal_graph(int n, const std::vector<std::vector<int>>& scopes);

// Connected components, each sorted, components ordered by smallest member.
std::vector<std::vector<int>> connected_components(const UndirectedGraph& g);

// True iff the graph has at least one cycle; the witness is a vertex cycle
// v0 - v1 - ... - v0 (first == last).
std::optional<std::vector<int>> find_undirected_cycle(const UndirectedGraph& g);

inline bool is_forest(const UndirectedGraph& g) {
  return !find_undirected_cycle(g).has_value();
}

// Biconnected components as edge-disjoint vertex sets (bridges show up as
// 2-vertex components), plus articulation vertices.  Iterative Hopcroft-
// Tarjan; components sorted internally and ordered by (size>2 first is NOT
// imposed) smallest vertex then size for determinism.
struct BiconnectedDecomposition {
  std::vector<std::vector<int>> components;  // each sorted; isolated vertices excluded
  std::vector<int> articulation_vertices;    // sorted
};
BiconnectedDecomposition biconnected_components(const UndirectedGraph& g);

}  // namespace treespan
