#pragma once

#include <vector>

#include "treespan/graph.hpp"

namespace treespan {

// A join tree (forest when the underlying graph is disconnected).  Clusters
// are sorted variable sets kept in lexicographic order; edges carry their
// separator (intersection of the endpoint clusters).  Structural invariants
// enforced by validate():
//   * edges form a forest over cluster indices, one tree per batch of
//     clusters that share variables;
//   * running intersection: for every variable, the clusters containing it
//     induce a connected subtree;
//   * every edge's separator equals the intersection of its endpoints.
struct JoinTree {
  struct Edge {
    int a = 0, b = 0;              // cluster indices, a < b
    std::vector<int> separator;    // sorted
  };

  std::vector<std::vector<int>> clusters;  // each sorted; list sorted lexicographically
  std::vector<Edge> edges;                 // sorted by (a, b)
  int sep_bound = 0;  // separator-size threshold this tree was built for

  int num_clusters() const { return static_cast<int>(clusters.size()); }
  // Neighbor cluster indices of cluster i with the connecting edge index.
  std::vector<std::pair<int, int>> neighbors(int i) const;
  int max_cluster_size() const;
  int max_separator_size() const;

  void validate() const;  // throws InvalidArgument on any broken invariant

  // Checks that every given scope is covered by at least one cluster.
  bool covers(const std::vector<std::vector<int>>& scopes) const;
};

// Primary join tree from the maximal cliques of a triangulated graph:
// maximum-weight spanning forest over pairwise intersection sizes (weight-0
// pairs never joined, so disconnected graphs yield a forest).  Ties break
// toward the lexicographically smallest cluster-index pair, which makes the
// result deterministic given the (sorted) clique list.
JoinTree build_primary_join_tree(const std::vector<std::vector<int>>& cliques);

// One tree per distinct separator size: level 0 is the primary tree; level i
// merges every edge whose separator is larger than the i-th distinct size
// (descending).  After merging, any cluster contained in a neighbor is
// absorbed into it (cannot trigger for maximal-clique input; kept as a
// safeguard for hand-built trees).
struct JoinTreeLevel {
  int index = 0;      // 0 = primary
  int sep_bound = 0;  // s_i: largest separator size present in `tree`
  JoinTree tree;
};
std::vector<JoinTreeLevel> secondary_join_trees(const JoinTree& primary);

// The level with the largest sep_bound <= bound (levels are strictly
// descending in sep_bound, so this is the coarsest tree within the bound).
// bound < smallest sep_bound returns the last level.
const JoinTreeLevel& level_for_bound(const std::vector<JoinTreeLevel>& levels,
                                     int bound);

}  // namespace treespan
