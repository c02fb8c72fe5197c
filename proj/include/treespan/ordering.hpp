#pragma once

#include <vector>

#include "treespan/graph.hpp"

namespace treespan {

// An elimination ordering d = X_1..X_n stored as order[i] = vertex at
// position i.  Vertices are eliminated from the back (position n-1 first);
// width counts earlier neighbors in the induced (filled) graph.
struct EliminationOrdering {
  std::vector<int> order;

  // position_of[v] = index of v in order; throws if order is not a
  // permutation of 0..n-1.
  std::vector<int> positions(int n) const;
};

enum class OrderingHeuristic { MinFill, MinDegree };

// Greedy ordering: repeatedly pick the vertex whose elimination adds the
// fewest fill edges (MinFill) or has the fewest remaining neighbors
// (MinDegree).  Ties break toward fewer fill edges / lower degree on the
// secondary key and then the smallest vertex id, so results are
// deterministic.  The first-eliminated vertex lands at the BACK of the
// ordering.
EliminationOrdering find_ordering(const UndirectedGraph& g, OrderingHeuristic h);

struct ChordalResult {
  UndirectedGraph graph;                     // input plus fill edges (chordal)
  std::vector<std::pair<int, int>> fill_edges;  // sorted (min,max) pairs
  EliminationOrdering ordering;
  int induced_width = 0;  // max earlier-neighbor count in `graph` along ordering
};

// Triangulate along the given ordering.  The ordering must be a permutation
// of the vertices.
ChordalResult triangulate(const UndirectedGraph& g, const EliminationOrdering& d);

// Convenience: find an ordering, then triangulate.
ChordalResult triangulate(const UndirectedGraph& g, OrderingHeuristic h);

// True iff triangulating g along d adds no fill edges.
bool is_zero_fill(const UndirectedGraph& g, const EliminationOrdering& d);

// Maximal cliques of the triangulated graph, one candidate {v} + earlier
// neighbors per vertex, with non-maximal candidates dropped.  Cliques are
// sorted internally and ordered lexicographically.  Throws InvalidArgument
// if `r.graph` is not actually chordal along `r.ordering` (hand-built
// inputs); results from triangulate() always pass.
std::vector<std::vector<int>> max_cliques(const ChordalResult& r);

}  // namespace treespan
