#pragma once

// The eight-variable example graph used across the suites: variables
// A..H = ids 0..7.  Its moral graph is chordal with induced width 3, and
// its decomposition levels exercise every separator size from 3 down to 1.

#include "treespan/graph.hpp"

namespace treespan::fix {

inline DirectedGraph eightvar_dag() {
  return DirectedGraph(8, {{0, 1},
                           {1, 2},
                           {2, 3},
                           {1, 6},
                           {3, 6},
                           {6, 5},
                           {3, 4},
                           {5, 4},
                           {6, 7},
                           {5, 7},
                           {4, 7}});
}

inline UndirectedGraph eightvar_moral() { return moralize(eightvar_dag()); }

}  // namespace treespan::fix
