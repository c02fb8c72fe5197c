#pragma once

#include <vector>

#include "treespan/graph.hpp"

namespace treespan {

struct CycleCutset {
  std::vector<int> vertices;   // sorted
  bool exact = false;          // true iff found by exhaustive search
  bool budget_exceeded = false;  // exact was requested but the 2-core is too big
};

enum class CutsetMode { Exact, Greedy };

// Smallest set of vertices whose removal leaves a forest.
//
// Exact mode enumerates subsets of the graph's 2-core by increasing size and
// lexicographic order, so it returns the lexicographically smallest minimum
// cutset.  The search refuses 2-cores larger than `budget` vertices and
// falls back to greedy with budget_exceeded set.
//
// Greedy mode repeatedly removes the highest-degree vertex of the residual
// 2-core (ties toward the smaller id) until no cycles remain.  Small but not
// necessarily minimum.
CycleCutset cycle_cutset(const UndirectedGraph& g, CutsetMode mode,
                         int budget = kDefaultCutsetBudget);

}  // namespace treespan
