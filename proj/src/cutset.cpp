#include "treespan/cutset.hpp"

#include <algorithm>

namespace treespan {

namespace {

// Vertices of the 2-core: repeatedly strip degree-<=1 vertices.  A minimal
// cutset only ever needs 2-core vertices, and a graph is a forest iff its
// 2-core is empty.
std::vector<int> two_core(const UndirectedGraph& g) {
  int n = g.num_vertices();
  std::vector<int> deg(n);
  std::vector<char> gone(n, 0);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] <= 1) {
      gone[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int w : g.neighbors(v))
      if (!gone[w] && --deg[w] <= 1) {
        gone[w] = 1;
        queue.push_back(w);
      }
  }
  std::vector<int> core;
  for (int v = 0; v < n; ++v)
    if (!gone[v]) core.push_back(v);
  return core;
}

bool residual_is_forest(const UndirectedGraph& g, const std::vector<int>& removed) {
  std::vector<char> out(g.num_vertices(), 0);
  for (int v : removed) out[v] = 1;
  // Forest iff every component has |edges| = |vertices| - 1; count directly.
  int verts = 0, edges = 0;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!out[v]) ++verts;
  for (auto [u, v] : g.edges())
    if (!out[u] && !out[v]) ++edges;
  if (edges >= verts && verts > 0) return false;  // quick reject
  // Exact acyclicity check via union-find-free DFS.
  std::vector<int> keep;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!out[v]) keep.push_back(v);
  return is_forest(g.induced(keep));
}

CycleCutset greedy_cutset(const UndirectedGraph& g) {
  CycleCutset out;
  out.exact = false;
  std::vector<char> removed(g.num_vertices(), 0);
  for (;;) {
    std::vector<int> keep;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (!removed[v]) keep.push_back(v);
    UndirectedGraph cur = g.induced(keep);
    // Candidates: residual 2-core (vertices on or between remaining cycles).
    std::vector<int> core = two_core(cur);
    if (core.empty()) break;
    int best = core[0];
    for (int v : core)
      if (cur.degree(v) > cur.degree(best)) best = v;  // ties: first = smallest id
    removed[best] = 1;
    out.vertices.push_back(best);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

}  // namespace

CycleCutset cycle_cutset(const UndirectedGraph& g, CutsetMode mode, int budget) {
  std::vector<int> core = two_core(g);
  if (core.empty()) {
    CycleCutset out;
    out.exact = true;  // the empty set is trivially optimal
    return out;
  }
  if (mode == CutsetMode::Greedy) return greedy_cutset(g);

  if (static_cast<int>(core.size()) > budget) {
    CycleCutset out = greedy_cutset(g);
    out.budget_exceeded = true;
    return out;
  }

  // Enumerate subsets of the 2-core by size, lexicographically within each
  // size, and return the first whose removal leaves a forest: that is the
  // lexicographically smallest minimum cutset.
  int m = static_cast<int>(core.size());
  for (int c = 1; c <= m; ++c) {
    // Standard combination enumeration over indices into `core`.
    std::vector<int> idx(c);
    for (int i = 0; i < c; ++i) idx[i] = i;
    for (;;) {
      std::vector<int> subset(c);
      for (int i = 0; i < c; ++i) subset[i] = core[idx[i]];
      if (residual_is_forest(g, subset)) {
        CycleCutset out;
        out.vertices = subset;
        out.exact = true;
        return out;
      }
      // next combination
      int i = c - 1;
      while (i >= 0 && idx[i] == m - c + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  // Removing the whole 2-core always leaves a forest, so we cannot get here.
  throw std::logic_error("cycle_cutset: exhaustive search found no cutset");
}

}  // namespace treespan
