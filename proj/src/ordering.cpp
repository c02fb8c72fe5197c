#include "treespan/ordering.hpp"

#include <algorithm>
#include <set>

namespace treespan {

std::vector<int> EliminationOrdering::positions(int n) const {
  if (static_cast<int>(order.size()) != n)
    throw InvalidArgument("ordering covers " + std::to_string(order.size()) +
                          " vertices, graph has " + std::to_string(n));
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    if (v < 0 || v >= n || pos[v] != -1)
      throw InvalidArgument("ordering is not a permutation of 0.." +
                            std::to_string(n - 1));
    pos[v] = i;
  }
  return pos;
}

namespace {

// Working adjacency as sets for cheap edge insertion during elimination.
std::vector<std::set<int>> adjacency_sets(const UndirectedGraph& g) {
  std::vector<std::set<int>> adj(g.num_vertices());
  for (auto [u, v] : g.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  return adj;
}

int fill_count(const std::vector<std::set<int>>& adj, int v) {
  std::vector<int> nb(adj[v].begin(), adj[v].end());
  int missing = 0;
  for (size_t i = 0; i < nb.size(); ++i)
    for (size_t j = i + 1; j < nb.size(); ++j)
      if (!adj[nb[i]].count(nb[j])) ++missing;
  return missing;
}

}  // namespace

EliminationOrdering find_ordering(const UndirectedGraph& g, OrderingHeuristic h) {
  int n = g.num_vertices();
  auto adj = adjacency_sets(g);
  std::vector<char> gone(n, 0);
  std::vector<int> reverse_order;  // elimination sequence, first eliminated first
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long long best_primary = 0, best_secondary = 0;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      long long deg = static_cast<long long>(adj[v].size());
      long long fill = (h == OrderingHeuristic::MinFill) ? fill_count(adj, v) : 0;
      long long primary = (h == OrderingHeuristic::MinFill) ? fill : deg;
      long long secondary = (h == OrderingHeuristic::MinFill) ? deg : fill_count(adj, v);
      if (best == -1 || primary < best_primary ||
          (primary == best_primary && secondary < best_secondary)) {
        best = v;
        best_primary = primary;
        best_secondary = secondary;
      }
    }
    // Eliminate: connect remaining neighbors, remove the vertex.
    std::vector<int> nb(adj[best].begin(), adj[best].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (int w : nb) adj[w].erase(best);
    adj[best].clear();
    gone[best] = 1;
    reverse_order.push_back(best);
  }
  EliminationOrdering d;
  d.order.assign(reverse_order.rbegin(), reverse_order.rend());
  return d;
}

ChordalResult triangulate(const UndirectedGraph& g, const EliminationOrdering& d) {
  int n = g.num_vertices();
  auto pos = d.positions(n);
  auto adj = adjacency_sets(g);
  std::set<std::pair<int, int>> fills;
  int width = 0;
  // Process positions from the back; when v is processed every fill edge
  // incident to it from later vertices is already present, so its earlier
  // neighborhood is final.
  for (int p = n - 1; p >= 0; --p) {
    int v = d.order[p];
    std::vector<int> earlier;
    for (int w : adj[v])
      if (pos[w] < p) earlier.push_back(w);
    width = std::max(width, static_cast<int>(earlier.size()));
    for (size_t i = 0; i < earlier.size(); ++i)
      for (size_t j = i + 1; j < earlier.size(); ++j) {
        int a = earlier[i], b = earlier[j];
        if (!adj[a].count(b)) {
          adj[a].insert(b);
          adj[b].insert(a);
          fills.insert({std::min(a, b), std::max(a, b)});
        }
      }
  }
  ChordalResult r;
  r.fill_edges.assign(fills.begin(), fills.end());
  r.graph = g.with_edges(r.fill_edges);
  r.ordering = d;
  r.induced_width = width;
  return r;
}

ChordalResult triangulate(const UndirectedGraph& g, OrderingHeuristic h) {
  return triangulate(g, find_ordering(g, h));
}

bool is_zero_fill(const UndirectedGraph& g, const EliminationOrdering& d) {
  return triangulate(g, d).fill_edges.empty();
}

std::vector<std::vector<int>> max_cliques(const ChordalResult& r) {
  if (!is_zero_fill(r.graph, r.ordering))
    throw InvalidArgument(
        "max_cliques requires a chordal graph with a perfect elimination "
        "ordering; triangulate() results satisfy this");
  int n = r.graph.num_vertices();
  auto pos = r.ordering.positions(n);
  std::vector<std::vector<int>> cand;
  for (int p = 0; p < n; ++p) {
    int v = r.ordering.order[p];
    std::vector<int> c{v};
    for (int w : r.graph.neighbors(v))
      if (pos[w] < p) c.push_back(w);
    std::sort(c.begin(), c.end());
    cand.push_back(std::move(c));
  }
  // Drop candidates contained in another candidate.  Sorting by size makes a
  // single subset sweep sufficient.
  std::stable_sort(cand.begin(), cand.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<int>> keep;
  for (auto& c : cand) {
    bool subset = false;
    for (auto& k : keep) {
      if (std::includes(k.begin(), k.end(), c.begin(), c.end())) {
        subset = true;
        break;
      }
    }
    if (!subset) keep.push_back(std::move(c));
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace treespan
