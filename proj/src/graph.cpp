#include "treespan/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "treespan/common.hpp"

namespace treespan {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// UndirectedGraph

UndirectedGraph::UndirectedGraph(int n) : n_(n), adj_(n) {
  if (n < 0) throw InvalidArgument("graph size must be non-negative");
}

UndirectedGraph::UndirectedGraph(int n, std::vector<std::pair<int, int>> edges)
    : UndirectedGraph(n) {
  std::set<std::pair<int, int>> seen;
  for (auto& [u, v] : edges) {
    check_vertex(u);
    check_vertex(v);
    if (u == v)
      throw InvalidArgument("self-loop on vertex " + std::to_string(u));
    auto e = std::minmax(u, v);
    if (!seen.insert({e.first, e.second}).second)
      throw InvalidArgument("duplicate edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ")");
  }
  for (auto& e : seen) {
    adj_[e.first].push_back(e.second);
    adj_[e.second].push_back(e.first);
    edges_.push_back(e);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

void UndirectedGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw InvalidArgument("vertex " + std::to_string(v) + " out of range [0," +
                          std::to_string(n_) + ")");
}

bool UndirectedGraph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

const std::vector<int>& UndirectedGraph::neighbors(int v) const {
  check_vertex(v);
  return adj_[v];
}

UndirectedGraph UndirectedGraph::with_edges(
    const std::vector<std::pair<int, int>>& extra) const {
  std::set<std::pair<int, int>> all(edges_.begin(), edges_.end());
  for (auto [u, v] : extra) {
    check_vertex(u);
    check_vertex(v);
    if (u == v)
      throw InvalidArgument("self-loop on vertex " + std::to_string(u));
    all.insert({std::min(u, v), std::max(u, v)});
  }
  return UndirectedGraph(n_, {all.begin(), all.end()});
}

UndirectedGraph UndirectedGraph::induced(const std::vector<int>& keep) const {
  std::vector<char> in(n_, 0);
  for (int v : keep) {
    check_vertex(v);
    in[v] = 1;
  }
  std::vector<std::pair<int, int>> es;
  for (auto& e : edges_)
    if (in[e.first] && in[e.second]) es.push_back(e);
  return UndirectedGraph(n_, std::move(es));
}

// ---------------------------------------------------------------------------
// DirectedGraph

DirectedGraph::DirectedGraph(int n) : n_(n), parents_(n), children_(n) {
  if (n < 0) throw InvalidArgument("graph size must be non-negative");
}

DirectedGraph::DirectedGraph(int n, std::vector<std::pair<int, int>> arcs)
    : DirectedGraph(n) {
  std::set<std::pair<int, int>> seen;
  for (auto& [u, v] : arcs) {
    check_vertex(u);
    check_vertex(v);
    if (u == v)
      throw InvalidArgument("self-loop on vertex " + std::to_string(u));
    if (!seen.insert({u, v}).second)
      throw InvalidArgument("duplicate arc (" + std::to_string(u) + "," +
                            std::to_string(v) + ")");
  }
  for (auto& a : seen) {
    children_[a.first].push_back(a.second);
    parents_[a.second].push_back(a.first);
    arcs_.push_back(a);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
}

void DirectedGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_)
    throw InvalidArgument("vertex " + std::to_string(v) + " out of range [0," +
                          std::to_string(n_) + ")");
}

const std::vector<int>& DirectedGraph::parents(int v) const {
  check_vertex(v);
  return parents_[v];
}

const std::vector<int>& DirectedGraph::children(int v) const {
  check_vertex(v);
  return children_[v];
}

std::vector<int> DirectedGraph::roots() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if (parents_[v].empty()) out.push_back(v);
  return out;
}

std::optional<std::vector<int>> DirectedGraph::find_cycle() const {
  // Iterative DFS with colors; on back edge, unwind the explicit stack.
  enum { White, Gray, Black };
  std::vector<int> color(n_, White), stack, parent(n_, -1);
  for (int s = 0; s < n_; ++s) {
    if (color[s] != White) continue;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      if (color[v] == White) {
        color[v] = Gray;
        for (int w : children_[v]) {
          if (color[w] == Gray) {
            std::vector<int> cyc{w};
            for (int x = v; x != w; x = parent[x]) cyc.push_back(x);
            cyc.push_back(w);
            std::reverse(cyc.begin(), cyc.end());
            return cyc;
          }
          if (color[w] == White) {
            parent[w] = v;
            stack.push_back(w);
          }
        }
      } else {
        if (color[v] == Gray) color[v] = Black;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derived graphs

UndirectedGraph moralize(const DirectedGraph& dag) {
  if (auto cyc = dag.find_cycle()) {
    std::string msg = "moralize requires a DAG; directed cycle:";
    for (int v : *cyc) msg += " " + std::to_string(v);
    throw InvalidArgument(msg);
  }
  std::set<std::pair<int, int>> es;
  for (auto [u, v] : dag.arcs()) es.insert({std::min(u, v), std::max(u, v)});
  for (int v = 0; v < dag.num_vertices(); ++v) {
    const auto& ps = dag.parents(v);
    for (size_t i = 0; i < ps.size(); ++i)
      for (size_t j = i + 1; j < ps.size(); ++j) es.insert({ps[i], ps[j]});
  }
  return UndirectedGraph(dag.num_vertices(), {es.begin(), es.end()});
}

UndirectedGraph augment_with_scopes(const UndirectedGraph& g,
                                    const std::vector<std::vector<int>>& scopes) {
  std::vector<std::pair<int, int>> extra;
  for (const auto& sc : scopes)
    for (size_t i = 0; i < sc.size(); ++i)
      for (size_t j = i + 1; j < sc.size(); ++j)
        if (sc[i] != sc[j]) extra.push_back({sc[i], sc[j]});
  return g.with_edges(extra);
}

UndirectedGraph primal_graph(int n, const std::vector<std::vector<int>>& scopes) {
  return augment_with_scopes(UndirectedGraph(n), scopes);
}

std::vector<std::vector<int>> connected_components(const UndirectedGraph& g) {
  int n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;  // ordered by smallest member because s scans ascending
}

std::optional<std::vector<int>> find_undirected_cycle(const UndirectedGraph& g) {
  int n = g.num_vertices();
  std::vector<int> parent(n, -2);
  for (int s = 0; s < n; ++s) {
    if (parent[s] != -2) continue;
    parent[s] = -1;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v)) {
        if (w == parent[v]) continue;
        if (parent[w] == -2) {
          parent[w] = v;
          stack.push_back(w);
        } else {
          // Found a non-tree edge (v,w); both are visited.  Walk both tails
          // to the root collecting paths, splice at the lowest common point.
          std::vector<int> pv{v}, pw{w};
          for (int x = v; parent[x] >= 0; x = parent[x]) pv.push_back(parent[x]);
          for (int x = w; parent[x] >= 0; x = parent[x]) pw.push_back(parent[x]);
          // Trim common suffix, keep the junction vertex once.
          while (pv.size() > 1 && pw.size() > 1 &&
                 pv[pv.size() - 2] == pw[pw.size() - 2]) {
            pv.pop_back();
            pw.pop_back();
          }
          std::vector<int> cyc(pv.begin(), pv.end());
          cyc.pop_back();  // junction re-added by pw's tail
          std::reverse(pw.begin(), pw.end());
          for (int x : pw) cyc.push_back(x);
          cyc.push_back(v);
          return cyc;
        }
      }
    }
  }
  return std::nullopt;
}

BiconnectedDecomposition biconnected_components(const UndirectedGraph& g) {
  int n = g.num_vertices();
  BiconnectedDecomposition out;
  std::vector<int> num(n, -1), low(n, 0), parent(n, -1);
  std::vector<std::pair<int, int>> estack;
  std::set<int> articulation;
  int counter = 0;

  // Iterative DFS; frame = (vertex, index into neighbor list).
  for (int s = 0; s < n; ++s) {
    if (num[s] != -1) continue;
    std::vector<std::pair<int, size_t>> frames{{s, 0}};
    num[s] = low[s] = counter++;
    int root_children = 0;
    while (!frames.empty()) {
      auto& [v, idx] = frames.back();
      const auto& nb = g.neighbors(v);
      if (idx < nb.size()) {
        int w = nb[idx++];
        if (num[w] == -1) {
          estack.push_back({v, w});
          parent[w] = v;
          num[w] = low[w] = counter++;
          if (v == s) ++root_children;
          frames.push_back({w, 0});
        } else if (w != parent[v] && num[w] < num[v]) {
          estack.push_back({v, w});
          low[v] = std::min(low[v], num[w]);
        }
      } else {
        frames.pop_back();
        if (frames.empty()) break;
        int u = frames.back().first;  // parent of v
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= num[u]) {
          // u separates v's subtree: pop one biconnected component.
          if (u != s || root_children > 1) articulation.insert(u);
          std::set<int> verts;
          while (!estack.empty()) {
            auto e = estack.back();
            estack.pop_back();
            verts.insert(e.first);
            verts.insert(e.second);
            if (e.first == u && e.second == v) break;
          }
          out.components.push_back({verts.begin(), verts.end()});
        }
      }
    }
  }
  out.articulation_vertices.assign(articulation.begin(), articulation.end());
  std::sort(out.components.begin(), out.components.end());
  return out;
}

}  // namespace treespan
