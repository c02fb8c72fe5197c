#include "treespan/jointree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace treespan {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> JoinTree::neighbors(int i) const {
  std::vector<std::pair<int, int>> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (edges[e].a == i) out.push_back({edges[e].b, e});
    if (edges[e].b == i) out.push_back({edges[e].a, e});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int JoinTree::max_cluster_size() const {
  size_t m = 0;
  for (const auto& c : clusters) m = std::max(m, c.size());
  return static_cast<int>(m);
}

int JoinTree::max_separator_size() const {
  size_t m = 0;
  for (const auto& e : edges) m = std::max(m, e.separator.size());
  return static_cast<int>(m);
}

void JoinTree::validate() const {
  int n = num_clusters();
  for (int i = 0; i < n; ++i) {
    const auto& c = clusters[i];
    if (c.empty()) throw InvalidArgument("empty cluster " + std::to_string(i));
    if (!std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end())
      throw InvalidArgument("cluster " + std::to_string(i) +
                            " is not a sorted set");
    if (i > 0 && !(clusters[i - 1] < c))
      throw InvalidArgument("cluster list is not in lexicographic order");
  }
  Dsu dsu(n);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.a < 0 || e.b >= n || e.a >= e.b)
      throw InvalidArgument("bad edge endpoints");
    if (!seen.insert({e.a, e.b}).second)
      throw InvalidArgument("duplicate join-tree edge");
    if (!dsu.unite(e.a, e.b))
      throw InvalidArgument("join-tree edges contain a cycle");
    if (e.separator != intersect_sorted(clusters[e.a], clusters[e.b]))
      throw InvalidArgument("edge separator differs from cluster intersection");
  }
  // Running intersection: for each variable, its clusters form one subtree.
  std::map<int, std::vector<int>> holders;
  for (int i = 0; i < n; ++i)
    for (int v : clusters[i]) holders[v].push_back(i);
  for (auto& [v, hs] : holders) {
    Dsu d2(n);
    int joins = 0;
    for (const auto& e : edges)
      if (std::binary_search(e.separator.begin(), e.separator.end(), v)) {
        d2.unite(e.a, e.b);
        ++joins;
      }
    if (joins != static_cast<int>(hs.size()) - 1)
      throw InvalidArgument("running intersection violated for variable " +
                            std::to_string(v));
    for (int h : hs)
      if (d2.find(h) != d2.find(hs[0]))
        throw InvalidArgument("running intersection violated for variable " +
                              std::to_string(v));
  }
}

bool JoinTree::covers(const std::vector<std::vector<int>>& scopes) const {
  for (const auto& sc : scopes) {
    std::vector<int> s(sc);
    std::sort(s.begin(), s.end());
    bool ok = false;
    for (const auto& c : clusters)
      if (std::includes(c.begin(), c.end(), s.begin(), s.end())) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

JoinTree build_primary_join_tree(const std::vector<std::vector<int>>& cliques) {
  JoinTree t;
  t.clusters = cliques;
  for (auto& c : t.clusters) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.empty()) throw InvalidArgument("empty clique");
  }
  std::sort(t.clusters.begin(), t.clusters.end());
  if (std::adjacent_find(t.clusters.begin(), t.clusters.end()) !=
      t.clusters.end())
    throw InvalidArgument("duplicate cliques");
  int n = t.num_clusters();

  // Candidate edges sorted by descending intersection size, then index pair;
  // Kruskal keeps the first acyclic ones.  Weight-0 pairs are never linked.
  struct Cand {
    int w, i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int w = static_cast<int>(
          intersect_sorted(t.clusters[i], t.clusters[j]).size());
      if (w > 0) cands.push_back({w, i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  Dsu dsu(n);
  for (const auto& c : cands)
    if (dsu.unite(c.i, c.j))
      t.edges.push_back({c.i, c.j, intersect_sorted(t.clusters[c.i], t.clusters[c.j])});
  std::sort(t.edges.begin(), t.edges.end(),
            [](const JoinTree::Edge& a, const JoinTree::Edge& b) {
              return std::tie(a.a, a.b) < std::tie(b.a, b.b);
            });
  t.sep_bound = t.max_separator_size();
  t.validate();
  return t;
}

namespace {

// Merge clusters by union-find grouping, rebuild a canonical JoinTree, and
// absorb any cluster contained in a neighbor.  `group` maps old cluster
// index -> group representative.
JoinTree contract(const JoinTree& src, Dsu& groups) {
  // Union the variables of each group.
  std::map<int, std::set<int>> members;
  for (int i = 0; i < src.num_clusters(); ++i) {
    auto& m = members[groups.find(i)];
    m.insert(src.clusters[i].begin(), src.clusters[i].end());
  }
  std::vector<std::vector<int>> merged;
  std::map<int, int> rep_to_new;
  for (auto& [rep, vars] : members) {
    rep_to_new[rep] = static_cast<int>(merged.size());
    merged.push_back({vars.begin(), vars.end()});
  }
  // Surviving edges connect distinct groups; contracting tree edges cannot
  // create parallel edges.
  std::vector<std::pair<int, int>> new_edges;
  for (const auto& e : src.edges) {
    int a = rep_to_new[groups.find(e.a)], b = rep_to_new[groups.find(e.b)];
    if (a != b) new_edges.push_back({std::min(a, b), std::max(a, b)});
  }

  // Absorption sweep: a cluster equal to or contained in a neighbor melts
  // into it.  Provably unreachable for maximal-clique primaries; kept for
  // hand-built trees.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [a, b] : new_edges) {
      const auto& ca = merged[a];
      const auto& cb = merged[b];
      int sub = -1, super = -1;
      if (std::includes(cb.begin(), cb.end(), ca.begin(), ca.end()))
        sub = a, super = b;
      else if (std::includes(ca.begin(), ca.end(), cb.begin(), cb.end()))
        sub = b, super = a;
      if (sub < 0) continue;
      std::vector<std::pair<int, int>> next;
      for (auto& [x, y] : new_edges) {
        int u = (x == sub) ? super : x;
        int v = (y == sub) ? super : y;
        if (u != v) next.push_back({std::min(u, v), std::max(u, v)});
      }
      merged[sub].clear();  // tombstone
      new_edges = std::move(next);
      changed = true;
      break;
    }
  }

  // Canonicalize: drop tombstones, sort clusters, remap edges.
  std::vector<int> live;
  for (int i = 0; i < static_cast<int>(merged.size()); ++i)
    if (!merged[i].empty()) live.push_back(i);
  std::sort(live.begin(), live.end(),
            [&](int a, int b) { return merged[a] < merged[b]; });
  std::vector<int> remap(merged.size(), -1);
  JoinTree out;
  for (int k = 0; k < static_cast<int>(live.size()); ++k) {
    remap[live[k]] = k;
    out.clusters.push_back(merged[live[k]]);
  }
  std::set<std::pair<int, int>> eset;
  for (auto& [a, b] : new_edges) {
    int u = remap[a], v = remap[b];
    eset.insert({std::min(u, v), std::max(u, v)});
  }
  for (auto& [a, b] : eset)
    out.edges.push_back(
        {a, b, intersect_sorted(out.clusters[a], out.clusters[b])});
  out.sep_bound = out.max_separator_size();
  out.validate();
  return out;
}

}  // namespace

std::vector<JoinTreeLevel> secondary_join_trees(const JoinTree& primary) {
  primary.validate();
  std::set<int, std::greater<int>> sizes;
  for (const auto& e : primary.edges)
    sizes.insert(static_cast<int>(e.separator.size()));

  std::vector<JoinTreeLevel> levels;
  JoinTree t0 = primary;
  t0.sep_bound = t0.max_separator_size();
  levels.push_back({0, t0.sep_bound, std::move(t0)});
  for (int s : sizes) {
    if (s == levels.front().sep_bound) continue;  // threshold = max size: T_0
    Dsu groups(primary.num_clusters());
    for (const auto& e : primary.edges)
      if (static_cast<int>(e.separator.size()) > s) groups.unite(e.a, e.b);
    JoinTree t = contract(primary, groups);
    levels.push_back({static_cast<int>(levels.size()), s, std::move(t)});
  }
  return levels;
}

const JoinTreeLevel& level_for_bound(const std::vector<JoinTreeLevel>& levels,
                                     int bound) {
  if (levels.empty()) throw InvalidArgument("empty level family");
  for (const auto& l : levels)
    if (l.sep_bound <= bound) return l;
  return levels.back();
}

}  // namespace treespan
