#include "treespan/tradeoff.hpp"

#include <algorithm>

namespace treespan {

namespace {

AnalysisReport analyze_impl(const UndirectedGraph& g, ChordalResult chordal,
                            std::string ordering_name, int cutset_budget) {
  AnalysisReport rep;
  rep.num_vars = g.num_vertices();
  rep.num_edges = g.num_edges();
  rep.ordering_name = std::move(ordering_name);
  rep.ordering = chordal.ordering;
  rep.induced_width = chordal.induced_width;
  rep.cliques = max_cliques(chordal);
  rep.levels = secondary_join_trees(build_primary_join_tree(rep.cliques));

  for (const auto& lvl : rep.levels) {
    TradeoffLevel t;
    t.index = lvl.index;
    t.sep_size = lvl.sep_bound;
    t.tree_width = lvl.tree.max_cluster_size() - 1;
    t.cutset_size = 0;
    t.cutset_exact = true;
    for (const auto& cluster : lvl.tree.clusters) {
      CycleCutset cc =
          cycle_cutset(g.induced(cluster), CutsetMode::Exact, cutset_budget);
      t.cutset_size =
          std::max(t.cutset_size, static_cast<int>(cc.vertices.size()));
      if (!cc.exact) t.cutset_exact = false;
    }
    t.bf_time = t.tree_width + 1;
    t.bf_space = t.sep_size;
    t.cut_time = std::max(t.cutset_size + 2, t.sep_size);
    t.cut_space = t.sep_size;
    rep.tradeoff.push_back(t);
  }

  std::vector<std::pair<int, int>> pairs;
  for (const auto& t : rep.tradeoff) {
    pairs.push_back({t.bf_time, t.bf_space});
    pairs.push_back({t.cut_time, t.cut_space});
  }
  rep.dominating = pareto_min(std::move(pairs));
  return rep;
}

}  // namespace

AnalysisReport analyze_graph(const UndirectedGraph& g, OrderingHeuristic h,
                             int cutset_budget) {
  return analyze_impl(
      g, triangulate(g, h),
      h == OrderingHeuristic::MinFill ? "min-fill" : "min-degree",
      cutset_budget);
}

AnalysisReport analyze_graph(const UndirectedGraph& g,
                             const EliminationOrdering& d, int cutset_budget) {
  return analyze_impl(g, triangulate(g, d), "given", cutset_budget);
}

std::vector<std::pair<int, int>> pareto_min(
    std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::pair<int, int>> out;
  for (const auto& p : pairs) {
    bool dominated = false;
    for (const auto& q : pairs)
      if (q != p && q.first <= p.first && q.second <= p.second) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(p);
  }
  return out;
}

}  // namespace treespan
