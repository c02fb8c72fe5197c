#pragma once

#include <string>
#include <vector>

#include "treespan/cutset.hpp"
#include "treespan/jointree.hpp"
#include "treespan/ordering.hpp"

namespace treespan {

// Predicted complexity exponents for running one query on level i with each
// cluster-processing strategy, in "time/space is exponential in ..." form:
//   brute-force:  time r_i + 1 (enumerate whole clusters), space s_i
//   conditioning: time max(c_i + 2, s_i), space s_i
// where s_i = largest separator, r_i = largest cluster minus one, and c_i =
// largest minimum cycle-cutset of a cluster's induced subgraph.
struct TradeoffLevel {
  int index = 0;
  int sep_size = 0;      // s_i
  int tree_width = 0;    // r_i
  int cutset_size = 0;   // c_i
  bool cutset_exact = true;  // false if any cluster fell back to greedy
  int bf_time = 0, bf_space = 0;
  int cut_time = 0, cut_space = 0;
};

struct AnalysisReport {
  int num_vars = 0;
  int num_edges = 0;
  std::string ordering_name;      // "min-fill", "min-degree" or "given"
  EliminationOrdering ordering;
  int induced_width = 0;
  std::vector<std::vector<int>> cliques;
  std::vector<JoinTreeLevel> levels;
  std::vector<TradeoffLevel> tradeoff;
  // Pareto-minimal (time, space) exponent pairs over all strategies and
  // levels, sorted by time.
  std::vector<std::pair<int, int>> dominating;
};

AnalysisReport analyze_graph(const UndirectedGraph& g, OrderingHeuristic h,
                             int cutset_budget = kDefaultCutsetBudget);
AnalysisReport analyze_graph(const UndirectedGraph& g,
                             const EliminationOrdering& d,
                             int cutset_budget = kDefaultCutsetBudget);

// Pareto-minimal pairs (minimize both coordinates), deduplicated, sorted.
std::vector<std::pair<int, int>> pareto_min(
    std::vector<std::pair<int, int>> pairs);

}  // namespace treespan
