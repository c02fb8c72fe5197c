#pragma once

#include <vector>

#include "treespan/jointree.hpp"
#include "treespan/meter.hpp"
#include "treespan/models.hpp"

namespace treespan {

// Cluster-processing strategies for constraint solving: plain backtracking
// over whole clusters, or cycle-cutset conditioning with tree-structured
// residual propagation (arity-<=2 tables).
enum class CspStrategy { Backtracking, Cutset };

// A set of allowed separator tuples, sorted lexicographically.
using SepSet = std::vector<std::vector<int>>;

// All solutions of the subproblem induced by `cluster`: assignments of the
// cluster variables satisfying every network constraint whose scope lies
// inside the cluster.  Tuples are in cluster-variable order (sorted ids),
// sorted lexicographically.
std::vector<std::vector<int>> cluster_solutions(
    const ConstraintNetwork& cn, const std::vector<int>& cluster,
    CspStrategy st, CostMeter& meter, int cutset_budget = kDefaultCutsetBudget);

// Upward (leaves-to-roots) separator filtering: each cluster sends the set
// of separator tuples extendable to a full cluster solution consistent with
// its children's sets.  Equivalent to directional pairwise consistency along
// the tree.  If some cluster admits no solution, consistent=false and
// failed_cluster names it.
struct TreeMessages {
  bool consistent = true;
  int failed_cluster = -1;
  std::vector<int> parent;        // per cluster; -1 at component roots
  std::vector<int> parent_edge;   // tree edge index toward parent
  std::vector<int> order;         // processing order, leaves before parents
  std::vector<SepSet> to_parent;  // per cluster; unused entries empty
};
TreeMessages pairwise_consistency(const ConstraintNetwork& cn,
                                  const JoinTree& tree, CspStrategy st,
                                  CostMeter& meter,
                                  int cutset_budget = kDefaultCutsetBudget);

// Backtrack-free top-down extraction after a consistent filtering pass:
// roots pick their lexicographically smallest solutions, children extend
// their parents' separator values.  Throws std::logic_error if a dead end
// occurs (which the filtering pass guarantees against).
std::vector<int> extract_solution(const ConstraintNetwork& cn,
                                  const JoinTree& tree, const TreeMessages& tm,
                                  CostMeter& meter);

struct CspResult {
  bool consistent = false;
  std::vector<int> solution;  // full assignment when consistent
  bool counted = false;
  double count = 0;           // number of solutions (exact in double range)
  int failed_cluster = -1;    // first empty cluster when inconsistent
  CostMeter meter;
};

// Full pipeline: filtering, extraction, and (optionally) solution counting
// by sum-product propagation over 0/1 constraint indicators using the
// matching table strategy (Backtracking -> whole-cluster enumeration,
// Cutset -> conditioned tree elimination).
CspResult csp_solve(const ConstraintNetwork& cn, const JoinTree& tree,
                    CspStrategy st, bool want_count,
                    int cutset_budget = kDefaultCutsetBudget);

// Join forest whose clusters are the biconnected components of the graph
// (plus singletons for isolated vertices), linked through articulation
// vertices.
JoinTree nonseparable_join_tree(const UndirectedGraph& g);

// csp_solve on the biconnected-component decomposition of the primal graph.
CspResult nonseparable_solve(const ConstraintNetwork& cn, CspStrategy st,
                             bool want_count,
                             int cutset_budget = kDefaultCutsetBudget);

}  // namespace treespan
