#pragma once

#include <vector>

#include "treespan/cutset.hpp"
#include "treespan/graph.hpp"
#include "treespan/meter.hpp"
#include "treespan/table.hpp"

namespace treespan {

// One cluster's local problem during tree propagation: its (active)
// variables, the outgoing separator, and every function that lives here —
// assigned input tables plus messages received from child clusters.
struct ClusterProblem {
  std::vector<int> cluster;             // sorted
  std::vector<int> separator;           // subset of cluster, sorted; may be empty
  std::vector<const Table*> functions;  // scopes all subsets of cluster
  const std::vector<int>* global_cards = nullptr;

  void check() const;  // throws InvalidArgument on shape violations
};

// (combine, marginalize) pairs used by the engines: probabilities use
// products, additive criteria use sums; belief updating marginalizes by
// summation, explanation/optimization by maximization.
enum class Semiring { SumProduct, MaxProduct, MaxSum };

inline Combine semiring_combine(Semiring s) {
  return s == Semiring::MaxSum ? Combine::Add : Combine::Multiply;
}
inline Marg semiring_marg(Semiring s) {
  return s == Semiring::SumProduct ? Marg::Sum : Marg::Max;
}

// For maximizing semirings: per separator cell, the maximizing values of the
// eliminated variables (cluster minus separator, sorted).
struct MessageWitness {
  std::vector<int> elim_vars;
  std::vector<std::vector<int>> values;  // [message cell][elim var position]
};

// Which function goes where: each scope is placed in the lexicographically
// first cluster that covers it.  Throws InvalidArgument naming the scope if
// no cluster covers it (a decomposition bug).  `clusters` must be sorted
// lexicographically, each sorted internally.
std::vector<std::vector<int>> assign_functions(
    const std::vector<std::vector<int>>& clusters,
    const std::vector<std::vector<int>>& scopes);

// Interaction graph of the problem's function scopes (over all n variables;
// variables outside the cluster are isolated).
UndirectedGraph interaction_graph(const ClusterProblem& cp);

// --- The three cluster-processing strategies -------------------------------
// All three compute the same message: marginalize the combination of the
// cluster's functions onto the separator.  They differ in time and in
// working space, which is what CostMeter records.  `persist_output` is true
// for separator messages (counted as persistent cells) and false when the
// output is the query's answer (a root marginal), which is not working space.

// Variable elimination with a min-fill internal order: intermediate tables
// may reach the cluster's internal induced width.
Table cluster_message_elimination(const ClusterProblem& cp, Semiring sr,
                                  CostMeter& meter,
                                  MessageWitness* witness = nullptr,
                                  bool persist_output = true);

// Enumerate full cluster assignments, accumulating into the separator table
// through a single running cell: minimal space, time exponential in the
// cluster size.
Table cluster_message_brute_force(const ClusterProblem& cp, Semiring sr,
                                  CostMeter& meter,
                                  MessageWitness* witness = nullptr,
                                  bool persist_output = true);

// Condition on a cycle-cutset of the cluster's interaction graph, then
// eliminate the forest remainder leaf-by-leaf: every materialized table has
// arity <= 2.  `cut` must leave the residual interaction graph acyclic
// (throws InvalidArgument with a cycle witness otherwise).
Table cluster_message_cutset(const ClusterProblem& cp, const CycleCutset& cut,
                             Semiring sr, CostMeter& meter,
                             MessageWitness* witness = nullptr,
                             bool persist_output = true);

// Convenience: find the cutset (exact within budget, greedy beyond), then run.
Table cluster_message_cutset(const ClusterProblem& cp, Semiring sr,
                             CostMeter& meter, MessageWitness* witness = nullptr,
                             int budget = kDefaultCutsetBudget,
                             bool persist_output = true);

}  // namespace treespan
