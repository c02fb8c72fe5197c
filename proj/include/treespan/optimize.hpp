#pragma once

#include <vector>

#include "treespan/jointree.hpp"
#include "treespan/meter.hpp"
#include "treespan/models.hpp"
#include "treespan/propagate.hpp"

namespace treespan {

// Interaction graph of a constrained optimization problem: the constraint
// network's primal graph augmented with the criterion component scopes.
// Decompositions for `optimize` must be built on this graph.
UndirectedGraph optimization_graph(const ConstraintNetwork& cn,
                                   const CriterionFunction& criterion);

struct OptResult {
  bool consistent = false;     // some assignment satisfies every constraint
  double value = 0.0;          // best criterion value when consistent
  std::vector<int> assignment; // full assignment; empty when inconsistent
  CostMeter meter;
};

// Maximize an additive criterion subject to the network's constraints by
// max-sum propagation: constraints enter as 0 / -infinity penalty tables.
// Ties break toward lexicographically smaller assignments per cluster.
OptResult optimize(const ConstraintNetwork& cn,
                   const CriterionFunction& criterion, const JoinTree& tree,
                   Strategy st, int cutset_budget = kDefaultCutsetBudget);

struct MeuResult {
  double expected_utility = 0.0;
  std::vector<int> decision_values;  // one per decision variable, id order
  CostMeter meter;
};

// Maximum expected utility of an influence diagram: enumerate root decision
// assignments; for each, the expected utility is the sum over utility
// components of a sum-product propagation of the chance CPTs with that
// component, conditioned on the decisions.  Ties break toward the
// lexicographically smallest decision assignment.
MeuResult maximum_expected_utility(const InfluenceDiagram& id,
                                   const JoinTree& tree, Strategy st,
                                   int cutset_budget = kDefaultCutsetBudget);

}  // namespace treespan
