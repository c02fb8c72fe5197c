#pragma once

#include <vector>

#include "treespan/common.hpp"
#include "treespan/models.hpp"

namespace treespan {

// Reference answers by exhaustive enumeration of the full joint assignment
// space, written independently of the table kernels and the propagation
// engine so the two paths can check each other.  Every oracle first checks
// that the state space fits the budget and throws Error (naming the actual
// product) when it does not.  Assignments are enumerated in lexicographic
// order and maxima keep the first winner, so reported argmax assignments
// are lexicographically least.

struct OracleBelief {
  bool impossible = false;
  std::vector<double> posterior;  // per query value; empty when impossible
  double p_evidence = 0.0;
};
OracleBelief oracle_belief(const BeliefNetwork& bn, int query,
                           const Evidence& evidence,
                           long long budget = kDefaultOracleBudget);

struct OracleMpe {
  bool impossible = false;
  double probability = 0.0;
  std::vector<int> assignment;
};
OracleMpe oracle_mpe(const BeliefNetwork& bn, const Evidence& evidence,
                     long long budget = kDefaultOracleBudget);

struct OracleCsp {
  bool consistent = false;
  double count = 0;
  std::vector<int> solution;  // lexicographically least; empty if none
};
OracleCsp oracle_csp(const ConstraintNetwork& cn,
                     long long budget = kDefaultOracleBudget);

struct OracleOpt {
  bool consistent = false;
  double value = 0.0;
  std::vector<int> assignment;
};
OracleOpt oracle_opt(const ConstraintNetwork& cn,
                     const CriterionFunction& criterion,
                     long long budget = kDefaultOracleBudget);

struct OracleMeu {
  double expected_utility = 0.0;
  std::vector<int> decision_values;  // id order over decision variables
};
OracleMeu oracle_meu(const InfluenceDiagram& id,
                     long long budget = kDefaultOracleBudget);

}  // namespace treespan
