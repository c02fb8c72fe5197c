#pragma once

#include <string>
#include <vector>

#include "treespan/graph.hpp"
#include "treespan/table.hpp"

namespace treespan {

struct Variable {
  std::string name;
  int card = 0;
  bool is_decision = false;
};

// Observed values, kept sorted by variable id.
struct Evidence {
  std::vector<std::pair<int, int>> items;  // (var, value), sorted by var

  static Evidence of(std::vector<std::pair<int, int>> items);
  bool observes(int v) const;
  int value(int v) const;  // -1 when unobserved
  bool empty() const { return items.empty(); }
};

// Directed network with one conditional probability table per variable.
// cpts[v] has scope sorted({v} u parents(v)); rows for each parent
// assignment sum to 1 within kProbTol (validated).
struct BeliefNetwork {
  std::vector<Variable> vars;
  DirectedGraph dag;
  std::vector<Table> cpts;

  int num_vars() const { return static_cast<int>(vars.size()); }
  std::vector<int> cards() const;
  void validate() const;
  UndirectedGraph moral_graph() const { return moralize(dag); }
  // Product of all CPT entries at a full assignment.
  double joint_probability(const std::vector<int>& full) const;
};

// Relational constraints: scope (sorted var ids) + allowed tuples (values in
// scope order, sorted lexicographically).
struct Constraint {
  std::vector<int> scope;
  std::vector<std::vector<int>> tuples;

  bool allows(const std::vector<int>& full) const;
  // 0/1 indicator table over the scope.
  Table indicator(const std::vector<int>& global_cards) const;
};

struct ConstraintNetwork {
  std::vector<Variable> vars;
  std::vector<Constraint> constraints;

  int num_vars() const { return static_cast<int>(vars.size()); }
  std::vector<int> cards() const;
  void validate() const;
  UndirectedGraph primal() const;
  bool satisfied_by(const std::vector<int>& full) const;
};

// Additive criterion: value(x) = sum of component tables at x.
struct CriterionFunction {
  std::vector<Table> components;

  std::vector<std::vector<int>> scopes() const;
  double value(const std::vector<int>& full) const;
};

// Belief network plus root decision variables and additive utility
// components.  Decision variables have no CPT and no parents; chance
// variables carry CPTs whose scopes may include decisions.
struct InfluenceDiagram {
  std::vector<Variable> vars;  // is_decision marks decision variables
  DirectedGraph dag;
  std::vector<Table> cpts;     // empty Table for decision vars (unused)
  CriterionFunction utility;

  int num_vars() const { return static_cast<int>(vars.size()); }
  std::vector<int> cards() const;
  std::vector<int> decision_vars() const;  // sorted
  void validate() const;
  // Moral graph of the full DAG augmented with utility component scopes.
  UndirectedGraph decomposition_graph() const;
};

}  // namespace treespan
