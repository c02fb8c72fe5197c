#pragma once

#include <string>
#include <vector>

#include "treespan/models.hpp"

namespace treespan {

// Line-oriented model file grammar (whitespace-separated tokens, `#` starts
// a comment that runs to end of line):
//
//   var <name> <k>        variable with domain {0..k-1}
//   decision <name> <k>   root decision variable (influence diagrams)
//   cpt <child> [| <p1> <p2> ...]
//                         followed by one row per parent assignment in
//                         lexicographic parent order (first listed parent
//                         slowest), each row a line of k_child probabilities
//   rel <v1> <v2> ...     followed by allowed tuples, one per line, then `end`
//   crit <v1> ...         followed by one real per scope assignment in
//                         lexicographic order (first listed variable
//                         slowest), then `end`
//
// Variable names match [A-Za-z_][A-Za-z0-9_]* and may not be keywords.
// Kind is inferred: cpt blocks + decision vars -> influence diagram;
// cpt blocks alone -> belief network; otherwise -> constraint network
// (rel blocks optional, criterion blocks allowed).  Mixing cpt and rel
// blocks is an error, as are decisions without cpt blocks and criterion
// blocks in a plain belief network.  Evidence never appears in files.
enum class ModelKind { Belief, Constraint, Influence };

struct Model {
  ModelKind kind = ModelKind::Constraint;
  // Exactly one of the three is meaningful, per kind; all share variable
  // ids in declaration order.
  BeliefNetwork belief;
  ConstraintNetwork constraint;
  InfluenceDiagram influence;

  bool has_criterion = false;      // embedded crit blocks (constraint kind)
  CriterionFunction criterion;

  const std::vector<Variable>& variables() const;
  std::vector<int> cards() const;
  int num_vars() const { return static_cast<int>(variables().size()); }
  const std::string& name(int v) const { return variables()[v].name; }
  int var_id(const std::string& name) const;  // -1 when unknown
};

// Parse a model file.  Throws ParseError (with 1-based line/column) for
// syntax errors and semantically invalid files (unknown names, bad row
// sums, decision with a CPT, ...).
Model parse_model(const std::string& text);

// Canonical serialization: declarations in id order, scopes sorted by id,
// rows reordered to match, values via fmt_double.  parse(serialize(m))
// serializes back byte-identically.
std::string serialize_model(const Model& m);

// Parse a criterion file (only crit blocks and comments), resolving
// variable names against an existing model.
CriterionFunction parse_criterion(const std::string& text, const Model& base);
std::string serialize_criterion(const CriterionFunction& criterion,
                                const Model& base);

}  // namespace treespan
