#include "treespan/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace treespan {

Evidence Evidence::of(std::vector<std::pair<int, int>> items) {
  std::sort(items.begin(), items.end());
  for (size_t i = 1; i < items.size(); ++i)
    if (items[i].first == items[i - 1].first)
      throw InvalidArgument("variable observed twice");
  Evidence e;
  e.items = std::move(items);
  return e;
}

bool Evidence::observes(int v) const { return value(v) >= 0; }

int Evidence::value(int v) const {
  auto it = std::lower_bound(items.begin(), items.end(), std::make_pair(v, -1));
  if (it != items.end() && it->first == v) return it->second;
  return -1;
}

// ---------------------------------------------------------------------------
// BeliefNetwork

std::vector<int> BeliefNetwork::cards() const {
  std::vector<int> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(v.card);
  return out;
}

void BeliefNetwork::validate() const {
  int n = num_vars();
  if (dag.num_vertices() != n || static_cast<int>(cpts.size()) != n)
    throw InvalidArgument("belief network shape mismatch");
  if (auto cyc = dag.find_cycle())
    throw InvalidArgument("belief network graph has a directed cycle");
  auto cds = cards();
  for (int v = 0; v < n; ++v) {
    std::vector<int> family = dag.parents(v);
    family.push_back(v);
    std::sort(family.begin(), family.end());
    if (cpts[v].scope() != family)
      throw InvalidArgument("CPT scope for " + vars[v].name +
                            " must be the variable plus its parents");
    // Rows over the child variable must each sum to 1.
    std::vector<int> parents = dag.parents(v);
    Odometer odo(parents, cds);
    std::vector<int> full(n, 0);
    for (; !odo.done(); odo.next()) {
      odo.store(full);
      double sum = 0;
      for (int val = 0; val < cds[v]; ++val) {
        full[v] = val;
        double p = cpts[v].at(full);
        if (!(p >= 0.0) || !std::isfinite(p))
          throw InvalidArgument("CPT for " + vars[v].name +
                                " has a negative or non-finite entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol)
        throw InvalidArgument("CPT rows for " + vars[v].name +
                              " must sum to 1 (got " + fmt_double(sum) + ")");
    }
  }
}

double BeliefNetwork::joint_probability(const std::vector<int>& full) const {
  double p = 1.0;
  for (const auto& t : cpts) p *= t.at(full);
  return p;
}

// ---------------------------------------------------------------------------
// Constraints

bool Constraint::allows(const std::vector<int>& full) const {
  std::vector<int> proj(scope.size());
  for (size_t i = 0; i < scope.size(); ++i) proj[i] = full[scope[i]];
  return std::binary_search(tuples.begin(), tuples.end(), proj);
}

Table Constraint::indicator(const std::vector<int>& global_cards) const {
  Table t = Table::filled(scope, global_cards, 0.0);
  for (const auto& tup : tuples) {
    std::int64_t idx = 0;
    for (size_t i = 0; i < scope.size(); ++i)
      idx = idx * global_cards[scope[i]] + tup[i];
    t[idx] = 1.0;
  }
  return t;
}

std::vector<int> ConstraintNetwork::cards() const {
  std::vector<int> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(v.card);
  return out;
}

void ConstraintNetwork::validate() const {
  int n = num_vars();
  for (const auto& c : constraints) {
    if (c.scope.empty()) throw InvalidArgument("constraint with empty scope");
    if (!std::is_sorted(c.scope.begin(), c.scope.end()) ||
        std::adjacent_find(c.scope.begin(), c.scope.end()) != c.scope.end())
      throw InvalidArgument("constraint scope must be a sorted set");
    if (c.scope.front() < 0 || c.scope.back() >= n)
      throw InvalidArgument("constraint scope variable out of range");
    if (!std::is_sorted(c.tuples.begin(), c.tuples.end()))
      throw InvalidArgument("constraint tuples must be sorted");
    if (std::adjacent_find(c.tuples.begin(), c.tuples.end()) != c.tuples.end())
      throw InvalidArgument("duplicate constraint tuple");
    for (const auto& tup : c.tuples) {
      if (tup.size() != c.scope.size())
        throw InvalidArgument("constraint tuple arity mismatch");
      for (size_t i = 0; i < tup.size(); ++i)
        if (tup[i] < 0 || tup[i] >= vars[c.scope[i]].card)
          throw InvalidArgument("constraint tuple value out of domain");
    }
  }
}

UndirectedGraph ConstraintNetwork::primal() const {
  std::vector<std::vector<int>> scopes;
  for (const auto& c : constraints) scopes.push_back(c.scope);
  return primal_graph(num_vars(), scopes);
}

bool ConstraintNetwork::satisfied_by(const std::vector<int>& full) const {
  for (const auto& c : constraints)
    if (!c.allows(full)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// CriterionFunction

std::vector<std::vector<int>> CriterionFunction::scopes() const {
  std::vector<std::vector<int>> out;
  for (const auto& t : components) out.push_back(t.scope());
  return out;
}

double CriterionFunction::value(const std::vector<int>& full) const {
  double v = 0;
  for (const auto& t : components) v += t.at(full);
  return v;
}

// ---------------------------------------------------------------------------
// InfluenceDiagram

std::vector<int> InfluenceDiagram::cards() const {
  std::vector<int> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(v.card);
  return out;
}

std::vector<int> InfluenceDiagram::decision_vars() const {
  std::vector<int> out;
  for (int v = 0; v < num_vars(); ++v)
    if (vars[v].is_decision) out.push_back(v);
  return out;
}

void InfluenceDiagram::validate() const {
  int n = num_vars();
  if (dag.num_vertices() != n || static_cast<int>(cpts.size()) != n)
    throw InvalidArgument("influence diagram shape mismatch");
  if (auto cyc = dag.find_cycle())
    throw InvalidArgument("influence diagram graph has a directed cycle");
  if (utility.components.empty())
    throw InvalidArgument("influence diagram requires a utility criterion");
  auto cds = cards();
  for (int v = 0; v < n; ++v) {
    if (vars[v].is_decision) {
      if (!dag.parents(v).empty())
        throw InvalidArgument("decision variable " + vars[v].name +
                              " must be a root");
      continue;
    }
    std::vector<int> family = dag.parents(v);
    family.push_back(v);
    std::sort(family.begin(), family.end());
    if (cpts[v].scope() != family)
      throw InvalidArgument("CPT scope for " + vars[v].name +
                            " must be the variable plus its parents");
    Odometer odo(dag.parents(v), cds);
    std::vector<int> full(n, 0);
    for (; !odo.done(); odo.next()) {
      odo.store(full);
      double sum = 0;
      for (int val = 0; val < cds[v]; ++val) {
        full[v] = val;
        double p = cpts[v].at(full);
        if (!(p >= 0.0) || !std::isfinite(p))
          throw InvalidArgument("CPT for " + vars[v].name +
                                " has a negative or non-finite entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol)
        throw InvalidArgument("CPT rows for " + vars[v].name +
                              " must sum to 1 (got " + fmt_double(sum) + ")");
    }
  }
  for (const auto& u : utility.components)
    for (double x : u.values())
      if (!std::isfinite(x))
        throw InvalidArgument("utility component has a non-finite entry");
}

UndirectedGraph InfluenceDiagram::decomposition_graph() const {
  return augment_with_scopes(moralize(dag), utility.scopes());
}

}  // namespace treespan
