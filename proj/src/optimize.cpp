#include "treespan/optimize.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <utility>

#include "treespan/cluster.hpp"
#include "treespan/table.hpp"

namespace treespan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Additive penalty form of a constraint: 0 where allowed, -infinity where
// forbidden, so max-sum propagation never picks a violating assignment.
Table penalty_table(const Constraint& c, const std::vector<int>& cards) {
  Table t = Table::filled(c.scope, cards, -kInf);
  std::vector<int> full(cards.size(), -1);
  for (const std::vector<int>& tuple : c.tuples) {
    for (std::size_t i = 0; i < c.scope.size(); ++i) full[c.scope[i]] = tuple[i];
    t[t.index_of(full)] = 0.0;
  }
  return t;
}

}  // namespace

UndirectedGraph optimization_graph(const ConstraintNetwork& cn,
                                   const CriterionFunction& criterion) {
  return augment_with_scopes(cn.primal(), criterion.scopes());
}

OptResult optimize(const ConstraintNetwork& cn,
                   const CriterionFunction& criterion, const JoinTree& tree,
                   Strategy st, int cutset_budget) {
  cn.validate();
  for (const Table& comp : criterion.components)
    for (int v : comp.scope())
      if (v < 0 || v >= cn.num_vars())
        throw InvalidArgument("criterion scope mentions variable " +
                              std::to_string(v) + " outside the network");

  std::vector<int> cards = cn.cards();
  std::vector<Table> penalties;
  penalties.reserve(cn.constraints.size());
  for (const Constraint& c : cn.constraints) penalties.push_back(penalty_table(c, cards));

  std::vector<const Table*> fns;
  for (const Table& t : criterion.components) fns.push_back(&t);
  for (const Table& t : penalties) fns.push_back(&t);

  OptResult res;
  TreeEngine eng(tree, cards, fns, Evidence{}, Semiring::MaxSum, st,
                 cutset_budget, res.meter);
  eng.run({});
  double value = eng.root_table()[0] + eng.aux_total();
  res.consistent = std::isfinite(value);
  if (!res.consistent) return res;

  res.assignment = eng.decode();
  if (!cn.satisfied_by(res.assignment))
    throw std::logic_error("maximizing assignment violates a constraint");
  res.value = criterion.value(res.assignment);
  if (std::abs(res.value - value) >
      1e-9 * std::max(1.0, std::abs(res.value)))
    throw std::logic_error("decoded assignment does not reproduce the propagated value");
  return res;
}

MeuResult maximum_expected_utility(const InfluenceDiagram& id,
                                   const JoinTree& tree, Strategy st,
                                   int cutset_budget) {
  id.validate();
  std::vector<int> cards = id.cards();
  std::vector<int> dvars = id.decision_vars();

  std::vector<const Table*> chance;
  for (int v = 0; v < id.num_vars(); ++v)
    if (!id.vars[v].is_decision) chance.push_back(&id.cpts[v]);

  MeuResult res;
  std::vector<int> full(cards.size(), 0);
  Odometer delta(dvars, cards);
  bool first = true;
  for (; !delta.done(); delta.next()) {
    delta.store(full);
    std::vector<std::pair<int, int>> items;
    items.reserve(dvars.size());
    for (int d : dvars) items.emplace_back(d, full[d]);
    Evidence ev = Evidence::of(std::move(items));

    double eu = 0.0;
    for (const Table& u : id.utility.components) {
      std::vector<const Table*> fns = chance;
      fns.push_back(&u);
      TreeEngine eng(tree, cards, fns, ev, Semiring::SumProduct, st,
                     cutset_budget, res.meter);
      eng.run({});
      eu += eng.root_table()[0] * eng.aux_total();
    }
    // Strict improvement keeps the first (lexicographically smallest)
    // maximizing decision assignment.
    if (first || eu > res.expected_utility) {
      first = false;
      res.expected_utility = eu;
      res.decision_values.resize(dvars.size());
      for (std::size_t i = 0; i < dvars.size(); ++i)
        res.decision_values[i] = full[dvars[i]];
    }
  }
  return res;
}

}  // namespace treespan
