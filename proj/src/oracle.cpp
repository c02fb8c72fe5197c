#include "treespan/oracle.hpp"

#include <string>

namespace treespan {
namespace {

void check_budget(const std::vector<int>& cards, long long budget) {
  long long space = 1;
  for (int k : cards) {
    space *= k;
    if (space > budget)
      throw Error("joint state space exceeds the oracle budget of " +
                  std::to_string(budget) + " assignments");
  }
}

// Calls fn(full) for every full assignment, in lexicographic order.
template <class Fn>
void enumerate(const std::vector<int>& cards, Fn&& fn) {
  std::vector<int> full(cards.size(), 0);
  for (;;) {
    fn(full);
    int i = static_cast<int>(cards.size()) - 1;
    while (i >= 0 && ++full[i] == cards[i]) full[i--] = 0;
    if (i < 0) break;
  }
}

bool matches(const std::vector<int>& full, const Evidence& ev) {
  for (auto [v, val] : ev.items)
    if (full[v] != val) return false;
  return true;
}

}  // namespace

OracleBelief oracle_belief(const BeliefNetwork& bn, int query,
                           const Evidence& evidence, long long budget) {
  bn.validate();
  if (query < 0 || query >= bn.num_vars())
    throw InvalidArgument("query variable out of range");
  std::vector<int> cards = bn.cards();
  check_budget(cards, budget);

  OracleBelief res;
  std::vector<double> mass(cards[query], 0.0);
  enumerate(cards, [&](const std::vector<int>& full) {
    if (!matches(full, evidence)) return;
    double p = bn.joint_probability(full);
    mass[full[query]] += p;
    res.p_evidence += p;
  });
  if (res.p_evidence == 0.0) {
    res.impossible = true;
    return res;
  }
  res.posterior.resize(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i)
    res.posterior[i] = mass[i] / res.p_evidence;
  return res;
}

OracleMpe oracle_mpe(const BeliefNetwork& bn, const Evidence& evidence,
                     long long budget) {
  bn.validate();
  std::vector<int> cards = bn.cards();
  check_budget(cards, budget);

  OracleMpe res;
  bool first = true;
  enumerate(cards, [&](const std::vector<int>& full) {
    if (!matches(full, evidence)) return;
    double p = bn.joint_probability(full);
    if (first || p > res.probability) {
      first = false;
      res.probability = p;
      res.assignment = full;
    }
  });
  if (first || res.probability == 0.0) {
    res.impossible = true;
    res.probability = 0.0;
  }
  return res;
}

OracleCsp oracle_csp(const ConstraintNetwork& cn, long long budget) {
  cn.validate();
  std::vector<int> cards = cn.cards();
  check_budget(cards, budget);

  OracleCsp res;
  enumerate(cards, [&](const std::vector<int>& full) {
    if (!cn.satisfied_by(full)) return;
    if (res.solution.empty() && res.count == 0) res.solution = full;
    res.count += 1;
  });
  res.consistent = res.count > 0;
  return res;
}

OracleOpt oracle_opt(const ConstraintNetwork& cn,
                     const CriterionFunction& criterion, long long budget) {
  cn.validate();
  std::vector<int> cards = cn.cards();
  check_budget(cards, budget);

  OracleOpt res;
  enumerate(cards, [&](const std::vector<int>& full) {
    if (!cn.satisfied_by(full)) return;
    double v = criterion.value(full);
    if (!res.consistent || v > res.value) {
      res.consistent = true;
      res.value = v;
      res.assignment = full;
    }
  });
  return res;
}

OracleMeu oracle_meu(const InfluenceDiagram& id, long long budget) {
  id.validate();
  std::vector<int> cards = id.cards();
  check_budget(cards, budget);
  std::vector<int> dvars = id.decision_vars();

  // Expected utility per decision assignment, indexed mixed-radix over the
  // decision variables (last one fastest, matching enumeration order).
  long long n_delta = 1;
  for (int d : dvars) n_delta *= cards[d];
  std::vector<double> eu(static_cast<std::size_t>(n_delta), 0.0);

  enumerate(cards, [&](const std::vector<int>& full) {
    double p = 1.0;
    for (int v = 0; v < id.num_vars(); ++v)
      if (!id.vars[v].is_decision) p *= id.cpts[v].at(full);
    long long idx = 0;
    for (int d : dvars) idx = idx * cards[d] + full[d];
    eu[idx] += p * id.utility.value(full);
  });

  OracleMeu res;
  long long best = 0;
  for (long long i = 1; i < n_delta; ++i)
    if (eu[i] > eu[best]) best = i;  // strict: first winner is lex-least
  res.expected_utility = eu[best];
  res.decision_values.assign(dvars.size(), 0);
  for (int i = static_cast<int>(dvars.size()) - 1; i >= 0; --i) {
    res.decision_values[i] = static_cast<int>(best % cards[dvars[i]]);
    best /= cards[dvars[i]];
  }
  return res;
}

}  // namespace treespan
