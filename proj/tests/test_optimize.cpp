#include "doctest.h"

#include <cmath>
#include <vector>

#include "gen.hpp"
#include "treespan/optimize.hpp"
#include "treespan/oracle.hpp"
#include "treespan/tradeoff.hpp"

using namespace treespan;

namespace {

constexpr double kTol = 1e-9;

const std::vector<Strategy> kStrategies = {Strategy::Elimination,
                                           Strategy::BruteForce,
                                           Strategy::Cutset};

std::vector<JoinTreeLevel> levels_of(const UndirectedGraph& g) {
  return analyze_graph(g, OrderingHeuristic::MinFill).levels;
}

// Decision T feeding a two-link chain T -> X -> Y, rewarded for Y=1 and for
// choosing T=0.  Best play is T=1: 10 * P(Y=1 | T=1) = 5.55 beats
// 10 * 0.23 + 1 = 3.3.
InfluenceDiagram chain_diagram() {
  InfluenceDiagram id;
  id.vars = {{"T", 2, true}, {"X", 2, false}, {"Y", 2, false}};
  id.dag = DirectedGraph(3, {{0, 1}, {1, 2}});
  id.cpts = {Table(), Table({0, 1}, {2, 2}, {0.8, 0.2, 0.3, 0.7}),
             Table({1, 2}, {2, 2}, {0.9, 0.1, 0.25, 0.75})};
  id.utility.components = {Table({2}, {2}, {0.0, 10.0}),
                           Table({0}, {2}, {1.0, 0.0})};
  id.validate();
  return id;
}

}  // namespace

TEST_CASE("optimization graph joins constraint scopes with criterion scopes") {
  ConstraintNetwork cn;
  for (int v = 0; v < 4; ++v)
    cn.vars.push_back({"V" + std::to_string(v), 2, false});
  Constraint a;
  a.scope = {0, 1};
  a.tuples = {{0, 0}, {1, 1}};
  Constraint b;
  b.scope = {2, 3};
  b.tuples = {{0, 0}, {1, 1}};
  cn.constraints = {a, b};
  cn.validate();

  CriterionFunction crit;
  crit.components = {Table::filled({1, 2}, {2, 2, 2, 2}, 1.0),
                     Table::filled({0, 2, 3}, {2, 2, 2, 2}, 2.0)};

  UndirectedGraph g = optimization_graph(cn, crit);
  std::vector<std::pair<int, int>> expected = {
      {0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}};
  CHECK(g.edges() == expected);
  // without the criterion only the constraint edges remain
  CHECK(cn.primal().edges() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
}

TEST_CASE("two variables, a mutual-exclusion constraint, linear rewards") {
  ConstraintNetwork cn;
  cn.vars = {{"V0", 2, false}, {"V1", 2, false}};
  Constraint c;
  c.scope = {0, 1};
  c.tuples = {{0, 0}, {0, 1}, {1, 0}};
  cn.constraints = {c};
  cn.validate();
  CriterionFunction crit;
  crit.components = {Table({0}, {2}, {0.0, 5.0}), Table({1}, {2}, {0.0, 3.0})};

  JoinTree tree = levels_of(optimization_graph(cn, crit)).front().tree;
  for (Strategy st : kStrategies) {
    OptResult r = optimize(cn, crit, tree, st);
    REQUIRE(r.consistent);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.assignment == std::vector<int>{1, 0});
  }
}

TEST_CASE("flat criterion breaks ties toward the all-zero assignment") {
  ConstraintNetwork cn;
  cn.vars = {{"V0", 2, false}, {"V1", 3, false}, {"V2", 2, false}};
  Constraint c;
  c.scope = {0, 1};
  c.tuples = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  cn.constraints = {c};
  cn.validate();
  CriterionFunction crit;
  crit.components = {Table::filled({0}, {2, 3, 2}, 0.0)};

  JoinTree tree = levels_of(optimization_graph(cn, crit)).front().tree;
  for (Strategy st : kStrategies) {
    OptResult r = optimize(cn, crit, tree, st);
    REQUIRE(r.consistent);
    CHECK(r.value == 0.0);
    CHECK(r.assignment == std::vector<int>{0, 0, 0});
  }
}

TEST_CASE("unsatisfiable constraints yield consistent=false") {
  ConstraintNetwork cn;
  cn.vars = {{"V0", 2, false}, {"V1", 2, false}};
  Constraint c;
  c.scope = {0, 1};
  c.tuples = {};
  cn.constraints = {c};
  cn.validate();
  CriterionFunction crit;
  crit.components = {Table::filled({0}, {2, 2}, 1.0)};

  JoinTree tree = levels_of(optimization_graph(cn, crit)).front().tree;
  for (Strategy st : kStrategies) {
    OptResult r = optimize(cn, crit, tree, st);
    CHECK_FALSE(r.consistent);
    CHECK(r.assignment.empty());
  }
}

TEST_CASE("random constrained maximization agrees with enumeration") {
  gen::Rng rng(20240813);
  int consistent_seen = 0;
  for (int rep = 0; rep < 50; ++rep) {
    ConstraintNetwork cn = gen::random_csp(rng, 8, 3, 0.3);
    CriterionFunction crit =
        gen::random_criterion(rng, cn.num_vars(), cn.cards());
    OracleOpt oc = oracle_opt(cn, crit);
    consistent_seen += oc.consistent ? 1 : 0;

    for (const JoinTreeLevel& lv : levels_of(optimization_graph(cn, crit))) {
      for (Strategy st : kStrategies) {
        OptResult r = optimize(cn, crit, lv.tree, st);
        REQUIRE(r.consistent == oc.consistent);
        if (!r.consistent) continue;
        CHECK(std::abs(r.value - oc.value) <= kTol);
        CHECK(cn.satisfied_by(r.assignment));
        // the reported value is the criterion at the reported assignment
        CHECK(std::abs(crit.value(r.assignment) - r.value) <= kTol);
      }
    }
  }
  CHECK(consistent_seen >= 25);  // the mix exercises both outcomes
}

TEST_CASE("decision chain: utility of the best play, not the default") {
  InfluenceDiagram id = chain_diagram();
  for (const JoinTreeLevel& lv : levels_of(id.decomposition_graph())) {
    for (Strategy st : kStrategies) {
      MeuResult r = maximum_expected_utility(id, lv.tree, st);
      CHECK(std::abs(r.expected_utility - 5.55) <= 1e-12);
      CHECK(r.decision_values == std::vector<int>{1});
    }
  }
  OracleMeu oc = oracle_meu(id);
  CHECK(std::abs(oc.expected_utility - 5.55) <= 1e-12);
  CHECK(oc.decision_values == std::vector<int>{1});
}

TEST_CASE("random influence diagrams agree with enumeration") {
  gen::Rng rng(20240814);
  for (int rep = 0; rep < 30; ++rep) {
    InfluenceDiagram id = gen::random_id(rng, 6, 2);
    OracleMeu oc = oracle_meu(id);
    for (const JoinTreeLevel& lv : levels_of(id.decomposition_graph())) {
      for (Strategy st : kStrategies) {
        MeuResult r = maximum_expected_utility(id, lv.tree, st);
        CHECK(std::abs(r.expected_utility - oc.expected_utility) <= kTol);
        CHECK(r.decision_values.size() == oc.decision_values.size());
      }
    }
  }
}
