#include "doctest.h"

#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "gen.hpp"
#include "treespan/tradeoff.hpp"

using namespace treespan;

TEST_CASE("pareto_min filters dominated pairs") {
  CHECK(pareto_min({}).empty());
  CHECK(pareto_min({{4, 3}, {4, 3}}) ==
        std::vector<std::pair<int, int>>{{4, 3}});
  // (5,3) dominated by (4,3); (7,1) survives on space
  CHECK(pareto_min({{5, 3}, {4, 3}, {7, 1}, {4, 2}, {5, 1}}) ==
        std::vector<std::pair<int, int>>{{4, 2}, {5, 1}});
  // equal time, different space: smaller space wins
  CHECK(pareto_min({{4, 3}, {4, 2}}) ==
        std::vector<std::pair<int, int>>{{4, 2}});
}

TEST_CASE("eight-variable graph: full tradeoff table") {
  AnalysisReport rep = analyze_graph(fix::eightvar_moral(),
                                     OrderingHeuristic::MinFill);
  CHECK(rep.num_vars == 8);
  CHECK(rep.num_edges == 14);
  CHECK(rep.ordering_name == "min-fill");
  CHECK(rep.induced_width == 3);
  REQUIRE(rep.levels.size() == 3);
  REQUIRE(rep.tradeoff.size() == 3);

  const TradeoffLevel& t0 = rep.tradeoff[0];
  CHECK(t0.sep_size == 3);
  CHECK(t0.tree_width == 3);
  CHECK(t0.cutset_size == 2);
  CHECK(t0.cutset_exact);
  CHECK(t0.bf_time == 4);
  CHECK(t0.bf_space == 3);
  CHECK(t0.cut_time == 4);
  CHECK(t0.cut_space == 3);

  const TradeoffLevel& t1 = rep.tradeoff[1];
  CHECK(t1.sep_size == 2);
  CHECK(t1.tree_width == 4);
  CHECK(t1.cutset_size == 2);
  CHECK(t1.bf_time == 5);
  CHECK(t1.bf_space == 2);
  CHECK(t1.cut_time == 4);
  CHECK(t1.cut_space == 2);

  const TradeoffLevel& t2 = rep.tradeoff[2];
  CHECK(t2.sep_size == 1);
  CHECK(t2.tree_width == 6);
  CHECK(t2.cutset_size == 3);
  CHECK(t2.bf_time == 7);
  CHECK(t2.bf_space == 1);
  CHECK(t2.cut_time == 5);
  CHECK(t2.cut_space == 1);

  CHECK(rep.dominating ==
        std::vector<std::pair<int, int>>{{4, 2}, {5, 1}});
}

TEST_CASE("analysis accepts a given ordering") {
  UndirectedGraph m = fix::eightvar_moral();
  EliminationOrdering d =
      find_ordering(m, OrderingHeuristic::MinFill);
  AnalysisReport rep = analyze_graph(m, d);
  CHECK(rep.ordering_name == "given");
  CHECK(rep.induced_width == 3);
  CHECK(rep.dominating ==
        std::vector<std::pair<int, int>>{{4, 2}, {5, 1}});
}

TEST_CASE("tradeoff invariants on random graphs") {
  gen::Rng rng(20240805);
  for (int rep_i = 0; rep_i < 40; ++rep_i) {
    UndirectedGraph g = gen::random_graph(rng, 10, 0.3);
    AnalysisReport rep = analyze_graph(g, OrderingHeuristic::MinFill);

    REQUIRE(rep.levels.size() == rep.tradeoff.size());
    for (std::size_t i = 0; i < rep.tradeoff.size(); ++i) {
      const TradeoffLevel& t = rep.tradeoff[i];
      CHECK(t.sep_size == rep.levels[i].sep_bound);
      CHECK(t.tree_width ==
            rep.levels[i].tree.max_cluster_size() - 1);
      // predicted exponents, in terms of the level's parameters
      CHECK(t.bf_time == t.tree_width + 1);
      CHECK(t.bf_space == t.sep_size);
      CHECK(t.cut_time == std::max(t.cutset_size + 2, t.sep_size));
      CHECK(t.cut_space == t.sep_size);
      // cutsets never exceed width (removing all but one cluster vertex
      // trivially breaks every cluster cycle)
      CHECK(t.cutset_size <= t.tree_width);
    }

    // the dominating set is the pareto cut of all strategy/level pairs
    std::vector<std::pair<int, int>> all;
    for (const TradeoffLevel& t : rep.tradeoff) {
      all.emplace_back(t.bf_time, t.bf_space);
      all.emplace_back(t.cut_time, t.cut_space);
    }
    CHECK(rep.dominating == pareto_min(all));

    // pareto: strictly increasing time, strictly decreasing space
    for (std::size_t i = 1; i < rep.dominating.size(); ++i) {
      CHECK(rep.dominating[i].first > rep.dominating[i - 1].first);
      CHECK(rep.dominating[i].second < rep.dominating[i - 1].second);
    }
  }
}
