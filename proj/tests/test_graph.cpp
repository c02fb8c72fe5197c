#include "doctest.h"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "gen.hpp"
#include "treespan/graph.hpp"

using namespace treespan;

TEST_CASE("undirected graph basics") {
  UndirectedGraph g(4, {{0, 1}, {2, 1}, {0, 3}});
  CHECK(g.num_vertices() == 4);
  CHECK(g.num_edges() == 3);
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.neighbors(0) == std::vector<int>{1, 3});
  CHECK(g.neighbors(1) == std::vector<int>{0, 2});
  CHECK(g.degree(1) == 2);
  CHECK(g.edges() ==
        std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}});

  CHECK_THROWS_AS(UndirectedGraph(2, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(UndirectedGraph(2, {{0, 2}}), InvalidArgument);
  CHECK_THROWS_AS(UndirectedGraph(3, {{0, 1}, {1, 0}}), InvalidArgument);
}

TEST_CASE("with_edges and induced") {
  UndirectedGraph g(4, {{0, 1}});
  UndirectedGraph g2 = g.with_edges({{1, 2}, {0, 1}});
  CHECK(g2.num_edges() == 2);
  CHECK(g2.has_edge(1, 2));
  CHECK(g.num_edges() == 1);  // original untouched

  UndirectedGraph tri(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}});
  UndirectedGraph sub = tri.induced({0, 1, 2, 4});
  CHECK(sub.num_vertices() == 5);
  CHECK(sub.num_edges() == 3);
  CHECK(sub.has_edge(0, 2));
  CHECK_FALSE(sub.has_edge(2, 3));
  CHECK_FALSE(sub.has_edge(3, 4));
}

TEST_CASE("directed graph and cycles") {
  DirectedGraph d(3, {{0, 1}, {1, 2}});
  CHECK(d.parents(1) == std::vector<int>{0});
  CHECK(d.children(1) == std::vector<int>{2});
  CHECK(d.roots() == std::vector<int>{0});
  CHECK_FALSE(d.find_cycle().has_value());

  DirectedGraph loop(3, {{0, 1}, {1, 2}, {2, 0}});
  auto cyc = loop.find_cycle();
  REQUIRE(cyc.has_value());
  CHECK(cyc->front() == cyc->back());
  CHECK(cyc->size() == 4);
}

TEST_CASE("moralization marries co-parents") {
  // chain: no marriages
  CHECK(moralize(DirectedGraph(3, {{0, 1}, {1, 2}})).num_edges() == 2);

  // collider 0 -> 2 <- 1 marries {0,1}
  UndirectedGraph m = moralize(DirectedGraph(3, {{0, 2}, {1, 2}}));
  CHECK(m.num_edges() == 3);
  CHECK(m.has_edge(0, 1));

  CHECK_THROWS_AS(moralize(DirectedGraph(2, {{0, 1}, {1, 0}})),
                  InvalidArgument);
}

TEST_CASE("eight-variable moral graph") {
  UndirectedGraph m = fix::eightvar_moral();
  CHECK(m.num_vertices() == 8);
  CHECK(m.num_edges() == 14);
  // the three marriages
  CHECK(m.has_edge(1, 3));
  CHECK(m.has_edge(3, 5));
  CHECK(m.has_edge(4, 6));
  CHECK_FALSE(m.has_edge(0, 6));
}

TEST_CASE("primal and scope augmentation") {
  UndirectedGraph p = primal_graph(5, {{0, 1, 2}, {2, 3}});
  CHECK(p.num_edges() == 4);
  CHECK(p.has_edge(0, 2));
  CHECK(p.degree(4) == 0);

  UndirectedGraph a = augment_with_scopes(p, {{0, 4}});
  CHECK(a.num_edges() == 5);
  CHECK(a.has_edge(0, 4));
}

TEST_CASE("connected components") {
  UndirectedGraph g(6, {{0, 2}, {2, 4}, {1, 5}});
  auto comps = connected_components(g);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<int>{0, 2, 4});
  CHECK(comps[1] == std::vector<int>{1, 5});
  CHECK(comps[2] == std::vector<int>{3});
}

TEST_CASE("cycle detection") {
  CHECK(is_forest(UndirectedGraph(4, {{0, 1}, {1, 2}, {1, 3}})));
  UndirectedGraph c(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  CHECK_FALSE(is_forest(c));
  auto cyc = find_undirected_cycle(c);
  REQUIRE(cyc.has_value());
  CHECK(cyc->front() == cyc->back());
  CHECK(cyc->size() >= 4);
}

TEST_CASE("biconnected components: blocks and articulation vertices") {
  // two triangles sharing vertex 2
  UndirectedGraph g(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
  BiconnectedDecomposition d = biconnected_components(g);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0] == std::vector<int>{0, 1, 2});
  CHECK(d.components[1] == std::vector<int>{2, 3, 4});
  CHECK(d.articulation_vertices == std::vector<int>{2});

  // a bridge is its own 2-vertex block
  BiconnectedDecomposition b =
      biconnected_components(UndirectedGraph(3, {{0, 1}, {1, 2}}));
  CHECK(b.components.size() == 2);
  CHECK(b.articulation_vertices == std::vector<int>{1});

  // isolated vertices are excluded
  CHECK(biconnected_components(UndirectedGraph(3)).components.empty());
}

TEST_CASE("biconnected components partition the edges") {
  gen::Rng rng(20240801);
  for (int rep = 0; rep < 60; ++rep) {
    UndirectedGraph g = gen::random_graph(rng, 12, 0.25);
    BiconnectedDecomposition d = biconnected_components(g);

    // every edge lies in exactly one block
    for (const auto& e : g.edges()) {
      int holders = 0;
      for (const auto& comp : d.components)
        if (std::binary_search(comp.begin(), comp.end(), e.first) &&
            std::binary_search(comp.begin(), comp.end(), e.second))
          ++holders;
      CHECK(holders == 1);
    }

    // articulation vertices = vertices shared by two or more blocks
    std::set<int> multi;
    std::vector<int> seen_in(g.num_vertices(), 0);
    for (const auto& comp : d.components)
      for (int v : comp)
        if (++seen_in[v] == 2) multi.insert(v);
    std::vector<int> shared(multi.begin(), multi.end());
    CHECK(shared == d.articulation_vertices);
  }
}
