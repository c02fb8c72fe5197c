#include "treespan/csp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "treespan/cluster.hpp"
#include "treespan/cutset.hpp"
#include "treespan/propagate.hpp"
#include "treespan/table.hpp"

// Cost accounting here: node_visits counts every attempted (variable :=
// value) decision made by backtracking search; table-based work (the cutset
// strategy's conditioned tree elimination, and solution counting) is
// measured in cell_ops by the table kernels.  A stored separator set is
// persistent space, one cell per kept tuple.

namespace treespan {
namespace {

// Position of v in an arbitrarily ordered variable list, -1 if absent.
int pos_in(const std::vector<int>& vec, int v) {
  auto it = std::find(vec.begin(), vec.end(), v);
  if (it == vec.end()) return -1;
  return static_cast<int>(it - vec.begin());
}

// Search order inside a cluster: smallest domain first, ties by id.
std::vector<int> domain_first_order(const std::vector<int>& cluster,
                                    const std::vector<int>& cards) {
  std::vector<int> order = cluster;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return cards[a] < cards[b]; });
  return order;
}

// A (separator variables, allowed tuples) pair contributed by a child
// cluster, used as a membership check during search.
struct SetCheck {
  const std::vector<int>* vars = nullptr;
  const SepSet* tuples = nullptr;
};

// Chronological backtracking over `vars` in the given order with ascending
// values; with vars in ascending id order, complete solutions are produced
// in lexicographic order.  Constraints and separator-set checks fire at the
// search depth where their scope becomes fully assigned; scopes assigned
// entirely by the pinned prefix are checked once up front.
class ClusterSearch {
 public:
  ClusterSearch(std::vector<int> vars, const std::vector<int>& cards,
                std::vector<const Constraint*> constraints,
                std::vector<SetCheck> sets, std::vector<int> full,
                CostMeter& meter)
      : vars_(std::move(vars)),
        cards_(cards),
        constraints_(std::move(constraints)),
        sets_(std::move(sets)),
        full_(std::move(full)),
        meter_(meter) {
    int depth = static_cast<int>(vars_.size());
    con_at_.resize(depth + 1);
    set_at_.resize(depth + 1);
    for (std::size_t i = 0; i < constraints_.size(); ++i)
      con_at_[trigger(constraints_[i]->scope) + 1].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < sets_.size(); ++i)
      set_at_[trigger(*sets_[i].vars) + 1].push_back(static_cast<int>(i));
  }

  // Calls fn(full) for each solution, in lexicographic order over vars_;
  // fn returns false to stop the enumeration.
  template <class Fn>
  void run(Fn&& fn) {
    for (int ci : con_at_[0])
      if (!constraints_[ci]->allows(full_)) return;
    for (int si : set_at_[0])
      if (!holds(si)) return;
    dfs(0, fn);
  }

 private:
  // Depth at which a scope becomes fully assigned: max position of its
  // variables among vars_ (-1 when everything is pinned already).
  int trigger(const std::vector<int>& scope) const {
    int t = -1;
    for (int v : scope) {
      int p = pos_in(vars_, v);
      if (p < 0 && full_[v] < 0)
        throw std::logic_error("search scope mentions an unassigned variable outside the cluster");
      t = std::max(t, p);
    }
    return t;
  }

  bool holds(int si) const {
    const SetCheck& sc = sets_[si];
    std::vector<int> tuple(sc.vars->size());
    for (std::size_t i = 0; i < sc.vars->size(); ++i)
      tuple[i] = full_[(*sc.vars)[i]];
    return std::binary_search(sc.tuples->begin(), sc.tuples->end(), tuple);
  }

  template <class Fn>
  bool dfs(int depth, Fn&& fn) {
    if (depth == static_cast<int>(vars_.size())) return fn(full_);
    int v = vars_[depth];
    for (int val = 0; val < cards_[v]; ++val) {
      full_[v] = val;
      meter_.visit();
      bool ok = true;
      for (int ci : con_at_[depth + 1])
        if (!constraints_[ci]->allows(full_)) { ok = false; break; }
      if (ok)
        for (int si : set_at_[depth + 1])
          if (!holds(si)) { ok = false; break; }
      if (ok && !dfs(depth + 1, fn)) { full_[v] = -1; return false; }
    }
    full_[v] = -1;
    return true;
  }

  std::vector<int> vars_;
  const std::vector<int>& cards_;
  std::vector<const Constraint*> constraints_;
  std::vector<SetCheck> sets_;
  std::vector<int> full_;
  std::vector<std::vector<int>> con_at_;  // checks per depth (+1 shift)
  std::vector<std::vector<int>> set_at_;
  CostMeter& meter_;
};

// Everything one cluster needs during the upward pass.
struct ClusterCtx {
  std::vector<int> cluster;    // sorted
  std::vector<int> separator;  // toward parent; empty at roots
  std::vector<const Constraint*> constraints;
  std::vector<SetCheck> child_sets;
};

SepSet message_backtracking(const ClusterCtx& cx, const std::vector<int>& cards,
                            CostMeter& meter) {
  SepSet out;
  ClusterSearch search(domain_first_order(cx.cluster, cards), cards,
                       cx.constraints, cx.child_sets,
                       std::vector<int>(cards.size(), -1), meter);
  search.run([&](const std::vector<int>& full) {
    std::vector<int> tuple(cx.separator.size());
    for (std::size_t i = 0; i < cx.separator.size(); ++i)
      tuple[i] = full[cx.separator[i]];
    out.push_back(std::move(tuple));
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  meter.alloc_persistent(static_cast<long long>(out.size()));
  return out;
}

// Child separator sets as 0/1 tables so the table kernels can use them.
std::vector<Table> set_tables(const std::vector<SetCheck>& sets,
                              const std::vector<int>& cards) {
  std::vector<Table> out;
  out.reserve(sets.size());
  std::vector<int> full(cards.size(), -1);
  for (const SetCheck& sc : sets) {
    Table t = Table::filled(*sc.vars, cards, 0.0);
    for (const std::vector<int>& tuple : *sc.tuples) {
      for (std::size_t i = 0; i < sc.vars->size(); ++i)
        full[(*sc.vars)[i]] = tuple[i];
      t[t.index_of(full)] = 1.0;
    }
    for (int v : *sc.vars) full[v] = -1;
    out.push_back(std::move(t));
  }
  return out;
}

// Cutset strategy: enumerate assignments of a cycle-cutset of the cluster's
// function-interaction graph; each residual problem is a forest solved by
// tree elimination over 0/1 tables (directional arc-consistency in table
// form).  Node visits account one decision per cutset binding plus one
// examined value per residual variable, per cutset assignment.
Table cutset_boolean_message(const ClusterCtx& cx, const std::vector<int>& cards,
                             CostMeter& meter, int budget, bool persist) {
  std::vector<Table> owned;
  owned.reserve(cx.constraints.size() + cx.child_sets.size());
  for (const Constraint* c : cx.constraints) owned.push_back(c->indicator(cards));
  for (Table& t : set_tables(cx.child_sets, cards)) owned.push_back(std::move(t));
  std::vector<const Table*> fns;
  for (const Table& t : owned) fns.push_back(&t);
  ClusterProblem cp{cx.cluster, cx.separator, fns, &cards};
  CycleCutset cut = cycle_cutset(interaction_graph(cp), CutsetMode::Exact, budget);

  long long n_gamma = 1;
  for (int v : cut.vertices) n_gamma *= cards[v];
  long long residual =
      static_cast<long long>(cx.cluster.size() - cut.vertices.size());
  int kmax = 1;
  for (int v : cx.cluster) kmax = std::max(kmax, cards[v]);
  meter.visit(n_gamma * (static_cast<long long>(cut.vertices.size()) +
                         residual * kmax));

  return cluster_message_cutset(cp, cut, Semiring::MaxProduct, meter, nullptr,
                                persist);
}

SepSet message_cutset(const ClusterCtx& cx, const std::vector<int>& cards,
                      CostMeter& meter, int budget) {
  Table msg = cutset_boolean_message(cx, cards, meter, budget, /*persist=*/true);
  SepSet out;
  for (std::int64_t i = 0; i < msg.size(); ++i)
    if (msg[i] > 0) out.push_back(msg.local_assignment(i));
  return out;  // cell order is lexicographic over the separator
}

bool root_has_solution(const ClusterCtx& cx, const std::vector<int>& cards,
                       CspStrategy st, CostMeter& meter, int budget) {
  if (st == CspStrategy::Cutset) {
    ClusterCtx rooted = cx;
    rooted.separator.clear();
    Table total =
        cutset_boolean_message(rooted, cards, meter, budget, /*persist=*/false);
    return total[0] > 0;
  }
  bool found = false;
  ClusterSearch search(domain_first_order(cx.cluster, cards), cards,
                       cx.constraints, cx.child_sets,
                       std::vector<int>(cards.size(), -1), meter);
  search.run([&](const std::vector<int>&) {
    found = true;
    return false;
  });
  return found;
}

// Constraint home clusters (lexicographically first covering cluster) and
// per-cluster constraint lists.
std::vector<std::vector<const Constraint*>> homed_constraints(
    const ConstraintNetwork& cn, const JoinTree& tree) {
  std::vector<std::vector<int>> scopes;
  scopes.reserve(cn.constraints.size());
  for (const Constraint& c : cn.constraints) scopes.push_back(c.scope);
  // assign_functions returns, per cluster, the indices of the scopes homed there.
  std::vector<std::vector<int>> homes = assign_functions(tree.clusters, scopes);
  std::vector<std::vector<const Constraint*>> per(tree.num_clusters());
  for (int c = 0; c < tree.num_clusters(); ++c)
    for (int s : homes[c]) per[c].push_back(&cn.constraints[s]);
  return per;
}

void require_full_coverage(const ConstraintNetwork& cn, const JoinTree& tree) {
  std::vector<char> seen(cn.num_vars(), 0);
  for (const std::vector<int>& cl : tree.clusters)
    for (int v : cl) {
      if (v < 0 || v >= cn.num_vars())
        throw InvalidArgument("join tree mentions variable " + std::to_string(v) +
                              " outside the network");
      seen[v] = 1;
    }
  for (int v = 0; v < cn.num_vars(); ++v)
    if (!seen[v])
      throw InvalidArgument("join tree covers no cluster containing variable " +
                            std::to_string(v));
}

}  // namespace

std::vector<std::vector<int>> cluster_solutions(const ConstraintNetwork& cn,
                                                const std::vector<int>& cluster,
                                                CspStrategy st, CostMeter& meter,
                                                int cutset_budget) {
  cn.validate();
  if (!std::is_sorted(cluster.begin(), cluster.end()) ||
      std::adjacent_find(cluster.begin(), cluster.end()) != cluster.end())
    throw InvalidArgument("cluster variables must be sorted and unique");
  for (int v : cluster)
    if (v < 0 || v >= cn.num_vars())
      throw InvalidArgument("cluster variable " + std::to_string(v) +
                            " outside the network");
  std::vector<int> cards = cn.cards();
  std::vector<const Constraint*> cons;
  for (const Constraint& c : cn.constraints)
    if (std::includes(cluster.begin(), cluster.end(), c.scope.begin(), c.scope.end()))
      cons.push_back(&c);

  std::vector<std::vector<int>> out;
  auto collect = [&](const std::vector<int>& vars, std::vector<int> start) {
    ClusterSearch search(domain_first_order(vars, cards), cards, cons, {},
                         std::move(start), meter);
    search.run([&](const std::vector<int>& full) {
      std::vector<int> tuple(cluster.size());
      for (std::size_t i = 0; i < cluster.size(); ++i) tuple[i] = full[cluster[i]];
      out.push_back(std::move(tuple));
      return true;
    });
  };

  if (st == CspStrategy::Backtracking) {
    collect(cluster, std::vector<int>(cards.size(), -1));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Cutset: condition on a cycle-cutset of the cluster's constraint
  // interaction graph, enumerate each residual forest by search.
  std::vector<std::vector<int>> scopes;
  for (const Constraint* c : cons) scopes.push_back(c->scope);
  UndirectedGraph ig =
      augment_with_scopes(UndirectedGraph(cn.num_vars(), {}), scopes);
  CycleCutset cut = cycle_cutset(ig.induced(cluster), CutsetMode::Exact, cutset_budget);
  std::vector<int> residual;
  std::set_difference(cluster.begin(), cluster.end(), cut.vertices.begin(),
                      cut.vertices.end(), std::back_inserter(residual));
  Odometer gamma(cut.vertices, cards);
  std::vector<int> start(cards.size(), -1);
  for (; !gamma.done(); gamma.next()) {
    meter.visit(static_cast<long long>(cut.vertices.size()));
    gamma.store(start);
    collect(residual, start);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeMessages pairwise_consistency(const ConstraintNetwork& cn,
                                  const JoinTree& tree, CspStrategy st,
                                  CostMeter& meter, int cutset_budget) {
  cn.validate();
  tree.validate();
  require_full_coverage(cn, tree);
  std::vector<int> cards = cn.cards();
  int nc = tree.num_clusters();

  TreeMessages tm;
  tm.parent.assign(nc, -1);
  tm.parent_edge.assign(nc, -1);
  tm.to_parent.resize(nc);

  // Orient each component toward its smallest cluster index; BFS order has
  // parents before children, so the reverse processes leaves first.
  std::vector<int> bfs;
  std::vector<char> seen(nc, 0);
  for (int c0 = 0; c0 < nc; ++c0) {
    if (seen[c0]) continue;
    seen[c0] = 1;
    std::size_t head = bfs.size();
    bfs.push_back(c0);
    while (head < bfs.size()) {
      int c = bfs[head++];
      for (auto [nbr, edge] : tree.neighbors(c)) {
        if (seen[nbr]) continue;
        seen[nbr] = 1;
        tm.parent[nbr] = c;
        tm.parent_edge[nbr] = edge;
        bfs.push_back(nbr);
      }
    }
  }
  tm.order.assign(bfs.rbegin(), bfs.rend());

  std::vector<std::vector<const Constraint*>> per = homed_constraints(cn, tree);
  std::vector<std::vector<int>> kids(nc);
  for (int c = 0; c < nc; ++c)
    if (tm.parent[c] >= 0) kids[tm.parent[c]].push_back(c);

  for (int c : tm.order) {
    ClusterCtx cx;
    cx.cluster = tree.clusters[c];
    cx.constraints = per[c];
    for (int k : kids[c])
      cx.child_sets.push_back(
          {&tree.edges[tm.parent_edge[k]].separator, &tm.to_parent[k]});
    if (tm.parent[c] < 0) {
      if (!root_has_solution(cx, cards, st, meter, cutset_budget)) {
        tm.consistent = false;
        tm.failed_cluster = c;
        return tm;
      }
      continue;
    }
    cx.separator = tree.edges[tm.parent_edge[c]].separator;
    tm.to_parent[c] = st == CspStrategy::Cutset
                          ? message_cutset(cx, cards, meter, cutset_budget)
                          : message_backtracking(cx, cards, meter);
    if (tm.to_parent[c].empty()) {
      tm.consistent = false;
      tm.failed_cluster = c;
      return tm;
    }
  }
  return tm;
}

std::vector<int> extract_solution(const ConstraintNetwork& cn,
                                  const JoinTree& tree, const TreeMessages& tm,
                                  CostMeter& meter) {
  if (!tm.consistent)
    throw InvalidArgument("cannot extract a solution from an inconsistent network");
  std::vector<int> cards = cn.cards();
  int nc = tree.num_clusters();
  std::vector<std::vector<const Constraint*>> per = homed_constraints(cn, tree);
  std::vector<std::vector<int>> kids(nc);
  for (int c = 0; c < nc; ++c)
    if (tm.parent[c] >= 0) kids[tm.parent[c]].push_back(c);

  std::vector<int> full(cn.num_vars(), -1);
  // Reverse of the upward order: parents fix their separators before
  // children extend them, and the filtering pass guarantees every extension
  // succeeds (backtrack-free).
  for (auto it = tm.order.rbegin(); it != tm.order.rend(); ++it) {
    int c = *it;
    std::vector<int> vars;  // still-unassigned cluster variables
    for (int v : tree.clusters[c])
      if (full[v] < 0) vars.push_back(v);
    std::vector<SetCheck> sets;
    for (int k : kids[c])
      sets.push_back({&tree.edges[tm.parent_edge[k]].separator, &tm.to_parent[k]});
    bool found = false;
    ClusterSearch search(vars, cards, per[c], sets, full, meter);
    search.run([&](const std::vector<int>& sol) {
      for (int v : tree.clusters[c]) full[v] = sol[v];
      found = true;
      return false;  // first solution is the lexicographically least
    });
    if (!found)
      throw std::logic_error("backtrack-free extraction hit a dead end");
  }
  for (int& v : full)
    if (v < 0) v = 0;  // defensive; coverage check makes this unreachable
  return full;
}

CspResult csp_solve(const ConstraintNetwork& cn, const JoinTree& tree,
                    CspStrategy st, bool want_count, int cutset_budget) {
  CspResult res;
  TreeMessages tm = pairwise_consistency(cn, tree, st, res.meter, cutset_budget);
  res.consistent = tm.consistent;
  res.failed_cluster = tm.failed_cluster;
  if (res.consistent) {
    res.solution = extract_solution(cn, tree, tm, res.meter);
    if (!cn.satisfied_by(res.solution))
      throw std::logic_error("extracted assignment violates a constraint");
  }
  if (want_count) {
    std::vector<Table> owned;
    owned.reserve(cn.constraints.size());
    for (const Constraint& c : cn.constraints) owned.push_back(c.indicator(cn.cards()));
    std::vector<const Table*> fns;
    for (const Table& t : owned) fns.push_back(&t);
    Strategy ts = st == CspStrategy::Cutset ? Strategy::Cutset : Strategy::BruteForce;
    TreeEngine eng(tree, cn.cards(), fns, Evidence{}, Semiring::SumProduct, ts,
                   cutset_budget, res.meter);
    eng.run({});
    res.count = eng.root_table()[0] * eng.aux_total();
    res.counted = true;
    if ((res.count > 0) != res.consistent)
      throw std::logic_error("solution count disagrees with the consistency decision");
  }
  return res;
}

JoinTree nonseparable_join_tree(const UndirectedGraph& g) {
  BiconnectedDecomposition bd = biconnected_components(g);
  std::vector<std::vector<int>> clusters = bd.components;
  std::vector<char> covered(g.num_vertices(), 0);
  for (const std::vector<int>& comp : clusters)
    for (int v : comp) covered[v] = 1;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!covered[v]) clusters.push_back({v});
  std::sort(clusters.begin(), clusters.end());

  JoinTree jt;
  jt.clusters = std::move(clusters);
  // Clusters sharing an articulation vertex form a star around the
  // lexicographically first of them; blocks pairwise share at most one
  // vertex, so the union of these stars is a forest.
  for (int a : bd.articulation_vertices) {
    std::vector<int> holders;
    for (int i = 0; i < static_cast<int>(jt.clusters.size()); ++i)
      if (std::binary_search(jt.clusters[i].begin(), jt.clusters[i].end(), a))
        holders.push_back(i);
    for (std::size_t i = 1; i < holders.size(); ++i)
      jt.edges.push_back({holders[0], holders[i], {a}});
  }
  std::sort(jt.edges.begin(), jt.edges.end(),
            [](const JoinTree::Edge& x, const JoinTree::Edge& y) {
              return std::make_pair(x.a, x.b) < std::make_pair(y.a, y.b);
            });
  jt.sep_bound = jt.edges.empty() ? 0 : 1;
  jt.validate();
  return jt;
}

CspResult nonseparable_solve(const ConstraintNetwork& cn, CspStrategy st,
                             bool want_count, int cutset_budget) {
  cn.validate();
  return csp_solve(cn, nonseparable_join_tree(cn.primal()), st, want_count,
                   cutset_budget);
}

}  // namespace treespan
