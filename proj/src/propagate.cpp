#include "treespan/propagate.hpp"

#include <algorithm>
#include <cmath>

namespace treespan {

namespace {

std::vector<int> active_part(const std::vector<int>& vars, const Evidence& fixed) {
  std::vector<int> out;
  for (int v : vars)
    if (!fixed.observes(v)) out.push_back(v);
  return out;
}

}  // namespace

TreeEngine::TreeEngine(const JoinTree& tree, const std::vector<int>& global_cards,
                       const std::vector<const Table*>& functions,
                       const Evidence& fixed, Semiring sr, Strategy st,
                       int cutset_budget, CostMeter& meter)
    : tree_(tree),
      cards_(global_cards),
      fixed_(fixed),
      sr_(sr),
      strategy_(st),
      budget_(cutset_budget),
      meter_(meter) {
  for (auto [v, val] : fixed_.items) {
    if (v < 0 || v >= static_cast<int>(cards_.size()))
      throw InvalidArgument("fixed variable out of range");
    if (val < 0 || val >= cards_[v])
      throw InvalidArgument("fixed value out of domain");
  }

  restricted_.reserve(functions.size());
  std::vector<std::vector<int>> scopes;
  for (const Table* f : functions) {
    restricted_.push_back(restrict_table(*f, fixed_.items));
    scopes.push_back(restricted_.back().scope());
  }
  active_clusters_.reserve(tree_.num_clusters());
  for (const auto& c : tree_.clusters) active_clusters_.push_back(active_part(c, fixed_));
  assigned_ = assign_functions(active_clusters_, scopes);

  // Forest components over cluster indices.
  int n = tree_.num_clusters();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (nbr, edge idx)
  for (int e = 0; e < static_cast<int>(tree_.edges.size()); ++e) {
    adj[tree_.edges[e].a].push_back({tree_.edges[e].b, e});
    adj[tree_.edges[e].b].push_back({tree_.edges[e].a, e});
  }
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (size_t i = 0; i < comp.size(); ++i)
      for (auto [w, e] : adj[comp[i]])
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    components_.push_back(std::move(comp));
  }
  parent_.assign(n, -1);
  parent_edge_.assign(n, -1);
}

Table TreeEngine::send(int cluster, const std::vector<int>& sep,
                       MessageWitness* wit, bool persist) {
  ClusterProblem cp;
  cp.cluster = active_clusters_[cluster];
  cp.separator = sep;
  cp.global_cards = &cards_;
  for (int f : assigned_[cluster]) cp.functions.push_back(&restricted_[f]);
  for (auto [nbr, e] : tree_.neighbors(cluster)) {
    (void)e;
    if (parent_[nbr] == cluster) cp.functions.push_back(&messages_.at(nbr));
  }
  switch (strategy_) {
    case Strategy::Elimination:
      return cluster_message_elimination(cp, sr_, meter_, wit, persist);
    case Strategy::BruteForce:
      return cluster_message_brute_force(cp, sr_, meter_, wit, persist);
    case Strategy::Cutset:
      return cluster_message_cutset(cp, sr_, meter_, wit, budget_, persist);
  }
  throw std::logic_error("unknown strategy");
}

void TreeEngine::run(const std::vector<int>& keep) {
  keep_ = keep;
  for (int v : keep) {
    if (fixed_.observes(v))
      throw InvalidArgument("keep variable is fixed");
  }
  // Root of the component that must expose `keep`: the first cluster whose
  // active set covers it.  Clusters are in lexicographic order, so "first
  // index" is the lexicographically first cover.
  int keep_root = -1;
  if (!keep.empty()) {
    for (int c = 0; c < tree_.num_clusters() && keep_root < 0; ++c)
      if (std::includes(active_clusters_[c].begin(), active_clusters_[c].end(),
                        keep.begin(), keep.end()))
        keep_root = c;
    if (keep_root < 0)
      throw InvalidArgument("no cluster covers the query variables");
  }

  aux_total_ = combine_identity(semiring_combine(sr_));
  for (size_t ci = 0; ci < components_.size(); ++ci) {
    const auto& comp = components_[ci];
    int root = comp[0];
    bool is_main =
        (keep_root >= 0)
            ? std::find(comp.begin(), comp.end(), keep_root) != comp.end()
            : ci == 0;
    if (keep_root >= 0 && is_main) root = keep_root;
    // BFS orientation from the root, then process children before parents.
    std::vector<int> bfs{root};
    parent_[root] = -1;
    for (size_t i = 0; i < bfs.size(); ++i) {
      int c = bfs[i];
      for (auto [nbr, e] : tree_.neighbors(c))
        if (nbr != parent_[c]) {
          parent_[nbr] = c;
          parent_edge_[nbr] = e;
          bfs.push_back(nbr);
        }
    }
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
      int c = *it;
      bool maximizing = semiring_marg(sr_) == Marg::Max;
      if (c == root) {
        std::vector<int> rk =
            (is_main && !keep_.empty()) ? keep_ : std::vector<int>{};
        MessageWitness w;
        Table t = send(c, rk, maximizing ? &w : nullptr, /*persist=*/false);
        if (maximizing) witnesses_[c] = std::move(w);
        if (is_main)
          root_table_ = std::move(t);
        else
          aux_total_ = apply_combine(semiring_combine(sr_), aux_total_, t[0]);
      } else {
        const auto& edge = tree_.edges[parent_edge_[c]];
        std::vector<int> sep = active_part(edge.separator, fixed_);
        MessageWitness w;
        Table msg = send(c, sep, maximizing ? &w : nullptr, /*persist=*/true);
        messages_[c] = std::move(msg);
        if (maximizing) witnesses_[c] = std::move(w);
      }
    }
  }
  ran_ = true;
}

std::vector<int> TreeEngine::decode() const {
  if (!ran_ || !keep_.empty())
    throw std::logic_error("decode requires a completed run with empty keep");
  std::vector<int> full(cards_.size(), 0);
  for (auto [v, val] : fixed_.items) full[v] = val;
  for (const auto& comp : components_) {
    // Root first (its witness covers all its active vars), then down the
    // tree: each message witness is indexed by the separator values, which
    // are decoded by the time we reach the child.
    std::vector<int> down;
    for (int c : comp)
      if (parent_[c] == -1) down.push_back(c);
    // BFS order re-derived from parents (deterministic).
    for (size_t i = 0; i < down.size(); ++i) {
      int c = down[i];
      for (int d : comp)
        if (parent_[d] == c) down.push_back(d);
    }
    for (int c : down) {
      auto wit = witnesses_.find(c);
      if (wit == witnesses_.end()) continue;
      const MessageWitness& w = wit->second;
      std::int64_t cell = 0;
      if (parent_[c] != -1) cell = messages_.at(c).index_of(full);
      if (w.values.empty()) continue;
      const std::vector<int>& vals = w.values[cell];
      for (size_t i = 0; i < w.elim_vars.size(); ++i)
        full[w.elim_vars[i]] = vals[i];
    }
  }
  return full;
}

// ---------------------------------------------------------------------------
// Queries

namespace {

std::vector<const Table*> cpt_pointers(const std::vector<Table>& cpts) {
  std::vector<const Table*> out;
  out.reserve(cpts.size());
  for (const auto& t : cpts) out.push_back(&t);
  return out;
}

}  // namespace

BeliefResult belief(const BeliefNetwork& bn, const JoinTree& tree, int query,
                    const Evidence& evidence, Strategy st, int cutset_budget) {
  BeliefResult res;
  auto cards = bn.cards();
  if (query < 0 || query >= bn.num_vars())
    throw InvalidArgument("query variable out of range");

  if (evidence.observes(query)) {
    // Point posterior; p(evidence) still requires a full pass.
    TreeEngine eng(tree, cards, cpt_pointers(bn.cpts), evidence,
                   Semiring::SumProduct, st, cutset_budget, res.meter);
    eng.run({});
    double p = eng.root_table()[0] * eng.aux_total();
    res.p_evidence = p;
    if (p == 0.0) {
      res.impossible = true;
      return res;
    }
    res.posterior.assign(cards[query], 0.0);
    res.posterior[evidence.value(query)] = 1.0;
    return res;
  }

  TreeEngine eng(tree, cards, cpt_pointers(bn.cpts), evidence,
                 Semiring::SumProduct, st, cutset_budget, res.meter);
  eng.run({query});
  const Table& rt = eng.root_table();
  double aux = eng.aux_total();
  double total = 0;
  std::vector<double> dist(cards[query]);
  for (int v = 0; v < cards[query]; ++v) {
    dist[v] = rt[v] * aux;
    total += dist[v];
  }
  res.p_evidence = total;
  if (total == 0.0) {
    res.impossible = true;
    return res;
  }
  for (double& d : dist) d /= total;
  res.posterior = std::move(dist);
  return res;
}

MpeResult most_probable_explanation(const BeliefNetwork& bn, const JoinTree& tree,
                                    const Evidence& evidence, Strategy st,
                                    int cutset_budget) {
  MpeResult res;
  auto cards = bn.cards();
  TreeEngine eng(tree, cards, cpt_pointers(bn.cpts), evidence,
                 Semiring::MaxProduct, st, cutset_budget, res.meter);
  eng.run({});
  res.probability = eng.root_table()[0] * eng.aux_total();
  res.assignment = eng.decode();
  res.impossible = (res.probability == 0.0);
  return res;
}

double conditioned_network_belief(const BeliefNetwork& bn,
                                  const Evidence& condition, CostMeter& meter) {
  auto cards = bn.cards();
  for (auto [v, val] : condition.items) {
    if (v < 0 || v >= bn.num_vars())
      throw InvalidArgument("conditioned variable out of range");
    if (val < 0 || val >= cards[v])
      throw InvalidArgument("conditioned value out of domain");
  }
  std::vector<Table> restricted;
  restricted.reserve(bn.cpts.size());
  for (const auto& t : bn.cpts)
    restricted.push_back(restrict_table(t, condition.items));

  ClusterProblem cp;
  for (int v = 0; v < bn.num_vars(); ++v)
    if (!condition.observes(v)) cp.cluster.push_back(v);
  cp.global_cards = &cards;
  for (const auto& t : restricted) cp.functions.push_back(&t);

  // Empty cutset: the whole conditioned graph must already be a forest, and
  // eliminating everything leaf-by-leaf keeps scratch tables at arity <= 1.
  CycleCutset none;
  none.exact = true;
  Table total = cluster_message_cutset(cp, none, Semiring::SumProduct, meter,
                                       nullptr, /*persist_output=*/false);
  return total[0];
}

}  // namespace treespan
