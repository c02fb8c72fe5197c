#include "treespan/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>

namespace treespan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double bottom(Semiring sr) {
  return semiring_marg(sr) == Marg::Sum ? 0.0 : kNegInf;
}

std::int64_t index_in_scope(const std::vector<int>& scope,
                            const std::vector<int>& global_cards,
                            const std::vector<int>& full) {
  std::int64_t idx = 0;
  for (int v : scope) idx = idx * global_cards[v] + full[v];
  return idx;
}

// Per-step argmax record for decoding maximizing messages.
struct ElimRecord {
  int var;
  std::vector<int> scope;  // of the elimination result
  std::vector<int> best;   // argmax of var per result cell
};

// Fill `full` positions of eliminated variables by walking records backward
// (a record's scope only mentions separator vars and later-eliminated vars).
void decode_records(const std::vector<ElimRecord>& records,
                    const std::vector<int>& global_cards,
                    std::vector<int>& full) {
  for (auto it = records.rbegin(); it != records.rend(); ++it)
    full[it->var] = it->best[index_in_scope(it->scope, global_cards, full)];
}

// Owned scratch tables plus the live working set (inputs + intermediates).
struct WorkingSet {
  std::vector<const Table*> live;
  std::vector<std::unique_ptr<Table>> pool;
  long long pooled_cells = 0;

  void adopt(Table&& t, CostMeter& meter) {
    pool.push_back(std::make_unique<Table>(std::move(t)));
    meter.alloc_scratch(pool.back()->size(), pool.back()->arity());
    pooled_cells += pool.back()->size();
    live.push_back(pool.back().get());
  }
  // Restricted copies of input functions: owned for lifetime, but not
  // metered (they stand in for the inputs, which are never counted).
  void adopt_input(Table&& t) {
    pool.push_back(std::make_unique<Table>(std::move(t)));
    live.push_back(pool.back().get());
  }
  std::vector<const Table*> take_bucket(int var) {
    std::vector<const Table*> bucket;
    std::vector<const Table*> rest;
    for (const Table* t : live)
      (t->has_var(var) ? bucket : rest).push_back(t);
    live = std::move(rest);
    return bucket;
  }
  void release(CostMeter& meter) { meter.free_scratch(pooled_cells); }
};

// Eliminate one variable out of the working set; handles variables that no
// live function mentions (their marginal is a domain-size multiplicity under
// summation and a no-op under maximization).
void eliminate_working(WorkingSet& ws, int var,
                       const std::vector<int>& global_cards, Combine comb,
                       Marg marg, CostMeter& meter,
                       std::vector<ElimRecord>* records) {
  auto bucket = ws.take_bucket(var);
  if (bucket.empty()) {
    if (marg == Marg::Sum)
      ws.adopt(Table::scalar(global_cards[var]), meter);
    if (records) records->push_back({var, {}, {0}});
    return;
  }
  std::vector<int> argmax;
  Table res = eliminate_var(bucket, var, global_cards, comb, marg, meter,
                            records ? &argmax : nullptr);
  if (records) records->push_back({var, res.scope(), std::move(argmax)});
  ws.adopt(std::move(res), meter);
}

// Greedy min-fill order over `elim_vars` on the interaction graph of the
// scopes (ties: fewer fill edges, then lower degree, then smaller id).
std::vector<int> internal_elim_order(const std::vector<int>& elim_vars,
                                     const std::vector<const Table*>& functions,
                                     int n) {
  std::vector<std::set<int>> adj(n);
  for (const Table* f : functions) {
    const auto& sc = f->scope();
    for (size_t i = 0; i < sc.size(); ++i)
      for (size_t j = i + 1; j < sc.size(); ++j) {
        adj[sc[i]].insert(sc[j]);
        adj[sc[j]].insert(sc[i]);
      }
  }
  std::set<int> remaining(elim_vars.begin(), elim_vars.end());
  std::vector<int> order;
  while (!remaining.empty()) {
    int best = -1;
    long long best_fill = 0, best_deg = 0;
    for (int v : remaining) {
      std::vector<int> nb(adj[v].begin(), adj[v].end());
      long long fill = 0;
      for (size_t i = 0; i < nb.size(); ++i)
        for (size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]].count(nb[j])) ++fill;
      long long deg = static_cast<long long>(nb.size());
      if (best == -1 || fill < best_fill ||
          (fill == best_fill && (deg < best_deg))) {
        best = v;
        best_fill = fill;
        best_deg = deg;
      }
    }
    std::vector<int> nb(adj[best].begin(), adj[best].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (int w : nb) adj[w].erase(best);
    adj[best].clear();
    remaining.erase(best);
    order.push_back(best);
  }
  return order;
}

}  // namespace

void ClusterProblem::check() const {
  if (!global_cards) throw InvalidArgument("cluster problem without cards");
  if (!std::is_sorted(cluster.begin(), cluster.end()) ||
      std::adjacent_find(cluster.begin(), cluster.end()) != cluster.end())
    throw InvalidArgument("cluster must be a sorted set");
  if (!std::includes(cluster.begin(), cluster.end(), separator.begin(),
                     separator.end()))
    throw InvalidArgument("separator must be a subset of the cluster");
  for (int v : cluster)
    if (v < 0 || v >= static_cast<int>(global_cards->size()))
      throw InvalidArgument("cluster variable out of range");
  for (const Table* f : functions)
    if (!std::includes(cluster.begin(), cluster.end(), f->scope().begin(),
                       f->scope().end()))
      throw InvalidArgument("function scope exceeds its cluster");
}

std::vector<std::vector<int>> assign_functions(
    const std::vector<std::vector<int>>& clusters,
    const std::vector<std::vector<int>>& scopes) {
  std::vector<std::vector<int>> out(clusters.size());
  for (int s = 0; s < static_cast<int>(scopes.size()); ++s) {
    std::vector<int> sc = scopes[s];
    std::sort(sc.begin(), sc.end());
    int home = -1;
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
      if (std::includes(clusters[c].begin(), clusters[c].end(), sc.begin(),
                        sc.end())) {
        home = c;
        break;
      }
    if (home < 0) {
      std::string msg = "no cluster covers function scope {";
      for (size_t i = 0; i < sc.size(); ++i)
        msg += (i ? "," : "") + std::to_string(sc[i]);
      throw InvalidArgument(msg + "}");
    }
    out[home].push_back(s);
  }
  return out;
}

UndirectedGraph interaction_graph(const ClusterProblem& cp) {
  std::vector<std::vector<int>> scopes;
  for (const Table* f : cp.functions) scopes.push_back(f->scope());
  return primal_graph(static_cast<int>(cp.global_cards->size()), scopes);
}

// ---------------------------------------------------------------------------
// Elimination strategy

Table cluster_message_elimination(const ClusterProblem& cp, Semiring sr,
                                  CostMeter& meter, MessageWitness* witness,
                                  bool persist_output) {
  cp.check();
  const auto& cards = *cp.global_cards;
  Combine comb = semiring_combine(sr);
  Marg marg = semiring_marg(sr);
  std::vector<int> elim_vars = scope_minus(cp.cluster, cp.separator);

  WorkingSet ws;
  ws.live = cp.functions;
  std::vector<ElimRecord> records;
  std::vector<ElimRecord>* rec = (marg == Marg::Max) ? &records : nullptr;
  for (int v : internal_elim_order(elim_vars, cp.functions,
                                   static_cast<int>(cards.size())))
    eliminate_working(ws, v, cards, comb, marg, meter, rec);

  Table msg = combine_onto(ws.live, cp.separator, cards, comb, meter);
  if (persist_output) meter.alloc_persistent(msg.size());
  ws.release(meter);

  if (witness && marg == Marg::Max) {
    witness->elim_vars = elim_vars;
    witness->values.assign(msg.size(), {});
    std::vector<int> full(cards.size(), 0);
    Odometer odo(cp.separator, cards);
    for (std::int64_t cell = 0; !odo.done(); odo.next(), ++cell) {
      odo.store(full);
      decode_records(records, cards, full);
      std::vector<int> vals(elim_vars.size());
      for (size_t i = 0; i < elim_vars.size(); ++i) vals[i] = full[elim_vars[i]];
      witness->values[cell] = std::move(vals);
    }
  }
  return msg;
}

// ---------------------------------------------------------------------------
// Brute-force strategy

Table cluster_message_brute_force(const ClusterProblem& cp, Semiring sr,
                                  CostMeter& meter, MessageWitness* witness,
                                  bool persist_output) {
  cp.check();
  const auto& cards = *cp.global_cards;
  Combine comb = semiring_combine(sr);
  Marg marg = semiring_marg(sr);
  std::vector<int> elim_vars = scope_minus(cp.cluster, cp.separator);

  Table out = Table::filled(cp.separator, cards, bottom(sr));
  if (persist_output) meter.alloc_persistent(out.size());
  if (witness && marg == Marg::Max) {
    witness->elim_vars = elim_vars;
    witness->values.assign(out.size(), std::vector<int>(elim_vars.size(), 0));
  }

  meter.alloc_scratch(1, 0);  // the single running cell
  std::vector<int> full(cards.size(), 0);
  Odometer odo(cp.cluster, cards);
  for (; !odo.done(); odo.next()) {
    odo.store(full);
    double val = combine_identity(comb);
    for (const Table* f : cp.functions)
      val = apply_combine(comb, val, f->at(full));
    meter.op(static_cast<long long>(cp.functions.size()) + 1);
    std::int64_t cell = out.index_of(full);
    if (marg == Marg::Sum) {
      out[cell] += val;
    } else if (val > out[cell]) {
      out[cell] = val;
      if (witness)
        for (size_t i = 0; i < elim_vars.size(); ++i)
          witness->values[cell][i] = full[elim_vars[i]];
    }
  }
  meter.free_scratch(1);
  return out;
}

// ---------------------------------------------------------------------------
// Cutset-conditioning strategy

Table cluster_message_cutset(const ClusterProblem& cp, const CycleCutset& cut,
                             Semiring sr, CostMeter& meter,
                             MessageWitness* witness, bool persist_output) {
  cp.check();
  const auto& cards = *cp.global_cards;
  int n = static_cast<int>(cards.size());
  Combine comb = semiring_combine(sr);
  Marg marg = semiring_marg(sr);

  for (int v : cut.vertices)
    if (!std::binary_search(cp.cluster.begin(), cp.cluster.end(), v))
      throw InvalidArgument("cutset vertex " + std::to_string(v) +
                            " is not in the cluster");

  // The conditioned interaction graph must be a forest.
  std::vector<int> residual = scope_minus(cp.cluster, cut.vertices);
  {
    std::set<std::pair<int, int>> edges;
    for (const Table* f : cp.functions) {
      std::vector<int> sc = scope_minus(f->scope(), cut.vertices);
      for (size_t i = 0; i < sc.size(); ++i)
        for (size_t j = i + 1; j < sc.size(); ++j)
          edges.insert({sc[i], sc[j]});
    }
    UndirectedGraph rg(n, {edges.begin(), edges.end()});
    if (auto cyc = find_undirected_cycle(rg)) {
      std::string msg = "cutset leaves a residual cycle:";
      for (int v : *cyc) msg += " " + std::to_string(v);
      throw InvalidArgument(msg);
    }
  }

  std::vector<int> kept = scope_minus(cp.separator, cut.vertices);
  std::vector<int> elim =
      scope_minus(scope_minus(cp.cluster, cp.separator), cut.vertices);
  std::vector<int> msg_elim = scope_minus(cp.cluster, cp.separator);

  Table out = Table::filled(cp.separator, cards, bottom(sr));
  if (persist_output) meter.alloc_persistent(out.size());
  if (witness && marg == Marg::Max) {
    witness->elim_vars = msg_elim;
    witness->values.assign(out.size(), std::vector<int>(msg_elim.size(), 0));
  }

  std::vector<int> full(n, 0);
  Odometer gamma(cut.vertices, cards);
  for (; !gamma.done(); gamma.next()) {
    std::vector<std::pair<int, int>> fixed;
    for (size_t i = 0; i < cut.vertices.size(); ++i)
      fixed.push_back({cut.vertices[i], gamma.values()[i]});

    WorkingSet ws;
    for (const Table* f : cp.functions) {
      Table rt = restrict_table(*f, fixed);
      if (rt.arity() > 2)
        throw std::logic_error(
            "conditioned function arity exceeds 2 despite forest residual");
      ws.adopt_input(std::move(rt));
    }

    // Leaf-strip / path-contract the forest; defer any variable whose
    // interaction degree exceeds 2 (a star of kept variables) to the
    // accumulation sweep.
    std::vector<ElimRecord> records;
    std::vector<ElimRecord>* rec = (marg == Marg::Max) ? &records : nullptr;
    std::vector<int> remaining = elim, deferred;
    while (!remaining.empty()) {
      int best = -1;
      size_t best_deg = 0;
      for (int v : remaining) {
        std::set<int> nbrs;
        for (const Table* t : ws.live)
          if (t->has_var(v))
            for (int u : t->scope())
              if (u != v) nbrs.insert(u);
        if (best == -1 || nbrs.size() < best_deg) {
          best = v;
          best_deg = nbrs.size();
        }
      }
      if (best_deg > 2) {
        deferred = remaining;
        break;
      }
      eliminate_working(ws, best, cards, comb, marg, meter, rec);
      remaining.erase(std::find(remaining.begin(), remaining.end(), best));
      if (!ws.pool.empty() && ws.pool.back()->arity() > 2)
        throw std::logic_error("tree elimination produced arity > 2");
    }

    // Accumulate into the message over kept coordinates (cutset coordinates
    // inside the separator are pinned by gamma).
    gamma.store(full);
    Odometer ko(kept, cards);
    for (; !ko.done(); ko.next()) {
      ko.store(full);
      std::int64_t cell = out.index_of(full);
      Odometer dodo(deferred, cards);
      for (; !dodo.done(); dodo.next()) {
        dodo.store(full);
        double val = combine_identity(comb);
        for (const Table* t : ws.live) val = apply_combine(comb, val, t->at(full));
        meter.op(static_cast<long long>(ws.live.size()) + 1);
        if (marg == Marg::Sum) {
          out[cell] += val;
        } else if (val > out[cell]) {
          out[cell] = val;
          if (witness) {
            decode_records(records, cards, full);
            for (size_t i = 0; i < msg_elim.size(); ++i)
              witness->values[cell][i] = full[msg_elim[i]];
          }
        }
      }
    }
    ws.release(meter);
  }
  return out;
}

Table cluster_message_cutset(const ClusterProblem& cp, Semiring sr,
                             CostMeter& meter, MessageWitness* witness,
                             int budget, bool persist_output) {
  CycleCutset cut = cycle_cutset(interaction_graph(cp), CutsetMode::Exact, budget);
  return cluster_message_cutset(cp, cut, sr, meter, witness, persist_output);
}

}  // namespace treespan
