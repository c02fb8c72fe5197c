#include "treespan/table.hpp"

#include <algorithm>
#include <cmath>

namespace treespan {

namespace {

std::int64_t cell_count(const std::vector<int>& cards) {
  std::int64_t n = 1;
  for (int c : cards) {
    if (c <= 0) throw InvalidArgument("domain size must be positive");
    n *= c;
  }
  return n;
}

}  // namespace

Table Table::scalar(double v) {
  Table t;
  t.values_[0] = v;
  return t;
}

Table::Table(std::vector<int> scope, std::vector<int> cards,
             std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size())
    throw InvalidArgument("scope/cards size mismatch");
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end())
    throw InvalidArgument("table scope must be a sorted set");
  if (static_cast<std::int64_t>(values_.size()) != cell_count(cards_))
    throw InvalidArgument("table value count does not match scope cards");
}

Table::Table(std::vector<int> scope, std::vector<int> cards, double fill)
    : scope_(std::move(scope)), cards_(std::move(cards)) {
  if (scope_.size() != cards_.size())
    throw InvalidArgument("scope/cards size mismatch");
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end())
    throw InvalidArgument("table scope must be a sorted set");
  values_.assign(cell_count(cards_), fill);
}

Table Table::filled(std::vector<int> scope, const std::vector<int>& global_cards,
                    double fill) {
  std::vector<int> cards;
  cards.reserve(scope.size());
  for (int v : scope) {
    if (v < 0 || v >= static_cast<int>(global_cards.size()))
      throw InvalidArgument("scope variable out of range");
    cards.push_back(global_cards[v]);
  }
  return Table(std::move(scope), std::move(cards), fill);
}

std::int64_t Table::index_of(const std::vector<int>& full_assignment) const {
  std::int64_t idx = 0;
  for (size_t i = 0; i < scope_.size(); ++i) {
    int v = scope_[i];
    int val = full_assignment[v];
    idx = idx * cards_[i] + val;
  }
  return idx;
}

std::vector<int> Table::local_assignment(std::int64_t index) const {
  std::vector<int> out(scope_.size());
  for (int i = static_cast<int>(scope_.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % cards_[i]);
    index /= cards_[i];
  }
  return out;
}

bool Table::has_var(int v) const {
  return std::binary_search(scope_.begin(), scope_.end(), v);
}

// ---------------------------------------------------------------------------
// Odometer

Odometer::Odometer(std::vector<int> vars, const std::vector<int>& global_cards)
    : vars_(std::move(vars)) {
  cards_.reserve(vars_.size());
  for (int v : vars_) {
    if (v < 0 || v >= static_cast<int>(global_cards.size()))
      throw InvalidArgument("odometer variable out of range");
    cards_.push_back(global_cards[v]);
    count_ *= global_cards[v];
  }
  values_.assign(vars_.size(), 0);
}

void Odometer::next() {
  for (int i = static_cast<int>(vars_.size()) - 1; i >= 0; --i) {
    if (++values_[i] < cards_[i]) return;
    values_[i] = 0;
  }
  done_ = true;  // wrapped around
}

void Odometer::reset() {
  std::fill(values_.begin(), values_.end(), 0);
  done_ = false;
}

void Odometer::store(std::vector<int>& full) const {
  for (size_t i = 0; i < vars_.size(); ++i) full[vars_[i]] = values_[i];
}

// ---------------------------------------------------------------------------
// Kernels

std::vector<int> scope_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> scope_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

Table eliminate_var(const std::vector<const Table*>& factors, int var,
                    const std::vector<int>& global_cards, Combine comb,
                    Marg marg, CostMeter& meter, std::vector<int>* argmax) {
  std::vector<int> result_scope;
  for (const Table* f : factors) result_scope = scope_union(result_scope, f->scope());
  if (!std::binary_search(result_scope.begin(), result_scope.end(), var))
    throw InvalidArgument("eliminate_var: no factor mentions the variable");
  result_scope = scope_minus(result_scope, {var});

  Table out = Table::filled(result_scope, global_cards, 0.0);
  if (argmax) argmax->assign(out.size(), 0);

  int kv = global_cards[var];
  std::vector<int> full(global_cards.size(), 0);
  Odometer odo(result_scope, global_cards);
  for (std::int64_t cell = 0; !odo.done(); odo.next(), ++cell) {
    odo.store(full);
    double acc = 0.0;
    int best = 0;
    for (int val = 0; val < kv; ++val) {
      full[var] = val;
      double prod = combine_identity(comb);
      for (const Table* f : factors) prod = apply_combine(comb, prod, f->at(full));
      meter.op(static_cast<long long>(factors.size()) + 1);
      if (marg == Marg::Sum) {
        acc += prod;
      } else if (val == 0 || prod > acc) {
        acc = prod;
        best = val;
      }
    }
    out[cell] = acc;
    if (argmax) (*argmax)[cell] = best;
  }
  return out;
}

Table combine_onto(const std::vector<const Table*>& factors,
                   const std::vector<int>& target_scope,
                   const std::vector<int>& global_cards, Combine comb,
                   CostMeter& meter) {
  for (const Table* f : factors)
    if (!std::includes(target_scope.begin(), target_scope.end(),
                       f->scope().begin(), f->scope().end()))
      throw InvalidArgument("combine_onto: factor scope exceeds target scope");
  Table out = Table::filled(target_scope, global_cards, 0.0);
  std::vector<int> full(global_cards.size(), 0);
  Odometer odo(target_scope, global_cards);
  for (std::int64_t cell = 0; !odo.done(); odo.next(), ++cell) {
    odo.store(full);
    double prod = combine_identity(comb);
    for (const Table* f : factors) prod = apply_combine(comb, prod, f->at(full));
    meter.op(static_cast<long long>(factors.size()) + 1);
    out[cell] = prod;
  }
  return out;
}

Table restrict_table(const Table& t,
                     const std::vector<std::pair<int, int>>& assignment) {
  std::vector<int> fixed;  // positions in t.scope()
  for (auto [v, val] : assignment) {
    (void)val;
    if (t.has_var(v)) fixed.push_back(v);
  }
  if (fixed.empty()) return t;
  std::vector<int> new_scope = scope_minus(t.scope(), fixed);

  // Build the global assignment with the fixed coordinates set once.
  int max_var = t.scope().empty() ? 0 : t.scope().back() + 1;
  std::vector<int> full(max_var + 1, 0);
  std::vector<int> global_cards(max_var + 1, 1);
  for (size_t i = 0; i < t.scope().size(); ++i)
    global_cards[t.scope()[i]] = t.cards()[i];
  for (auto [v, val] : assignment)
    if (t.has_var(v)) {
      if (val < 0 || val >= global_cards[v])
        throw InvalidArgument("restriction value out of domain");
      full[v] = val;
    }

  std::vector<int> new_cards;
  for (int v : new_scope) new_cards.push_back(global_cards[v]);
  Table out(new_scope, new_cards, 0.0);
  Odometer odo(new_scope, global_cards);
  for (std::int64_t cell = 0; !odo.done(); odo.next(), ++cell) {
    odo.store(full);
    out[cell] = t.at(full);
  }
  return out;
}

namespace {

// Per-variable domain sizes covering every scope variable of the given
// tables; shared variables must agree.
std::vector<int> merged_cards(const std::vector<const Table*>& tables) {
  int max_var = -1;
  for (const Table* t : tables)
    if (!t->scope().empty()) max_var = std::max(max_var, t->scope().back());
  std::vector<int> cards(max_var + 1, 1);
  for (const Table* t : tables)
    for (size_t i = 0; i < t->scope().size(); ++i) {
      int v = t->scope()[i];
      if (cards[v] != 1 && cards[v] != t->cards()[i])
        throw InvalidArgument("domain size mismatch on shared variable " +
                              std::to_string(v));
      cards[v] = t->cards()[i];
    }
  return cards;
}

}  // namespace

Table multiply(const Table& a, const Table& b) {
  std::vector<int> cards = merged_cards({&a, &b});
  std::vector<int> scope = scope_union(a.scope(), b.scope());
  Table out = Table::filled(scope, cards, 0.0);
  std::vector<int> full(cards.size(), 0);
  Odometer odo(scope, cards);
  for (std::int64_t cell = 0; !odo.done(); odo.next(), ++cell) {
    odo.store(full);
    out[cell] = a.at(full) * b.at(full);
  }
  return out;
}

namespace {

Table marginalize_out(const Table& t, const std::vector<int>& vars, Marg marg,
                      std::vector<std::vector<int>>* witness) {
  for (int v : vars)
    if (!t.has_var(v))
      throw InvalidArgument("marginalized variable " + std::to_string(v) +
                            " not in the table scope");
  std::vector<int> cards = merged_cards({&t});
  std::vector<int> removed;  // sorted: vars is a subset of the sorted scope
  for (int v : t.scope())
    if (std::find(vars.begin(), vars.end(), v) != vars.end()) removed.push_back(v);
  std::vector<int> remaining = scope_minus(t.scope(), removed);

  Table out = Table::filled(remaining, cards, 0.0);
  if (witness) witness->assign(out.size(), {});
  std::vector<int> full(cards.size(), 0);
  Odometer rem(remaining, cards);
  for (std::int64_t cell = 0; !rem.done(); rem.next(), ++cell) {
    rem.store(full);
    double acc = 0.0;
    bool first = true;
    Odometer sub(removed, cards);
    for (; !sub.done(); sub.next()) {
      sub.store(full);
      double v = t.at(full);
      if (marg == Marg::Sum) {
        acc += v;
      } else if (first || v > acc) {
        acc = v;
        if (witness) (*witness)[cell] = sub.values();
      }
      first = false;
    }
    out[cell] = acc;
  }
  return out;
}

}  // namespace

Table sum_out(const Table& t, const std::vector<int>& vars) {
  return marginalize_out(t, vars, Marg::Sum, nullptr);
}

Table max_out(const Table& t, const std::vector<int>& vars,
              std::vector<std::vector<int>>* witness) {
  return marginalize_out(t, vars, Marg::Max, witness);
}

}  // namespace treespan
