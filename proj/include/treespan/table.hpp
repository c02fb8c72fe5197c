#pragma once

#include <cstdint>
#include <vector>

#include "treespan/common.hpp"
#include "treespan/meter.hpp"

namespace treespan {

// Dense real-valued function over a set of discrete variables.
//
// Scope is a sorted list of global variable ids; cell layout is mixed-radix
// with the LAST scope variable fastest.  The empty scope is a single cell
// (a scalar).  Tables are the common currency of every engine here:
// probabilities, 0/1 constraint indicators, and additive criterion
// components (which may hold -infinity for forbidden tuples).
class Table {
 public:
  Table() : values_(1, 1.0) {}  // scalar 1
  static Table scalar(double v);
  // cards[i] = domain size of scope[i]; values in canonical layout.
  Table(std::vector<int> scope, std::vector<int> cards,
        std::vector<double> values);
  // Zero-filled (or fill-valued) table.
  Table(std::vector<int> scope, std::vector<int> cards, double fill = 0.0);
  // Convenience: per-scope cards looked up from a global card vector.
  static Table filled(std::vector<int> scope,
                      const std::vector<int>& global_cards, double fill);

  const std::vector<int>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  int arity() const { return static_cast<int>(scope_.size()); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double& operator[](std::int64_t i) { return values_[i]; }
  double operator[](std::int64_t i) const { return values_[i]; }

  // Index of a cell given values for ALL variables (indexed by global id);
  // only scope positions are read.
  std::int64_t index_of(const std::vector<int>& full_assignment) const;
  double at(const std::vector<int>& full_assignment) const {
    return values_[index_of(full_assignment)];
  }

  // Decode cell index -> local values (scope order).
  std::vector<int> local_assignment(std::int64_t index) const;

  bool has_var(int v) const;

 private:
  std::vector<int> scope_;   // sorted, unique
  std::vector<int> cards_;   // parallel to scope_
  std::vector<double> values_;
};

// Odometer over an explicit variable list (not necessarily a table scope);
// runs the LAST variable fastest to match table layout.
class Odometer {
 public:
  Odometer(std::vector<int> vars, const std::vector<int>& global_cards);
  const std::vector<int>& vars() const { return vars_; }
  std::int64_t count() const { return count_; }
  // Current values parallel to vars().
  const std::vector<int>& values() const { return values_; }
  bool done() const { return done_; }
  void next();
  void reset();
  // Writes current values into a global assignment vector.
  void store(std::vector<int>& full) const;

 private:
  std::vector<int> vars_, cards_, values_;
  std::int64_t count_ = 1;
  bool done_ = false;
};

enum class Combine { Multiply, Add };   // product vs additive criteria
enum class Marg { Sum, Max };

inline double combine_identity(Combine c) {
  return c == Combine::Multiply ? 1.0 : 0.0;
}
inline double apply_combine(Combine c, double a, double b) {
  return c == Combine::Multiply ? a * b : a + b;
}

// Eliminate `var` from the combination of `factors`: result scope is the
// union of factor scopes minus var.  Factors not mentioning var must NOT be
// passed (caller partitions buckets).  With Marg::Max, `argmax` (if non-null)
// receives, per result cell, the smallest value of var attaining the max.
// Cost: result_cells * card(var) * |factors| cell ops.
Table eliminate_var(const std::vector<const Table*>& factors, int var,
                    const std::vector<int>& global_cards, Combine comb,
                    Marg marg, CostMeter& meter,
                    std::vector<int>* argmax = nullptr);

// Combine factors onto exactly `target_scope` (every factor scope must be a
// subset).  Cost: target_cells * |factors| ops.
Table combine_onto(const std::vector<const Table*>& factors,
                   const std::vector<int>& target_scope,
                   const std::vector<int>& global_cards, Combine comb,
                   CostMeter& meter);

// Drop the variables fixed by `assignment` (var -> value pairs, sorted by
// var): result scope = scope minus assigned vars, values picked at the fixed
// coordinates.  Variables not in the scope are ignored.  Not metered: the
// restricted inputs replace the originals.
Table restrict_table(const Table& t,
                     const std::vector<std::pair<int, int>>& assignment);

// Scope union helper (sorted inputs).
std::vector<int> scope_union(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> scope_minus(const std::vector<int>& a, const std::vector<int>& b);

// --- Standalone table algebra (pure, unmetered) -----------------------------
// Pointwise product over the union scope.  Shared variables must agree on
// domain size (InvalidArgument otherwise).
Table multiply(const Table& a, const Table& b);

// Marginalize `vars` (a subset of the scope) out of t by summation.
Table sum_out(const Table& t, const std::vector<int>& vars);

// Marginalize by maximization; if `witness` is non-null it receives, per
// surviving cell, the lexicographically smallest maximizing assignment of
// the removed variables (in ascending id order).
Table max_out(const Table& t, const std::vector<int>& vars,
              std::vector<std::vector<int>>* witness = nullptr);

}  // namespace treespan
