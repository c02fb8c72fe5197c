#pragma once

#include <algorithm>
#include <cstdint>

namespace treespan {

// Instrumentation for the time/space behavior of a query.
//
// Accounting policy (the tests rely on it):
//   * cell_ops counts elementary table-cell operations: one lookup/multiply/
//     add/compare per factor per visited cell.
//   * persistent cells = separator messages, live until the query finishes.
//   * scratch cells = strategy-internal intermediate tables, freed when the
//     owning cluster finishes; the brute-force strategy uses a single
//     running cell (arity 0).
//   * peak_total_cells = max over time of persistent + scratch.
//   * NOT counted: the input tables (and their evidence-restricted copies),
//     the final root output, and witness/backpointer bookkeeping for
//     explanation decoding.  They are the problem statement and the answer,
//     not working space.
//   * node_visits counts constraint-search nodes (one per attempted value
//     assignment during backtracking).
struct CostMeter {
  long long cell_ops = 0;
  long long node_visits = 0;

  long long scratch_cells = 0;
  long long peak_scratch_cells = 0;
  int peak_scratch_arity = 0;

  long long persistent_cells = 0;
  long long peak_persistent_cells = 0;

  long long peak_total_cells = 0;

  void op(long long n = 1) { cell_ops += n; }
  void visit(long long n = 1) { node_visits += n; }

  void alloc_scratch(long long cells, int arity) {
    scratch_cells += cells;
    peak_scratch_cells = std::max(peak_scratch_cells, scratch_cells);
    peak_scratch_arity = std::max(peak_scratch_arity, arity);
    bump_total();
  }
  void free_scratch(long long cells) { scratch_cells -= cells; }

  void alloc_persistent(long long cells) {
    persistent_cells += cells;
    peak_persistent_cells = std::max(peak_persistent_cells, persistent_cells);
    bump_total();
  }
  void free_persistent(long long cells) { persistent_cells -= cells; }

 private:
  void bump_total() {
    peak_total_cells =
        std::max(peak_total_cells, scratch_cells + persistent_cells);
  }
};

}  // namespace treespan
