#pragma once

#include <map>
#include <vector>

#include "treespan/cluster.hpp"
#include "treespan/jointree.hpp"
#include "treespan/models.hpp"

namespace treespan {

enum class Strategy { Elimination, BruteForce, Cutset };

// Generic single-pass propagation toward per-component roots.  Construction
// restricts the input functions by `fixed` (evidence / conditioned values);
// run() sends one message per edge, leaves to roots.  The component whose
// root covers `keep` exposes a table over `keep`; every other component
// contributes a scalar, folded via the semiring's combine.
class TreeEngine {
 public:
  TreeEngine(const JoinTree& tree, const std::vector<int>& global_cards,
             const std::vector<const Table*>& functions, const Evidence& fixed,
             Semiring sr, Strategy st, int cutset_budget, CostMeter& meter);

  // keep must be active (unfixed) and contained in one original cluster.
  void run(const std::vector<int>& keep);

  const Table& root_table() const { return root_table_; }
  // Combine of the other components' root scalars (semiring combine
  // identity when there is a single component).
  double aux_total() const { return aux_total_; }

  // Full assignment over all variables: fixed vars take their fixed values,
  // active vars are decoded from the witnesses.  Maximizing semirings with
  // empty keep only.
  std::vector<int> decode() const;

  const std::vector<int>& active_cluster(int i) const { return active_clusters_[i]; }

 private:
  Table send(int cluster, const std::vector<int>& sep, MessageWitness* wit,
             bool persist);

  const JoinTree& tree_;
  std::vector<int> cards_;
  Evidence fixed_;
  Semiring sr_;
  Strategy strategy_;
  int budget_;
  CostMeter& meter_;

  std::vector<Table> restricted_;               // owned restricted inputs
  std::vector<std::vector<int>> assigned_;      // cluster -> function indices
  std::vector<std::vector<int>> active_clusters_;
  std::vector<std::vector<int>> components_;    // cluster indices per component
  std::vector<int> parent_;                     // -1 for roots
  std::vector<int> parent_edge_;                // edge index toward parent
  std::vector<int> order_;                      // leaves-to-roots processing order

  std::map<int, Table> messages_;               // cluster -> message to parent
  std::map<int, MessageWitness> witnesses_;     // cluster -> witness (max only)
  Table root_table_;
  double aux_total_ = 1.0;
  std::vector<int> keep_;
  bool ran_ = false;
};

struct BeliefResult {
  bool impossible = false;
  std::vector<double> posterior;  // per query value; empty when impossible
  double p_evidence = 0.0;
  CostMeter meter;
};

struct MpeResult {
  bool impossible = false;        // highest probability is exactly zero
  double probability = 0.0;
  std::vector<int> assignment;    // full assignment, evidence values included
  CostMeter meter;
};

// Posterior of `query` given evidence, running on `tree` with the chosen
// per-cluster strategy.  Querying an observed variable yields a point mass.
BeliefResult belief(const BeliefNetwork& bn, const JoinTree& tree, int query,
                    const Evidence& evidence, Strategy st,
                    int cutset_budget = kDefaultCutsetBudget);

// Most probable explanation (max-product) under evidence.
MpeResult most_probable_explanation(const BeliefNetwork& bn, const JoinTree& tree,
                                    const Evidence& evidence, Strategy st,
                                    int cutset_budget = kDefaultCutsetBudget);

// P(condition, evidence): restrict every CPT by the given values; the
// remaining interaction graph must be a forest (throws InvalidArgument with
// a cycle witness otherwise).  Runs in scratch tables of arity <= 1.
double conditioned_network_belief(const BeliefNetwork& bn,
                                  const Evidence& condition, CostMeter& meter);

}  // namespace treespan
