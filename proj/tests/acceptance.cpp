// Acceptance gate: seven end-to-end scenario checks, one PASS/FAIL line
// each.  argv[1] names the corpus directory holding the reference models.
// Exits nonzero if any scenario fails; failure details are listed under the
// verdict line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "treespan/cli.hpp"
#include "treespan/csp.hpp"
#include "treespan/cutset.hpp"
#include "treespan/io.hpp"
#include "treespan/optimize.hpp"
#include "treespan/oracle.hpp"
#include "treespan/propagate.hpp"
#include "treespan/tradeoff.hpp"

using namespace treespan;

namespace {

// The agreement tolerances are part of the library contract; the gate
// assumes exactly these values.
static_assert(kProbTol == 1e-9);
static_assert(kMpeTol == 1e-12);

std::string g_corpus;

std::string slurp(const std::string& name) {
  std::ifstream in(g_corpus + "/" + name, std::ios::binary);
  if (!in.good()) throw Error("cannot read corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Failure collector: keeps the first few detail lines per scenario.
struct Check {
  bool ok = true;
  long long failures = 0;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& detail) {
    if (cond) return;
    ok = false;
    ++failures;
    if (notes.size() < 6) notes.push_back(detail);
  }
  template <typename T>
  void equal(const T& got, const T& want, const std::string& what) {
    std::ostringstream ss;
    if (!(got == want)) {
      ss << what << ": got " << got << ", want " << want;
      expect(false, ss.str());
    }
  }
  void close(double got, double want, double tol, const std::string& what) {
    if (std::abs(got - want) <= tol) return;
    std::ostringstream ss;
    ss.precision(17);
    ss << what << ": got " << got << ", want " << want << " (tol " << tol
       << ")";
    expect(false, ss.str());
  }
};

std::string braces(const std::vector<int>& vs) {
  std::string s = "{";
  for (std::size_t i = 0; i < vs.size(); ++i)
    s += (i ? "," : "") + std::to_string(vs[i]);
  return s + "}";
}

std::vector<JoinTreeLevel> levels_of(const UndirectedGraph& g) {
  return analyze_graph(g, OrderingHeuristic::MinFill).levels;
}

// --------------------------------------------------------------------------
// 1. The eight-variable reference network: moral graph, ordering, cliques,
//    and the merged clusters of every separator-threshold level.

bool scenario_pipeline(Check& c) {
  Model m = parse_model(slurp("eightvar.net"));
  c.equal(static_cast<int>(m.kind), static_cast<int>(ModelKind::Belief),
          "model kind");
  UndirectedGraph moral = m.belief.moral_graph();
  c.equal(moral.num_vertices(), 8, "moral vertices");
  c.equal(moral.num_edges(), 14, "moral edges");

  AnalysisReport rep = analyze_graph(moral, OrderingHeuristic::MinFill);
  c.equal(rep.induced_width, 3, "induced width");
  c.expect(is_zero_fill(moral, rep.ordering),
           "min-fill ordering should add no fill edges");

  std::vector<std::vector<int>> cliques = {
      {0, 1}, {1, 2, 3}, {1, 3, 6}, {3, 4, 5, 6}, {4, 5, 6, 7}};
  c.expect(rep.cliques == cliques, "maximal cliques differ");

  c.equal(static_cast<int>(rep.levels.size()), 3, "level count");
  if (rep.levels.size() == 3) {
    c.equal(rep.levels[0].sep_bound, 3, "level 0 separator bound");
    c.equal(rep.levels[1].sep_bound, 2, "level 1 separator bound");
    c.equal(rep.levels[2].sep_bound, 1, "level 2 separator bound");
    c.expect(rep.levels[0].tree.clusters == cliques,
             "level 0 clusters should be the cliques");
    std::vector<std::vector<int>> t1 = {
        {0, 1}, {1, 2, 3}, {1, 3, 6}, {3, 4, 5, 6, 7}};
    c.expect(rep.levels[1].tree.clusters == t1,
             "level 1 should merge into " + braces(t1.back()));
    std::vector<std::vector<int>> t2 = {{0, 1}, {1, 2, 3, 4, 5, 6, 7}};
    c.expect(rep.levels[2].tree.clusters == t2,
             "level 2 should merge into " + braces(t2.back()));
    for (const JoinTreeLevel& lv : rep.levels) {
      c.equal(lv.tree.max_separator_size(), lv.sep_bound,
              "separator size at its bound");
      lv.tree.validate();
    }
  }

  c.equal(static_cast<int>(rep.tradeoff.size()), 3, "tradeoff rows");
  if (rep.tradeoff.size() == 3) {
    const int want[3][4] = {{4, 3, 4, 3}, {5, 2, 4, 2}, {7, 1, 5, 1}};
    for (int i = 0; i < 3; ++i) {
      c.equal(rep.tradeoff[i].bf_time, want[i][0], "bf time exponent");
      c.equal(rep.tradeoff[i].bf_space, want[i][1], "bf space exponent");
      c.equal(rep.tradeoff[i].cut_time, want[i][2], "cutset time exponent");
      c.equal(rep.tradeoff[i].cut_space, want[i][3], "cutset space exponent");
    }
  }
  return c.ok;
}

// --------------------------------------------------------------------------
// 2. Cycle cutsets of the reference graph and the dominating tradeoff pairs.

bool scenario_cutsets(Check& c) {
  Model m = parse_model(slurp("eightvar.net"));
  UndirectedGraph moral = m.belief.moral_graph();

  CycleCutset whole = cycle_cutset(moral, CutsetMode::Exact);
  c.expect(whole.exact, "whole-graph cutset search must stay exact");
  c.equal(static_cast<int>(whole.vertices.size()), 3, "whole-graph cutset");

  CycleCutset merged =
      cycle_cutset(moral.induced({3, 4, 5, 6, 7}), CutsetMode::Exact);
  c.equal(static_cast<int>(merged.vertices.size()), 2,
          "cutset of the merged five-variable cluster");

  AnalysisReport rep = analyze_graph(moral, OrderingHeuristic::MinFill);
  for (const std::vector<int>& clique : rep.cliques) {
    CycleCutset cut = cycle_cutset(moral.induced(clique), CutsetMode::Exact);
    c.expect(static_cast<int>(cut.vertices.size()) <= 2,
             "clique " + braces(clique) + " cutset exceeds 2");
  }

  std::vector<std::pair<int, int>> dominating = {{4, 2}, {5, 1}};
  c.expect(rep.dominating == dominating,
           "dominating pairs must be exactly (4,2) and (5,1)");
  return c.ok;
}

// --------------------------------------------------------------------------
// 3. Random belief networks: posterior and explanation queries on every
//    level with every strategy, against exhaustive enumeration.

bool scenario_belief(Check& c) {
  gen::Rng rng(7001);
  const std::vector<Strategy> strategies = {
      Strategy::Elimination, Strategy::BruteForce, Strategy::Cutset};
  for (int rep = 0; rep < 200 && c.failures < 50; ++rep) {
    BeliefNetwork bn = gen::random_bn(rng, 10, 3);
    Evidence ev = gen::random_evidence(rng, bn.cards(), 2);
    int query = gen::uniform_int(rng, 0, bn.num_vars() - 1);
    OracleBelief ob = oracle_belief(bn, query, ev);
    OracleMpe om = oracle_mpe(bn, ev);
    std::string tag = " (model " + std::to_string(rep) + ")";

    for (const JoinTreeLevel& lv : levels_of(bn.moral_graph())) {
      for (Strategy st : strategies) {
        BeliefResult rb = belief(bn, lv.tree, query, ev, st);
        c.equal(rb.impossible, ob.impossible, "impossible flag" + tag);
        if (!rb.impossible && !ob.impossible) {
          c.close(rb.p_evidence, ob.p_evidence, kProbTol,
                  "evidence probability" + tag);
          c.equal(rb.posterior.size(), ob.posterior.size(),
                  "posterior length" + tag);
          for (std::size_t i = 0; i < rb.posterior.size(); ++i)
            c.close(rb.posterior[i], ob.posterior[i], kProbTol,
                    "posterior" + tag);
        }

        MpeResult rm = most_probable_explanation(bn, lv.tree, ev, st);
        c.equal(rm.impossible, om.impossible, "mpe impossible flag" + tag);
        if (!rm.impossible && !om.impossible) {
          c.close(rm.probability, om.probability, kMpeTol,
                  "mpe probability" + tag);
          c.close(bn.joint_probability(rm.assignment), rm.probability, kMpeTol,
                  "mpe assignment must achieve its probability" + tag);
          for (const auto& [v, val] : ev.items)
            c.expect(rm.assignment[v] == val,
                     "mpe assignment must honor evidence" + tag);
        }
      }
    }
  }
  return c.ok;
}

// --------------------------------------------------------------------------
// 4. Space accounting: whole-cluster enumeration keeps every persistent
//    table within the separator bound (at most (#separators + 1) * k^s cells
//    live at once), and conditioning never builds a scratch table past
//    arity 2.

bool scenario_space(Check& c) {
  gen::Rng rng(7002);
  for (int rep = 0; rep < 100 && c.failures < 50; ++rep) {
    BeliefNetwork bn = gen::random_bn(rng, 10, 3);
    Evidence ev = gen::random_evidence(rng, bn.cards(), 2);
    int kmax = 0;
    for (int k : bn.cards()) kmax = std::max(kmax, k);
    std::string tag = " (model " + std::to_string(rep) + ")";

    for (const JoinTreeLevel& lv : levels_of(bn.moral_graph())) {
      double cap = (static_cast<double>(lv.tree.edges.size()) + 1.0) *
                   std::pow(kmax, lv.sep_bound);
      BeliefResult bf = belief(bn, lv.tree, 0, ev, Strategy::BruteForce);
      c.expect(static_cast<double>(bf.meter.peak_total_cells) <= cap,
               "enumeration exceeded the separator-space cap" + tag);
      c.expect(bf.meter.peak_scratch_arity == 0,
               "enumeration must run in a single running cell" + tag);

      MpeResult mf =
          most_probable_explanation(bn, lv.tree, ev, Strategy::BruteForce);
      c.expect(static_cast<double>(mf.meter.peak_total_cells) <= cap,
               "explanation run exceeded the separator-space cap" + tag);

      BeliefResult cut = belief(bn, lv.tree, 0, ev, Strategy::Cutset);
      c.expect(cut.meter.peak_scratch_arity <= 2,
               "conditioning scratch arity exceeded 2" + tag);
      MpeResult mcut =
          most_probable_explanation(bn, lv.tree, ev, Strategy::Cutset);
      c.expect(mcut.meter.peak_scratch_arity <= 2,
               "conditioning scratch arity exceeded 2 on explanation" + tag);
    }
  }
  return c.ok;
}

// --------------------------------------------------------------------------
// 5. Random constraint networks: consistency, counts, and backtrack-free
//    extraction on every level with both strategies.

bool scenario_csp(Check& c) {
  gen::Rng rng(7003);
  const std::vector<CspStrategy> strategies = {CspStrategy::Backtracking,
                                               CspStrategy::Cutset};
  for (int rep = 0; rep < 200 && c.failures < 50; ++rep) {
    double tightness = 0.1 + 0.8 * gen::uniform_real(rng, 0.0, 1.0);
    ConstraintNetwork cn = gen::random_csp(rng, 12, 3, tightness);
    OracleCsp oc = oracle_csp(cn);
    std::string tag = " (model " + std::to_string(rep) + ")";

    for (const JoinTreeLevel& lv : levels_of(cn.primal())) {
      for (CspStrategy st : strategies) {
        try {
          CspResult r = csp_solve(cn, lv.tree, st, true);
          c.equal(r.consistent, oc.consistent, "consistency" + tag);
          c.equal(r.count, oc.count, "solution count" + tag);
          if (r.consistent)
            c.expect(cn.satisfied_by(r.solution),
                     "extracted solution violates a constraint" + tag);
        } catch (const std::exception& e) {
          c.expect(false, std::string("solve threw: ") + e.what() + tag);
        }
      }
    }
  }
  return c.ok;
}

// --------------------------------------------------------------------------
// 6. Constrained maximization and expected utility against enumeration,
//    plus the criterion-coupling effect on the reference constraint graph.

bool scenario_optimize(Check& c) {
  gen::Rng rng(7004);
  const std::vector<Strategy> strategies = {
      Strategy::Elimination, Strategy::BruteForce, Strategy::Cutset};

  for (int rep = 0; rep < 100 && c.failures < 50; ++rep) {
    ConstraintNetwork cn = gen::random_csp(rng, 8, 3, 0.3);
    CriterionFunction crit =
        gen::random_criterion(rng, cn.num_vars(), cn.cards());
    OracleOpt oo = oracle_opt(cn, crit);
    std::string tag = " (optimization " + std::to_string(rep) + ")";
    for (const JoinTreeLevel& lv : levels_of(optimization_graph(cn, crit))) {
      for (Strategy st : strategies) {
        OptResult r = optimize(cn, crit, lv.tree, st);
        c.equal(r.consistent, oo.consistent, "feasibility" + tag);
        if (r.consistent && oo.consistent) {
          c.close(r.value, oo.value, kProbTol, "optimum" + tag);
          c.expect(cn.satisfied_by(r.assignment),
                   "optimizer returned an infeasible assignment" + tag);
          c.close(crit.value(r.assignment), r.value, kProbTol,
                  "reported optimum must match its assignment" + tag);
        }
      }
    }
  }

  for (int rep = 0; rep < 100 && c.failures < 50; ++rep) {
    InfluenceDiagram id = gen::random_id(rng, 8, 2);
    OracleMeu om = oracle_meu(id);
    std::string tag = " (diagram " + std::to_string(rep) + ")";
    for (const JoinTreeLevel& lv : levels_of(id.decomposition_graph())) {
      for (Strategy st : strategies) {
        MeuResult r = maximum_expected_utility(id, lv.tree, st);
        c.close(r.expected_utility, om.expected_utility, kProbTol,
                "expected utility" + tag);
      }
    }
  }

  // Coupling a criterion over {A, G} must add exactly the edge A-G and
  // change the primary clique set.
  Model m = parse_model(slurp("eightvar.csp"));
  CriterionFunction crit = parse_criterion(slurp("coupling.crit"), m);
  UndirectedGraph base = m.constraint.primal();
  UndirectedGraph aug = optimization_graph(m.constraint, crit);
  c.equal(base.num_edges(), 14, "reference constraint edges");
  c.equal(aug.num_edges(), 15, "augmented constraint edges");
  std::vector<std::pair<int, int>> extra;
  for (const auto& e : aug.edges())
    if (!base.has_edge(e.first, e.second)) extra.push_back(e);
  c.expect(extra == std::vector<std::pair<int, int>>{{0, 6}},
           "augmentation must add exactly the A-G edge");
  std::vector<std::vector<int>> base_cliques =
      analyze_graph(base, OrderingHeuristic::MinFill).cliques;
  std::vector<std::vector<int>> aug_cliques =
      analyze_graph(aug, OrderingHeuristic::MinFill).cliques;
  c.expect(base_cliques != aug_cliques,
           "augmentation must change the primary clique set");
  std::vector<std::vector<int>> want_aug = {
      {0, 1, 6}, {1, 2, 3}, {1, 3, 6}, {3, 4, 5, 6}, {4, 5, 6, 7}};
  c.expect(aug_cliques == want_aug,
           "augmented cliques must absorb A into the A,B,G clique");
  return c.ok;
}

// --------------------------------------------------------------------------
// 7. Determinism: every command run in records format twice produces
//    byte-identical output.

bool scenario_determinism(Check& c) {
  const std::string net = g_corpus + "/eightvar.net";
  const std::string csp = g_corpus + "/eightvar.csp";
  const std::string crit = g_corpus + "/coupling.crit";
  const std::string id = g_corpus + "/chain.id";

  std::vector<std::vector<std::string>> commands = {
      {"analyze", net},
      {"analyze", csp},
      {"analyze", csp, "--criterion", crit},
      {"analyze", id},
      {"analyze", net, "--ordering", "min-degree"},
      {"infer", "belief", net, "--query", "D", "--evidence", "A=0,H=1",
       "--sep-bound", "3", "--strategy", "elim", "--oracle"},
      {"infer", "belief", net, "--query", "D", "--evidence", "A=0,H=1",
       "--sep-bound", "2", "--strategy", "cutset", "--oracle"},
      {"infer", "belief", net, "--query", "D", "--evidence", "A=0,H=1",
       "--sep-bound", "1", "--strategy", "brute", "--oracle"},
      {"infer", "mpe", net, "--evidence", "H=0", "--strategy", "elim",
       "--oracle"},
      {"infer", "mpe", net, "--evidence", "H=0", "--sep-bound", "1",
       "--strategy", "cutset", "--oracle"},
      {"solve", csp, "--count"},
      {"solve", csp, "--count", "--sep-bound", "2", "--strategy", "cutset"},
      {"solve", csp, "--count", "--nonseparable"},
      {"optimize", csp, "--criterion", crit, "--oracle"},
      {"optimize", csp, "--criterion", crit, "--strategy", "brute"},
      {"optimize", csp, "--criterion", crit, "--strategy", "cutset"},
      {"meu", id, "--oracle"},
      {"meu", id, "--strategy", "brute"},
      {"meu", id, "--strategy", "cutset"},
      {"bench", net, "--query", "D", "--evidence", "A=0,H=1"},
      {"bench", csp, "--count"},
      {"bench", id},
  };

  for (std::vector<std::string> cmd : commands) {
    cmd.push_back("--format");
    cmd.push_back("records");
    std::string joined;
    for (const std::string& a : cmd) joined += (joined.empty() ? "" : " ") + a;

    std::ostringstream out1, err1, out2, err2;
    int code1 = run_command(cmd, out1, err1);
    int code2 = run_command(cmd, out2, err2);
    c.expect(code1 == 0, "exit " + std::to_string(code1) + ": " + joined +
                             (err1.str().empty() ? "" : " | " + err1.str()));
    c.expect(code1 == code2, "exit codes differ on rerun: " + joined);
    c.expect(out1.str() == out2.str(), "stdout differs on rerun: " + joined);
    c.expect(err1.str() == err2.str(), "stderr differs on rerun: " + joined);
    c.expect(!out1.str().empty(), "no output: " + joined);
  }
  return c.ok;
}

struct Scenario {
  const char* name;
  bool (*fn)(Check&);
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <corpus-dir>\n";
    return 2;
  }
  g_corpus = argv[1];

  const Scenario scenarios[] = {
      {"eight-variable decomposition pipeline", scenario_pipeline},
      {"cycle cutsets and dominating tradeoffs", scenario_cutsets},
      {"random belief networks vs enumeration", scenario_belief},
      {"space accounting laws", scenario_space},
      {"random constraint networks vs enumeration", scenario_csp},
      {"optimization and expected utility vs enumeration", scenario_optimize},
      {"deterministic records output", scenario_determinism},
  };

  bool all_ok = true;
  int index = 0;
  for (const Scenario& s : scenarios) {
    ++index;
    Check c;
    bool ok = false;
    std::string aborted;
    try {
      ok = s.fn(c);
    } catch (const std::exception& e) {
      aborted = e.what();
      ok = false;
    }
    std::cout << (ok ? "PASS" : "FAIL") << " " << index << "/7 " << s.name
              << "\n";
    if (!ok) {
      all_ok = false;
      if (!aborted.empty()) std::cout << "  aborted: " << aborted << "\n";
      for (const std::string& note : c.notes) std::cout << "  " << note << "\n";
      if (c.failures > static_cast<long long>(c.notes.size()))
        std::cout << "  (" << c.failures << " failing checks total)\n";
    }
  }
  return all_ok ? 0 : 1;
}
