#include "treespan/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "treespan/common.hpp"
#include "treespan/csp.hpp"
#include "treespan/io.hpp"
#include "treespan/jointree.hpp"
#include "treespan/meter.hpp"
#include "treespan/models.hpp"
#include "treespan/optimize.hpp"
#include "treespan/oracle.hpp"
#include "treespan/propagate.hpp"
#include "treespan/tradeoff.hpp"

namespace treespan {
namespace {

constexpr int kSepBoundUnset = std::numeric_limits<int>::min();

// Options shared across subcommands; each subcommand binds the subset it
// supports.
struct Options {
  std::string file;
  std::string format = "human";
  std::string ordering = "min-fill";
  std::string order_csv;
  int cutset_budget = kDefaultCutsetBudget;
  int sep_bound = kSepBoundUnset;
  std::string strategy;
  std::string evidence;
  std::string query;
  std::string criterion_file;
  bool count = false;
  bool nonseparable = false;
  bool oracle = false;
  long long oracle_budget = kDefaultOracleBudget;

  bool records() const { return format == "records"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int require_var(const Model& m, const std::string& name) {
  int v = m.var_id(name);
  if (v < 0) throw Error("unknown variable: " + name);
  return v;
}

Evidence parse_evidence(const Model& m, const std::string& text) {
  if (text.empty()) return Evidence{};
  std::vector<std::pair<int, int>> items;
  for (const std::string& part : split(text, ',')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == part.size())
      throw Error("evidence must look like VAR=VALUE: " + part);
    int v = require_var(m, part.substr(0, eq));
    const std::string val = part.substr(eq + 1);
    char* end = nullptr;
    long x = std::strtol(val.c_str(), &end, 10);
    if (end == val.c_str() || *end != '\0')
      throw Error("evidence value is not an integer: " + part);
    if (x < 0 || x >= m.cards()[v])
      throw Error("evidence value out of range for " + m.name(v) + ": " + val);
    items.emplace_back(v, static_cast<int>(x));
  }
  return Evidence::of(std::move(items));
}

EliminationOrdering parse_order(const Model& m, const std::string& csv) {
  EliminationOrdering d;
  for (const std::string& name : split(csv, ','))
    d.order.push_back(require_var(m, name));
  d.positions(m.num_vars());  // throws unless a permutation of all variables
  return d;
}

std::string join_names(const Model& m, const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += m.name(ids[i]);
  }
  return out;
}

std::string braces(const Model& m, const std::vector<int>& ids) {
  return "{" + join_names(m, ids) + "}";
}

// "A=0,B=1" over explicit (var, value) pairs.
std::string assign_pairs(const Model& m,
                         const std::vector<std::pair<int, int>>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += m.name(items[i].first) + "=" + std::to_string(items[i].second);
  }
  return out;
}

std::string full_assignment(const Model& m, const std::vector<int>& full) {
  std::vector<std::pair<int, int>> items;
  for (std::size_t v = 0; v < full.size(); ++v)
    items.emplace_back(static_cast<int>(v), full[v]);
  return assign_pairs(m, items);
}

std::string evidence_text(const Model& m, const Evidence& ev) {
  return ev.empty() ? std::string("-") : assign_pairs(m, ev.items);
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(xs[i]);
  }
  return out;
}

void write_meter(std::ostream& out, const Options& o, const CostMeter& m) {
  if (o.records()) {
    out << "record=meter cell_ops=" << m.cell_ops
        << " node_visits=" << m.node_visits
        << " peak_scratch_cells=" << m.peak_scratch_cells
        << " peak_scratch_arity=" << m.peak_scratch_arity
        << " peak_persistent_cells=" << m.peak_persistent_cells
        << " peak_total_cells=" << m.peak_total_cells << "\n";
  } else {
    out << "cost: cell ops " << m.cell_ops << ", node visits "
        << m.node_visits << ", peak scratch " << m.peak_scratch_cells
        << " cells (arity " << m.peak_scratch_arity << "), peak persistent "
        << m.peak_persistent_cells << " cells, peak total "
        << m.peak_total_cells << " cells\n";
  }
}

void write_agreement(std::ostream& out, const Options& o, bool pass,
                     const std::string& detail) {
  if (o.records()) {
    out << "record=agreement status=" << (pass ? "PASS" : "FAIL");
    if (!pass) out << " detail=" << detail;
    out << "\n";
  } else {
    out << "oracle agreement: " << (pass ? "PASS" : "FAIL");
    if (!pass) out << " (" << detail << ")";
    out << "\n";
  }
}

// Parsed model plus the criterion in effect (embedded or from a side file).
struct Loaded {
  Model model;
  bool has_criterion = false;
  CriterionFunction criterion;
};

Loaded load_model(const Options& o) {
  Loaded l;
  try {
    l.model = parse_model(read_file(o.file));
  } catch (const ParseError& e) {
    throw Error(o.file + ": " + e.what());
  }
  if (!o.criterion_file.empty()) {
    if (l.model.kind != ModelKind::Constraint)
      throw Error("--criterion applies to constraint networks only");
    if (l.model.has_criterion)
      throw Error(o.file +
                  " already embeds a criterion; drop --criterion or the "
                  "embedded crit block");
    try {
      l.criterion = parse_criterion(read_file(o.criterion_file), l.model);
    } catch (const ParseError& e) {
      throw Error(o.criterion_file + ": " + e.what());
    }
    l.has_criterion = true;
  } else if (l.model.has_criterion) {
    l.criterion = l.model.criterion;
    l.has_criterion = true;
  }
  return l;
}

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Belief: return "a belief network";
    case ModelKind::Constraint: return "a constraint network";
    default: return "an influence diagram";
  }
}

void require_kind(const Loaded& l, ModelKind want, const char* command) {
  if (l.model.kind != want)
    throw Error(std::string(command) + " expects " + kind_name(want) + "; " +
                kind_name(l.model.kind) + " given");
}

// The graph whose decompositions drive the query for this model kind.
UndirectedGraph analysis_graph(const Loaded& l) {
  switch (l.model.kind) {
    case ModelKind::Belief:
      return l.model.belief.moral_graph();
    case ModelKind::Influence:
      return l.model.influence.decomposition_graph();
    default:
      return l.has_criterion
                 ? optimization_graph(l.model.constraint, l.criterion)
                 : l.model.constraint.primal();
  }
}

AnalysisReport analyze_for(const Options& o, const Loaded& l,
                           const UndirectedGraph& g) {
  if (!o.order_csv.empty())
    return analyze_graph(g, parse_order(l.model, o.order_csv),
                         o.cutset_budget);
  OrderingHeuristic h = o.ordering == "min-degree" ? OrderingHeuristic::MinDegree
                                                   : OrderingHeuristic::MinFill;
  return analyze_graph(g, h, o.cutset_budget);
}

const JoinTreeLevel& pick_level(const AnalysisReport& rep, const Options& o,
                                int* index) {
  if (o.sep_bound == kSepBoundUnset) {
    *index = 0;
    return rep.levels.front();
  }
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    if (rep.levels[i].sep_bound == o.sep_bound) {
      *index = static_cast<int>(i);
      return rep.levels[i];
    }
  std::string avail;
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    if (i) avail += ", ";
    avail += std::to_string(rep.levels[i].sep_bound);
  }
  throw Error("separator bound " + std::to_string(o.sep_bound) +
              " not available; available separator bounds: " + avail);
}

void write_run(std::ostream& out, const Options& o, const char* command,
               int level, int sep) {
  if (o.records()) {
    out << "record=run command=" << command;
    if (o.nonseparable)
      out << " decomposition=nonseparable";
    else
      out << " level=" << level << " sep=" << sep;
    if (!o.strategy.empty()) out << " strategy=" << o.strategy;
    out << "\n";
  } else {
    if (o.nonseparable)
      out << "nonseparable decomposition";
    else
      out << "level " << level << " (sep " << sep << ")";
    if (!o.strategy.empty()) out << ", strategy " << o.strategy;
    out << "\n";
  }
}

Strategy table_strategy(const std::string& s) {
  if (s == "brute") return Strategy::BruteForce;
  if (s == "cutset") return Strategy::Cutset;
  return Strategy::Elimination;
}

CspStrategy csp_strategy(const std::string& s) {
  return s == "cutset" ? CspStrategy::Cutset : CspStrategy::Backtracking;
}

// ---------------------------------------------------------------- analyze --

int cmd_analyze(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));
  const Model& m = l.model;
  if (o.records()) {
    out << "record=graph vars=" << rep.num_vars << " edges=" << rep.num_edges
        << "\n";
    out << "record=ordering name=" << rep.ordering_name
        << " width=" << rep.induced_width
        << " order=" << join_names(m, rep.ordering.order) << "\n";
    for (std::size_t i = 0; i < rep.cliques.size(); ++i)
      out << "record=clique index=" << i
          << " vars=" << join_names(m, rep.cliques[i]) << "\n";
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
      const TradeoffLevel& t = rep.tradeoff[i];
      out << "record=level index=" << t.index << " sep=" << t.sep_size
          << " clusters=" << rep.levels[i].tree.num_clusters()
          << " width=" << t.tree_width << " cutset=" << t.cutset_size
          << " cutset_exact=" << (t.cutset_exact ? 1 : 0)
          << " bf_time=" << t.bf_time << " bf_space=" << t.bf_space
          << " cut_time=" << t.cut_time << " cut_space=" << t.cut_space
          << "\n";
    }
    for (const auto& d : rep.dominating)
      out << "record=dominating time=" << d.first << " space=" << d.second
          << "\n";
  } else {
    out << "graph: " << rep.num_vars << " variables, " << rep.num_edges
        << " edges\n";
    out << "ordering (" << rep.ordering_name
        << "): " << join_names(m, rep.ordering.order) << " (width "
        << rep.induced_width << ")\n";
    out << "cliques:";
    for (const auto& c : rep.cliques) out << " " << braces(m, c);
    out << "\n";
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
      const TradeoffLevel& t = rep.tradeoff[i];
      out << "level " << t.index << ": sep " << t.sep_size << ", width "
          << t.tree_width << ", cutset " << (t.cutset_exact ? "" : ">= ")
          << t.cutset_size << (t.cutset_exact ? "" : " (greedy)")
          << ", brute force (time " << t.bf_time << ", space " << t.bf_space
          << "), conditioning (time " << t.cut_time << ", space "
          << t.cut_space << ")\n";
      out << "  clusters:";
      for (const auto& c : rep.levels[i].tree.clusters)
        out << " " << braces(m, c);
      out << "\n";
    }
    out << "dominating:";
    for (const auto& d : rep.dominating)
      out << " (time " << d.first << ", space " << d.second << ")";
    out << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- belief --

int cmd_belief(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  require_kind(l, ModelKind::Belief, "infer");
  const BeliefNetwork& bn = l.model.belief;
  const Model& m = l.model;
  int query = require_var(m, o.query);
  Evidence ev = parse_evidence(m, o.evidence);
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));
  int level = 0;
  const JoinTreeLevel& lv = pick_level(rep, o, &level);
  BeliefResult r =
      belief(bn, lv.tree, query, ev, table_strategy(o.strategy), o.cutset_budget);

  write_run(out, o, "belief", level, lv.sep_bound);
  if (o.records()) {
    out << "record=belief query=" << m.name(query)
        << " evidence=" << evidence_text(m, ev)
        << " impossible=" << (r.impossible ? 1 : 0);
    if (!r.impossible)
      out << " p_evidence=" << fmt_double(r.p_evidence)
          << " posterior=" << join_reals(r.posterior);
    out << "\n";
  } else if (r.impossible) {
    out << "impossible evidence\n";
  } else {
    for (std::size_t v = 0; v < r.posterior.size(); ++v) {
      out << "P(" << m.name(query) << "=" << v;
      if (!ev.empty()) out << " | " << assign_pairs(m, ev.items);
      out << ") = " << fmt_double(r.posterior[v]) << "\n";
    }
    out << "p(evidence) = " << fmt_double(r.p_evidence) << "\n";
  }
  write_meter(out, o, r.meter);

  bool fail = false;
  if (o.oracle) {
    OracleBelief ob = oracle_belief(bn, query, ev, o.oracle_budget);
    std::string detail;
    if (ob.impossible != r.impossible) {
      detail = "impossible";
    } else if (!r.impossible) {
      if (std::abs(ob.p_evidence - r.p_evidence) > kProbTol) detail = "p_evidence";
      for (std::size_t i = 0; i < r.posterior.size() && detail.empty(); ++i)
        if (std::abs(ob.posterior[i] - r.posterior[i]) > kProbTol)
          detail = "posterior";
    }
    fail = !detail.empty();
    if (o.records()) {
      out << "record=oracle impossible=" << (ob.impossible ? 1 : 0);
      if (!ob.impossible)
        out << " p_evidence=" << fmt_double(ob.p_evidence)
            << " posterior=" << join_reals(ob.posterior);
      out << "\n";
    }
    write_agreement(out, o, !fail, detail);
  }
  return fail ? 3 : (r.impossible ? 2 : 0);
}

// -------------------------------------------------------------------- mpe --

int cmd_mpe(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  require_kind(l, ModelKind::Belief, "infer");
  const BeliefNetwork& bn = l.model.belief;
  const Model& m = l.model;
  Evidence ev = parse_evidence(m, o.evidence);
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));
  int level = 0;
  const JoinTreeLevel& lv = pick_level(rep, o, &level);
  MpeResult r = most_probable_explanation(bn, lv.tree, ev,
                                          table_strategy(o.strategy),
                                          o.cutset_budget);

  write_run(out, o, "mpe", level, lv.sep_bound);
  if (o.records()) {
    out << "record=mpe evidence=" << evidence_text(m, ev)
        << " impossible=" << (r.impossible ? 1 : 0);
    if (!r.impossible)
      out << " probability=" << fmt_double(r.probability)
          << " assignment=" << full_assignment(m, r.assignment);
    out << "\n";
  } else if (r.impossible) {
    out << "impossible evidence\n";
  } else {
    out << "mpe probability = " << fmt_double(r.probability) << "\n";
    out << "assignment: " << full_assignment(m, r.assignment) << "\n";
  }
  write_meter(out, o, r.meter);

  bool fail = false;
  if (o.oracle) {
    OracleMpe om = oracle_mpe(bn, ev, o.oracle_budget);
    std::string detail;
    if (om.impossible != r.impossible) {
      detail = "impossible";
    } else if (!r.impossible) {
      if (std::abs(om.probability - r.probability) > kMpeTol)
        detail = "probability";
      else if (std::abs(bn.joint_probability(r.assignment) - r.probability) >
               kMpeTol)
        detail = "assignment";
    }
    fail = !detail.empty();
    if (o.records()) {
      out << "record=oracle impossible=" << (om.impossible ? 1 : 0);
      if (!om.impossible)
        out << " probability=" << fmt_double(om.probability)
            << " assignment=" << full_assignment(m, om.assignment);
      out << "\n";
    }
    write_agreement(out, o, !fail, detail);
  }
  return fail ? 3 : (r.impossible ? 2 : 0);
}

// ------------------------------------------------------------------ solve --

int cmd_solve(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  require_kind(l, ModelKind::Constraint, "solve");
  const ConstraintNetwork& cn = l.model.constraint;
  const Model& m = l.model;
  CspStrategy st = csp_strategy(o.strategy);

  CspResult r;
  std::vector<std::vector<int>> clusters;  // for naming a failed cluster
  int level = 0, sep = 0;
  if (o.nonseparable) {
    if (o.sep_bound != kSepBoundUnset)
      throw Error("--sep-bound does not apply to --nonseparable");
    JoinTree nt = nonseparable_join_tree(cn.primal());
    clusters = nt.clusters;
    sep = nt.sep_bound;
    r = csp_solve(cn, nt, st, o.count, o.cutset_budget);
  } else {
    AnalysisReport rep = analyze_for(o, l, cn.primal());
    const JoinTreeLevel& lv = pick_level(rep, o, &level);
    clusters = lv.tree.clusters;
    sep = lv.sep_bound;
    r = csp_solve(cn, lv.tree, st, o.count, o.cutset_budget);
  }

  write_run(out, o, "solve", level, sep);
  if (o.records()) {
    out << "record=solve consistent=" << (r.consistent ? 1 : 0);
    if (r.consistent)
      out << " solution=" << full_assignment(m, r.solution);
    else if (r.failed_cluster >= 0)
      out << " failed_cluster=" << braces(m, clusters[r.failed_cluster]);
    if (r.counted) out << " count=" << fmt_double(r.count);
    out << "\n";
  } else {
    if (r.consistent) {
      out << "consistent: yes\n";
      out << "solution: " << full_assignment(m, r.solution) << "\n";
    } else {
      out << "consistent: no";
      if (r.failed_cluster >= 0)
        out << " (cluster " << braces(m, clusters[r.failed_cluster])
            << " has no solution)";
      out << "\n";
    }
    if (r.counted) out << "count: " << fmt_double(r.count) << "\n";
  }
  write_meter(out, o, r.meter);

  bool fail = false;
  if (o.oracle) {
    OracleCsp oc = oracle_csp(cn, o.oracle_budget);
    std::string detail;
    if (oc.consistent != r.consistent)
      detail = "consistent";
    else if (r.counted && oc.count != r.count)
      detail = "count";
    fail = !detail.empty();
    if (o.records()) {
      out << "record=oracle consistent=" << (oc.consistent ? 1 : 0);
      if (r.counted) out << " count=" << fmt_double(oc.count);
      out << "\n";
    }
    write_agreement(out, o, !fail, detail);
  }
  return fail ? 3 : (r.consistent ? 0 : 2);
}

// --------------------------------------------------------------- optimize --

int cmd_optimize(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  require_kind(l, ModelKind::Constraint, "optimize");
  if (!l.has_criterion)
    throw Error("optimize needs a criterion (embedded crit block or --criterion)");
  const ConstraintNetwork& cn = l.model.constraint;
  const Model& m = l.model;
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));
  int level = 0;
  const JoinTreeLevel& lv = pick_level(rep, o, &level);
  OptResult r = optimize(cn, l.criterion, lv.tree, table_strategy(o.strategy),
                         o.cutset_budget);

  write_run(out, o, "optimize", level, lv.sep_bound);
  if (o.records()) {
    out << "record=optimize consistent=" << (r.consistent ? 1 : 0);
    if (r.consistent)
      out << " value=" << fmt_double(r.value)
          << " assignment=" << full_assignment(m, r.assignment);
    out << "\n";
  } else if (!r.consistent) {
    out << "no assignment satisfies the constraints\n";
  } else {
    out << "optimum: " << fmt_double(r.value) << "\n";
    out << "assignment: " << full_assignment(m, r.assignment) << "\n";
  }
  write_meter(out, o, r.meter);

  bool fail = false;
  if (o.oracle) {
    OracleOpt oo = oracle_opt(cn, l.criterion, o.oracle_budget);
    std::string detail;
    if (oo.consistent != r.consistent)
      detail = "consistent";
    else if (r.consistent && std::abs(oo.value - r.value) > kProbTol)
      detail = "value";
    fail = !detail.empty();
    if (o.records()) {
      out << "record=oracle consistent=" << (oo.consistent ? 1 : 0);
      if (oo.consistent) out << " value=" << fmt_double(oo.value);
      out << "\n";
    }
    write_agreement(out, o, !fail, detail);
  }
  return fail ? 3 : (r.consistent ? 0 : 2);
}

// -------------------------------------------------------------------- meu --

int cmd_meu(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  require_kind(l, ModelKind::Influence, "meu");
  const InfluenceDiagram& id = l.model.influence;
  const Model& m = l.model;
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));
  int level = 0;
  const JoinTreeLevel& lv = pick_level(rep, o, &level);
  MeuResult r = maximum_expected_utility(id, lv.tree,
                                         table_strategy(o.strategy),
                                         o.cutset_budget);

  std::vector<int> dvars = id.decision_vars();
  auto decision_pairs = [&](const std::vector<int>& values) {
    std::vector<std::pair<int, int>> items;
    for (std::size_t i = 0; i < dvars.size(); ++i)
      items.emplace_back(dvars[i], values[i]);
    return assign_pairs(m, items);
  };

  write_run(out, o, "meu", level, lv.sep_bound);
  if (o.records()) {
    out << "record=meu expected_utility=" << fmt_double(r.expected_utility)
        << " decisions=" << decision_pairs(r.decision_values) << "\n";
  } else {
    out << "expected utility = " << fmt_double(r.expected_utility) << "\n";
    out << "decisions: " << decision_pairs(r.decision_values) << "\n";
  }
  write_meter(out, o, r.meter);

  bool fail = false;
  if (o.oracle) {
    OracleMeu om = oracle_meu(id, o.oracle_budget);
    fail = std::abs(om.expected_utility - r.expected_utility) > kProbTol;
    if (o.records())
      out << "record=oracle expected_utility="
          << fmt_double(om.expected_utility)
          << " decisions=" << decision_pairs(om.decision_values) << "\n";
    write_agreement(out, o, !fail, "expected_utility");
  }
  return fail ? 3 : 0;
}

// ------------------------------------------------------------------ bench --

int cmd_bench(const Options& o, std::ostream& out) {
  Loaded l = load_model(o);
  const Model& m = l.model;
  AnalysisReport rep = analyze_for(o, l, analysis_graph(l));

  Evidence ev;
  int query = 0;
  if (l.model.kind == ModelKind::Belief) {
    ev = parse_evidence(m, o.evidence);
    if (!o.query.empty()) query = require_var(m, o.query);
  } else if (!o.evidence.empty() || !o.query.empty()) {
    throw Error("--evidence/--query apply to belief networks only");
  }

  struct Row {
    const char* strategy;
    CostMeter meter;
    int predicted_time, predicted_space;
  };
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const JoinTreeLevel& lv = rep.levels[i];
    const TradeoffLevel& t = rep.tradeoff[i];
    std::vector<Row> rows;
    switch (l.model.kind) {
      case ModelKind::Belief: {
        const BeliefNetwork& bn = l.model.belief;
        rows.push_back({"brute",
                        belief(bn, lv.tree, query, ev, Strategy::BruteForce,
                               o.cutset_budget)
                            .meter,
                        t.bf_time, t.bf_space});
        rows.push_back({"cutset",
                        belief(bn, lv.tree, query, ev, Strategy::Cutset,
                               o.cutset_budget)
                            .meter,
                        t.cut_time, t.cut_space});
        break;
      }
      case ModelKind::Constraint: {
        const ConstraintNetwork& cn = l.model.constraint;
        if (l.has_criterion) {
          rows.push_back({"brute",
                          optimize(cn, l.criterion, lv.tree,
                                   Strategy::BruteForce, o.cutset_budget)
                              .meter,
                          t.bf_time, t.bf_space});
          rows.push_back({"cutset",
                          optimize(cn, l.criterion, lv.tree, Strategy::Cutset,
                                   o.cutset_budget)
                              .meter,
                          t.cut_time, t.cut_space});
        } else {
          rows.push_back({"backtracking",
                          csp_solve(cn, lv.tree, CspStrategy::Backtracking,
                                    o.count, o.cutset_budget)
                              .meter,
                          t.bf_time, t.bf_space});
          rows.push_back({"cutset",
                          csp_solve(cn, lv.tree, CspStrategy::Cutset, o.count,
                                    o.cutset_budget)
                              .meter,
                          t.cut_time, t.cut_space});
        }
        break;
      }
      default: {
        const InfluenceDiagram& id = l.model.influence;
        rows.push_back({"brute",
                        maximum_expected_utility(id, lv.tree,
                                                 Strategy::BruteForce,
                                                 o.cutset_budget)
                            .meter,
                        t.bf_time, t.bf_space});
        rows.push_back({"cutset",
                        maximum_expected_utility(id, lv.tree, Strategy::Cutset,
                                                 o.cutset_budget)
                            .meter,
                        t.cut_time, t.cut_space});
        break;
      }
    }
    for (const Row& row : rows) {
      if (o.records()) {
        out << "record=bench level=" << t.index << " sep=" << t.sep_size
            << " strategy=" << row.strategy
            << " cell_ops=" << row.meter.cell_ops
            << " node_visits=" << row.meter.node_visits
            << " peak_scratch_cells=" << row.meter.peak_scratch_cells
            << " peak_scratch_arity=" << row.meter.peak_scratch_arity
            << " peak_persistent_cells=" << row.meter.peak_persistent_cells
            << " peak_total_cells=" << row.meter.peak_total_cells
            << " predicted_time=" << row.predicted_time
            << " predicted_space=" << row.predicted_space << "\n";
      } else {
        out << "level " << t.index << " (sep " << t.sep_size << ") "
            << row.strategy << ": cell ops " << row.meter.cell_ops
            << ", node visits " << row.meter.node_visits << ", peak scratch "
            << row.meter.peak_scratch_cells << " (arity "
            << row.meter.peak_scratch_arity << "), peak persistent "
            << row.meter.peak_persistent_cells << ", peak total "
            << row.meter.peak_total_cells << ", predicted (time "
            << row.predicted_time << ", space " << row.predicted_space
            << ")\n";
      }
    }
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  Options o;
  CLI::App app{"join-tree decompositions with tunable time/space tradeoffs"};
  app.name("treespan");
  app.require_subcommand(1);

  auto add_file = [&](CLI::App* c) {
    c->add_option("file", o.file, "model file")->required();
    c->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"human", "records"}));
  };
  auto add_tree_opts = [&](CLI::App* c, bool with_sep_bound) {
    CLI::Option* ord =
        c->add_option("--ordering", o.ordering, "elimination heuristic")
            ->check(CLI::IsMember({"min-fill", "min-degree"}));
    c->add_option("--order", o.order_csv,
                  "explicit elimination ordering, comma-separated names")
        ->excludes(ord);
    c->add_option("--cutset-budget", o.cutset_budget,
                  "exact cycle-cutset search size budget");
    if (with_sep_bound)
      c->add_option("--sep-bound", o.sep_bound,
                    "separator bound selecting a decomposition level");
  };
  auto add_strategy = [&](CLI::App* c, std::vector<std::string> allowed) {
    c->add_option("--strategy", o.strategy, "cluster processing strategy")
        ->check(CLI::IsMember(std::move(allowed)));
  };
  auto add_oracle = [&](CLI::App* c) {
    c->add_flag("--oracle", o.oracle,
                "check the answer against exhaustive enumeration");
    c->add_option("--oracle-budget", o.oracle_budget,
                  "largest joint state space --oracle will enumerate");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "decomposition levels and time/space exponents");
  add_file(analyze);
  add_tree_opts(analyze, false);
  analyze->add_option("--criterion", o.criterion_file,
                      "criterion file for a constraint network");

  CLI::App* infer =
      app.add_subcommand("infer", "probabilistic queries on belief networks");
  infer->require_subcommand(1);
  CLI::App* belief_cmd =
      infer->add_subcommand("belief", "posterior of one variable");
  add_file(belief_cmd);
  add_tree_opts(belief_cmd, true);
  belief_cmd->add_option("--query", o.query, "variable to report")->required();
  belief_cmd->add_option("--evidence", o.evidence,
                         "observed values, e.g. A=0,B=1");
  CLI::App* mpe_cmd =
      infer->add_subcommand("mpe", "most probable explanation");
  add_file(mpe_cmd);
  add_tree_opts(mpe_cmd, true);
  mpe_cmd->add_option("--evidence", o.evidence,
                      "observed values, e.g. A=0,B=1");

  CLI::App* solve = app.add_subcommand(
      "solve", "constraint consistency, one solution, optional count");
  add_file(solve);
  add_tree_opts(solve, true);
  solve->add_flag("--count", o.count, "also count all solutions");
  solve->add_flag("--nonseparable", o.nonseparable,
                  "decompose into biconnected components instead of cliques");

  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "maximize an additive criterion under constraints");
  add_file(optimize_cmd);
  add_tree_opts(optimize_cmd, true);
  optimize_cmd->add_option("--criterion", o.criterion_file,
                           "criterion file (if not embedded in the model)");

  CLI::App* meu = app.add_subcommand(
      "meu", "maximum expected utility of an influence diagram");
  add_file(meu);
  add_tree_opts(meu, true);

  CLI::App* bench = app.add_subcommand(
      "bench", "cost-meter readings per level and strategy");
  add_file(bench);
  add_tree_opts(bench, false);
  bench->add_option("--query", o.query, "belief query variable (default: first)");
  bench->add_option("--evidence", o.evidence, "observed values for belief runs");
  bench->add_flag("--count", o.count, "include solution counting in solve runs");
  bench->add_option("--criterion", o.criterion_file,
                    "criterion file for a constraint network");

  add_strategy(belief_cmd, {"elim", "brute", "cutset"});
  add_strategy(mpe_cmd, {"elim", "brute", "cutset"});
  add_strategy(solve, {"backtracking", "cutset"});
  add_strategy(optimize_cmd, {"elim", "brute", "cutset"});
  add_strategy(meu, {"elim", "brute", "cutset"});
  add_oracle(belief_cmd);
  add_oracle(mpe_cmd);
  add_oracle(solve);
  add_oracle(optimize_cmd);
  add_oracle(meu);

  std::vector<const char*> argv;
  argv.push_back("treespan");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (o.strategy.empty())
    o.strategy = solve->parsed() ? "backtracking" : "elim";

  try {
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (belief_cmd->parsed()) return cmd_belief(o, out);
    if (mpe_cmd->parsed()) return cmd_mpe(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    if (meu->parsed()) return cmd_meu(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace treespan
