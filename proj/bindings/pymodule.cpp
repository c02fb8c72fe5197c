#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treespan/cli.hpp"
#include "treespan/common.hpp"
#include "treespan/csp.hpp"
#include "treespan/io.hpp"
#include "treespan/models.hpp"
#include "treespan/optimize.hpp"
#include "treespan/oracle.hpp"
#include "treespan/propagate.hpp"
#include "treespan/tradeoff.hpp"

namespace py = pybind11;
using namespace treespan;

namespace {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Belief: return "belief";
    case ModelKind::Constraint: return "constraint";
    default: return "influence";
  }
}

int require_var(const Model& m, const std::string& name) {
  int v = m.var_id(name);
  if (v < 0) throw InvalidArgument("unknown variable: " + name);
  return v;
}

Evidence to_evidence(const Model& m, const py::dict& ev) {
  std::vector<std::pair<int, int>> items;
  for (auto item : ev)
    items.emplace_back(require_var(m, py::cast<std::string>(item.first)),
                       py::cast<int>(item.second));
  return Evidence::of(std::move(items));
}

Strategy table_strategy(const std::string& s) {
  if (s == "brute") return Strategy::BruteForce;
  if (s == "cutset") return Strategy::Cutset;
  if (s == "elim") return Strategy::Elimination;
  throw InvalidArgument("unknown strategy: " + s);
}

OrderingHeuristic heuristic(const std::string& s) {
  if (s == "min-degree") return OrderingHeuristic::MinDegree;
  if (s == "min-fill") return OrderingHeuristic::MinFill;
  throw InvalidArgument("unknown ordering heuristic: " + s);
}

// Criterion in effect: embedded, or parsed from `criterion_text`.
struct WithCriterion {
  bool has = false;
  CriterionFunction criterion;
};

WithCriterion criterion_for(const Model& m, const std::string& criterion_text) {
  WithCriterion w;
  if (!criterion_text.empty()) {
    if (m.kind != ModelKind::Constraint)
      throw InvalidArgument("criterion applies to constraint networks only");
    if (m.has_criterion)
      throw InvalidArgument("model already embeds a criterion");
    w.criterion = parse_criterion(criterion_text, m);
    w.has = true;
  } else if (m.has_criterion) {
    w.criterion = m.criterion;
    w.has = true;
  }
  return w;
}

UndirectedGraph analysis_graph(const Model& m, const WithCriterion& w) {
  switch (m.kind) {
    case ModelKind::Belief: return m.belief.moral_graph();
    case ModelKind::Influence: return m.influence.decomposition_graph();
    default:
      return w.has ? optimization_graph(m.constraint, w.criterion)
                   : m.constraint.primal();
  }
}

const JoinTreeLevel& pick_level(const AnalysisReport& rep,
                                std::optional<int> sep_bound) {
  if (!sep_bound) return rep.levels.front();
  for (const JoinTreeLevel& lv : rep.levels)
    if (lv.sep_bound == *sep_bound) return lv;
  throw InvalidArgument("separator bound " + std::to_string(*sep_bound) +
                        " not available");
}

py::dict meter_dict(const CostMeter& m) {
  py::dict d;
  d["cell_ops"] = m.cell_ops;
  d["node_visits"] = m.node_visits;
  d["peak_scratch_cells"] = m.peak_scratch_cells;
  d["peak_scratch_arity"] = m.peak_scratch_arity;
  d["peak_persistent_cells"] = m.peak_persistent_cells;
  d["peak_total_cells"] = m.peak_total_cells;
  return d;
}

py::dict assignment_dict(const Model& m, const std::vector<int>& full) {
  py::dict d;
  for (std::size_t v = 0; v < full.size(); ++v)
    d[py::str(m.name(static_cast<int>(v)))] = full[v];
  return d;
}

std::vector<std::string> names_of(const Model& m, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int v : ids) out.push_back(m.name(v));
  return out;
}

}  // namespace

PYBIND11_MODULE(_treespan, mod) {
  mod.doc() = "join-tree decompositions with tunable time/space tradeoffs";

  mod.def("parse", [](const std::string& text) {
    Model m = parse_model(text);
    py::dict d;
    d["kind"] = kind_name(m.kind);
    py::list vars;
    for (const Variable& v : m.variables()) {
      py::dict vd;
      vd["name"] = v.name;
      vd["card"] = v.card;
      vd["decision"] = v.is_decision;
      vars.append(vd);
    }
    d["variables"] = vars;
    d["has_criterion"] = m.has_criterion;
    return d;
  }, py::arg("text"), "Parse a model; returns its kind and variables.");

  mod.def("canonical", [](const std::string& text) {
    return serialize_model(parse_model(text));
  }, py::arg("text"), "Canonical serialization of a model file.");

  mod.def("analyze", [](const std::string& text, const std::string& ordering,
                        int cutset_budget, const std::string& criterion) {
    Model m = parse_model(text);
    WithCriterion w = criterion_for(m, criterion);
    AnalysisReport rep =
        analyze_graph(analysis_graph(m, w), heuristic(ordering), cutset_budget);
    py::dict d;
    d["vars"] = rep.num_vars;
    d["edges"] = rep.num_edges;
    d["ordering"] = names_of(m, rep.ordering.order);
    d["width"] = rep.induced_width;
    py::list cliques;
    for (const auto& c : rep.cliques) cliques.append(names_of(m, c));
    d["cliques"] = cliques;
    py::list levels;
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
      const TradeoffLevel& t = rep.tradeoff[i];
      py::dict ld;
      ld["index"] = t.index;
      ld["sep"] = t.sep_size;
      ld["width"] = t.tree_width;
      ld["cutset"] = t.cutset_size;
      ld["cutset_exact"] = t.cutset_exact;
      py::list clusters;
      for (const auto& c : rep.levels[i].tree.clusters)
        clusters.append(names_of(m, c));
      ld["clusters"] = clusters;
      ld["bf_time"] = t.bf_time;
      ld["bf_space"] = t.bf_space;
      ld["cut_time"] = t.cut_time;
      ld["cut_space"] = t.cut_space;
      levels.append(ld);
    }
    d["levels"] = levels;
    py::list dom;
    for (const auto& p : rep.dominating)
      dom.append(py::make_tuple(p.first, p.second));
    d["dominating"] = dom;
    return d;
  }, py::arg("text"), py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     py::arg("criterion") = "",
     "Decomposition levels and time/space exponents.");

  mod.def("belief", [](const std::string& text, const std::string& query,
                       const py::dict& evidence, const std::string& strategy,
                       std::optional<int> sep_bound,
                       const std::string& ordering, int cutset_budget) {
    Model m = parse_model(text);
    if (m.kind != ModelKind::Belief)
      throw InvalidArgument("belief expects a belief network");
    AnalysisReport rep = analyze_graph(m.belief.moral_graph(),
                                       heuristic(ordering), cutset_budget);
    BeliefResult r = belief(m.belief, pick_level(rep, sep_bound).tree,
                            require_var(m, query), to_evidence(m, evidence),
                            table_strategy(strategy), cutset_budget);
    py::dict d;
    d["impossible"] = r.impossible;
    if (!r.impossible) {
      d["posterior"] = r.posterior;
      d["p_evidence"] = r.p_evidence;
    }
    d["meter"] = meter_dict(r.meter);
    return d;
  }, py::arg("text"), py::arg("query"), py::arg("evidence") = py::dict(),
     py::arg("strategy") = "elim", py::arg("sep_bound") = py::none(),
     py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     "Posterior of one variable given evidence.");

  mod.def("mpe", [](const std::string& text, const py::dict& evidence,
                    const std::string& strategy, std::optional<int> sep_bound,
                    const std::string& ordering, int cutset_budget) {
    Model m = parse_model(text);
    if (m.kind != ModelKind::Belief)
      throw InvalidArgument("mpe expects a belief network");
    AnalysisReport rep = analyze_graph(m.belief.moral_graph(),
                                       heuristic(ordering), cutset_budget);
    MpeResult r = most_probable_explanation(
        m.belief, pick_level(rep, sep_bound).tree, to_evidence(m, evidence),
        table_strategy(strategy), cutset_budget);
    py::dict d;
    d["impossible"] = r.impossible;
    if (!r.impossible) {
      d["probability"] = r.probability;
      d["assignment"] = assignment_dict(m, r.assignment);
    }
    d["meter"] = meter_dict(r.meter);
    return d;
  }, py::arg("text"), py::arg("evidence") = py::dict(),
     py::arg("strategy") = "elim", py::arg("sep_bound") = py::none(),
     py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     "Most probable explanation given evidence.");

  mod.def("solve", [](const std::string& text, const std::string& strategy,
                      bool count, bool nonseparable,
                      std::optional<int> sep_bound,
                      const std::string& ordering, int cutset_budget) {
    Model m = parse_model(text);
    if (m.kind != ModelKind::Constraint)
      throw InvalidArgument("solve expects a constraint network");
    CspStrategy st = strategy == "cutset" ? CspStrategy::Cutset
                                          : CspStrategy::Backtracking;
    CspResult r;
    if (nonseparable) {
      r = nonseparable_solve(m.constraint, st, count, cutset_budget);
    } else {
      AnalysisReport rep = analyze_graph(m.constraint.primal(),
                                         heuristic(ordering), cutset_budget);
      r = csp_solve(m.constraint, pick_level(rep, sep_bound).tree, st, count,
                    cutset_budget);
    }
    py::dict d;
    d["consistent"] = r.consistent;
    if (r.consistent) d["solution"] = assignment_dict(m, r.solution);
    if (r.counted) d["count"] = r.count;
    d["meter"] = meter_dict(r.meter);
    return d;
  }, py::arg("text"), py::arg("strategy") = "backtracking",
     py::arg("count") = false, py::arg("nonseparable") = false,
     py::arg("sep_bound") = py::none(), py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     "Constraint consistency, one solution, optional count.");

  mod.def("optimize", [](const std::string& text, const std::string& criterion,
                         const std::string& strategy,
                         std::optional<int> sep_bound,
                         const std::string& ordering, int cutset_budget) {
    Model m = parse_model(text);
    if (m.kind != ModelKind::Constraint)
      throw InvalidArgument("optimize expects a constraint network");
    WithCriterion w = criterion_for(m, criterion);
    if (!w.has) throw InvalidArgument("optimize needs a criterion");
    AnalysisReport rep = analyze_graph(analysis_graph(m, w),
                                       heuristic(ordering), cutset_budget);
    OptResult r = optimize(m.constraint, w.criterion,
                           pick_level(rep, sep_bound).tree,
                           table_strategy(strategy), cutset_budget);
    py::dict d;
    d["consistent"] = r.consistent;
    if (r.consistent) {
      d["value"] = r.value;
      d["assignment"] = assignment_dict(m, r.assignment);
    }
    d["meter"] = meter_dict(r.meter);
    return d;
  }, py::arg("text"), py::arg("criterion") = "",
     py::arg("strategy") = "elim", py::arg("sep_bound") = py::none(),
     py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     "Maximize an additive criterion under constraints.");

  mod.def("meu", [](const std::string& text, const std::string& strategy,
                    std::optional<int> sep_bound, const std::string& ordering,
                    int cutset_budget) {
    Model m = parse_model(text);
    if (m.kind != ModelKind::Influence)
      throw InvalidArgument("meu expects an influence diagram");
    AnalysisReport rep = analyze_graph(m.influence.decomposition_graph(),
                                       heuristic(ordering), cutset_budget);
    MeuResult r = maximum_expected_utility(m.influence,
                                           pick_level(rep, sep_bound).tree,
                                           table_strategy(strategy),
                                           cutset_budget);
    py::dict d;
    d["expected_utility"] = r.expected_utility;
    py::dict dv;
    std::vector<int> ids = m.influence.decision_vars();
    for (std::size_t i = 0; i < ids.size(); ++i)
      dv[py::str(m.name(ids[i]))] = r.decision_values[i];
    d["decisions"] = dv;
    d["meter"] = meter_dict(r.meter);
    return d;
  }, py::arg("text"), py::arg("strategy") = "elim",
     py::arg("sep_bound") = py::none(), py::arg("ordering") = "min-fill",
     py::arg("cutset_budget") = kDefaultCutsetBudget,
     "Maximum expected utility of an influence diagram.");

  mod.def("oracle_belief", [](const std::string& text, const std::string& query,
                              const py::dict& evidence, long long budget) {
    Model m = parse_model(text);
    OracleBelief r = oracle_belief(m.belief, require_var(m, query),
                                   to_evidence(m, evidence), budget);
    py::dict d;
    d["impossible"] = r.impossible;
    if (!r.impossible) {
      d["posterior"] = r.posterior;
      d["p_evidence"] = r.p_evidence;
    }
    return d;
  }, py::arg("text"), py::arg("query"), py::arg("evidence") = py::dict(),
     py::arg("budget") = kDefaultOracleBudget,
     "Exhaustive-enumeration posterior (reference answer).");

  mod.def("oracle_csp", [](const std::string& text, long long budget) {
    Model m = parse_model(text);
    OracleCsp r = oracle_csp(m.constraint, budget);
    py::dict d;
    d["consistent"] = r.consistent;
    d["count"] = r.count;
    if (r.consistent) d["solution"] = assignment_dict(m, r.solution);
    return d;
  }, py::arg("text"), py::arg("budget") = kDefaultOracleBudget,
     "Exhaustive-enumeration constraint check (reference answer).");

  mod.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    py::dict d;
    d["exit_code"] = code;
    d["stdout"] = out.str();
    d["stderr"] = err.str();
    return d;
  }, py::arg("args"), "Run a command-line invocation in-process.");

  py::register_exception<ParseError>(mod, "ModelParseError");
}
