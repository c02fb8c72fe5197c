#include "treespan/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>

#include "treespan/table.hpp"

namespace treespan {
namespace {

struct Tok {
  std::string text;
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

// Non-empty lines of tokens; `#` starts a comment running to end of line.
std::vector<std::vector<Tok>> lex(const std::string& text) {
  std::vector<std::vector<Tok>> lines;
  std::vector<Tok> cur;
  int line = 1, col = 1;
  std::string tok;
  int tok_col = 0;
  bool comment = false;
  auto flush_tok = [&]() {
    if (!tok.empty()) {
      cur.push_back({tok, line, tok_col});
      tok.clear();
    }
  };
  auto flush_line = [&]() {
    flush_tok();
    if (!cur.empty()) lines.push_back(std::move(cur));
    cur.clear();
    ++line;
    col = 1;
    comment = false;
  };
  for (char c : text) {
    if (c == '\n') {
      flush_line();
      continue;
    }
    if (comment || c == '\r') {
      ++col;
      continue;
    }
    if (c == '#') {
      flush_tok();
      comment = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush_tok();
    } else {
      if (tok.empty()) tok_col = col;
      tok.push_back(c);
    }
    ++col;
  }
  flush_line();
  return lines;
}

[[noreturn]] void fail(const Tok& at, const std::string& msg) {
  throw ParseError("line " + std::to_string(at.line) + ": " + msg, at.line,
                   at.col);
}

bool is_keyword(const std::string& s) {
  return s == "var" || s == "decision" || s == "cpt" || s == "rel" ||
         s == "crit" || s == "end" || s == "|";
}

bool valid_name(const std::string& s) {
  if (s.empty() || is_keyword(s)) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

int parse_int(const Tok& t, int lo, const std::string& what) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail(t, "expected " + what + ", got '" + t.text + "'");
  if (v < lo || v > 1'000'000'000)
    fail(t, what + " out of range: '" + t.text + "'");
  return static_cast<int>(v);
}

double parse_real(const Tok& t, const std::string& what) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(t, "expected " + what + ", got '" + t.text + "'");
  return v;
}

struct Parser {
  std::vector<std::vector<Tok>> lines;
  std::size_t li = 0;

  std::vector<Variable> vars;
  std::map<std::string, int> ids;
  std::vector<int> cards;
  std::vector<Tok> decl_tok;  // declaration site per variable

  std::map<int, Table> cpts;                      // child -> table
  std::vector<std::pair<int, int>> arcs;          // parent -> child
  std::vector<Constraint> rels;
  std::vector<Table> crits;
  Tok first_decision{}, first_crit{};
  bool saw_decision = false, saw_crit = false;

  int lookup(const Tok& t) const {
    auto it = ids.find(t.text);
    if (it == ids.end()) fail(t, "unknown variable '" + t.text + "'");
    return it->second;
  }

  // Resolves a header's variable list; requires distinct names.
  std::vector<int> scope_of(const std::vector<Tok>& toks, std::size_t from) {
    std::vector<int> scope;
    for (std::size_t i = from; i < toks.size(); ++i) {
      int v = lookup(toks[i]);
      if (std::find(scope.begin(), scope.end(), v) != scope.end())
        fail(toks[i], "repeated variable '" + toks[i].text + "' in scope");
      scope.push_back(v);
    }
    return scope;
  }

  void declare(const std::vector<Tok>& ln, bool is_decision) {
    if (ln.size() != 3)
      fail(ln[0], std::string(is_decision ? "decision" : "var") +
                      " takes a name and a domain size");
    if (!valid_name(ln[1].text))
      fail(ln[1], "invalid variable name '" + ln[1].text + "'");
    if (ids.count(ln[1].text))
      fail(ln[1], "duplicate variable '" + ln[1].text + "'");
    int k = parse_int(ln[2], 1, "domain size");
    ids[ln[1].text] = static_cast<int>(vars.size());
    vars.push_back({ln[1].text, k, is_decision});
    cards.push_back(k);
    decl_tok.push_back(ln[1]);
    if (is_decision && !saw_decision) {
      saw_decision = true;
      first_decision = ln[0];
    }
  }

  // Mixed-radix decode of a row index over `scope` in listed order, first
  // variable slowest; writes values into `full`.
  void decode_row(long long r, const std::vector<int>& scope,
                  std::vector<int>& full) const {
    for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
      full[scope[i]] = static_cast<int>(r % cards[scope[i]]);
      r /= cards[scope[i]];
    }
  }

  std::string assignment_names(const std::vector<int>& scope,
                               const std::vector<int>& full) const {
    std::string s;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (i) s += ", ";
      s += vars[scope[i]].name + "=" + std::to_string(full[scope[i]]);
    }
    return s;
  }

  void parse_cpt(const std::vector<Tok>& ln) {
    if (!rels.empty()) fail(ln[0], "file mixes cpt and rel blocks");
    if (ln.size() < 2) fail(ln[0], "cpt takes a child variable");
    int child = lookup(ln[1]);
    if (vars[child].is_decision)
      fail(ln[1], "decision variable '" + ln[1].text + "' cannot have a cpt");
    if (cpts.count(child)) fail(ln[1], "duplicate cpt for '" + ln[1].text + "'");
    std::vector<int> parents;
    if (ln.size() > 2) {
      if (ln[2].text != "|") fail(ln[2], "expected '|' before the parent list");
      if (ln.size() == 3) fail(ln[2], "'|' requires at least one parent");
      parents = scope_of(ln, 3);
      for (std::size_t i = 0; i < parents.size(); ++i)
        if (parents[i] == child)
          fail(ln[3 + i], "variable '" + ln[1].text + "' cannot be its own parent");
    }

    std::vector<int> scope = parents;
    scope.push_back(child);
    std::sort(scope.begin(), scope.end());
    Table t = Table::filled(scope, cards, 0.0);

    long long n_rows = 1;
    for (int p : parents) n_rows *= cards[p];
    std::vector<int> full(cards.size(), 0);
    for (long long r = 0; r < n_rows; ++r) {
      if (li >= lines.size())
        fail(ln[0], "cpt '" + ln[1].text + "' is missing row " +
                        std::to_string(r + 1) + " of " + std::to_string(n_rows));
      const std::vector<Tok>& row = lines[li++];
      if (static_cast<int>(row.size()) != cards[child])
        fail(row[0], "cpt '" + ln[1].text + "' row needs " +
                         std::to_string(cards[child]) + " probabilities, got " +
                         std::to_string(row.size()));
      decode_row(r, parents, full);
      double sum = 0.0;
      for (int cv = 0; cv < cards[child]; ++cv) {
        double p = parse_real(row[cv], "a probability");
        if (!(p >= 0.0))
          fail(row[cv], "probability must be nonnegative");
        full[child] = cv;
        t[t.index_of(full)] = p;
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol) {
        std::string where = parents.empty()
                                ? "row"
                                : "row for " + assignment_names(parents, full);
        fail(row[0], "cpt '" + ln[1].text + "': " + where + " sums to " +
                         fmt_double(sum));
      }
    }
    cpts.emplace(child, std::move(t));
    for (int p : parents) arcs.emplace_back(p, child);
  }

  void parse_rel(const std::vector<Tok>& ln) {
    if (!cpts.empty()) fail(ln[0], "file mixes cpt and rel blocks");
    if (ln.size() < 2) fail(ln[0], "rel takes at least one variable");
    std::vector<int> listed = scope_of(ln, 1);

    // Column permutation from listed order to the sorted scope.
    std::vector<int> scope = listed;
    std::sort(scope.begin(), scope.end());
    std::vector<int> col_of(scope.size());
    for (std::size_t i = 0; i < scope.size(); ++i)
      col_of[i] = static_cast<int>(
          std::find(listed.begin(), listed.end(), scope[i]) - listed.begin());

    std::vector<std::vector<int>> tuples;
    for (;;) {
      if (li >= lines.size())
        fail(ln[0], "rel block not terminated by 'end'");
      const std::vector<Tok>& row = lines[li++];
      if (row[0].text == "end") {
        if (row.size() != 1) fail(row[1], "unexpected tokens after 'end'");
        break;
      }
      if (row.size() != listed.size())
        fail(row[0], "tuple needs " + std::to_string(listed.size()) +
                         " values, got " + std::to_string(row.size()));
      std::vector<int> tuple(scope.size());
      for (std::size_t i = 0; i < scope.size(); ++i) {
        const Tok& t = row[col_of[i]];
        int val = parse_int(t, 0, "a domain value");
        if (val >= cards[scope[i]])
          fail(t, "value " + t.text + " out of domain of '" +
                      vars[scope[i]].name + "'");
        tuple[i] = val;
      }
      tuples.push_back(std::move(tuple));
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    rels.push_back({std::move(scope), std::move(tuples)});
  }

  void parse_crit(const std::vector<Tok>& ln) {
    if (ln.size() < 2) fail(ln[0], "crit takes at least one variable");
    if (!saw_crit) {
      saw_crit = true;
      first_crit = ln[0];
    }
    std::vector<int> listed = scope_of(ln, 1);
    long long n_vals = 1;
    for (int v : listed) n_vals *= cards[v];

    std::vector<double> values;
    for (;;) {
      if (li >= lines.size())
        fail(ln[0], "crit block not terminated by 'end'");
      const std::vector<Tok>& row = lines[li++];
      if (row[0].text == "end") {
        if (row.size() != 1) fail(row[1], "unexpected tokens after 'end'");
        break;
      }
      for (const Tok& t : row) {
        double v = parse_real(t, "a criterion value");
        if (!std::isfinite(v)) fail(t, "criterion value must be finite");
        values.push_back(v);
      }
    }
    if (static_cast<long long>(values.size()) != n_vals)
      fail(ln[0], "crit block expects " + std::to_string(n_vals) +
                      " values, got " + std::to_string(values.size()));

    std::vector<int> scope = listed;
    std::sort(scope.begin(), scope.end());
    Table t = Table::filled(scope, cards, 0.0);
    std::vector<int> full(cards.size(), 0);
    for (long long i = 0; i < n_vals; ++i) {
      decode_row(i, listed, full);
      t[t.index_of(full)] = values[i];
    }
    crits.push_back(std::move(t));
  }

  Model finish() {
    Model m;
    ModelKind kind = !cpts.empty()
                         ? (saw_decision ? ModelKind::Influence : ModelKind::Belief)
                         : ModelKind::Constraint;
    if (saw_decision && kind == ModelKind::Constraint)
      fail(first_decision, "decision variables require cpt blocks (influence diagram)");
    if (saw_crit && kind == ModelKind::Belief)
      fail(first_crit,
           "criterion blocks require a constraint network or decision variables");
    if (kind != ModelKind::Constraint)
      for (std::size_t v = 0; v < vars.size(); ++v)
        if (!vars[v].is_decision && !cpts.count(static_cast<int>(v)))
          fail(decl_tok[v], "variable '" + vars[v].name + "' has no cpt");
    if (kind == ModelKind::Influence && crits.empty())
      fail(first_decision, "influence diagram needs at least one crit block");

    int n = static_cast<int>(vars.size());
    m.kind = kind;
    if (kind == ModelKind::Constraint) {
      m.constraint.vars = vars;
      m.constraint.constraints = std::move(rels);
      m.constraint.validate();
      if (saw_crit) {
        m.has_criterion = true;
        m.criterion.components = std::move(crits);
      }
      return m;
    }

    DirectedGraph dag(n, std::move(arcs));
    std::vector<Table> tables(n);
    for (auto& [v, t] : cpts) tables[v] = std::move(t);
    if (kind == ModelKind::Belief) {
      m.belief = BeliefNetwork{vars, std::move(dag), std::move(tables)};
      m.belief.validate();
    } else {
      m.influence = InfluenceDiagram{vars, std::move(dag), std::move(tables),
                                     CriterionFunction{std::move(crits)}};
      m.influence.validate();
    }
    return m;
  }
};

// One crit block in canonical layout (sorted scope, one value per line).
void write_crit(std::string& out, const Table& comp,
                const std::vector<Variable>& vars,
                const std::vector<int>& cards) {
  out += "crit";
  for (int v : comp.scope()) out += " " + vars[v].name;
  out += "\n";
  std::vector<int> full(cards.size(), 0);
  Odometer odo(comp.scope(), cards);
  for (; !odo.done(); odo.next()) {
    odo.store(full);
    out += fmt_double(comp.at(full)) + "\n";
  }
  out += "end\n";
}

void write_declarations(std::string& out, const std::vector<Variable>& vars) {
  for (const Variable& v : vars)
    out += std::string(v.is_decision ? "decision " : "var ") + v.name + " " +
           std::to_string(v.card) + "\n";
}

void write_cpts(std::string& out, const std::vector<Variable>& vars,
                const std::vector<int>& cards, const DirectedGraph& dag,
                const std::vector<Table>& cpts) {
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].is_decision) continue;
    const std::vector<int>& parents = dag.parents(static_cast<int>(v));
    out += "cpt " + vars[v].name;
    if (!parents.empty()) {
      out += " |";
      for (int p : parents) out += " " + vars[p].name;
    }
    out += "\n";
    std::vector<int> full(cards.size(), 0);
    Odometer rows(parents, cards);
    for (; !rows.done(); rows.next()) {
      rows.store(full);
      for (int cv = 0; cv < cards[v]; ++cv) {
        full[v] = cv;
        out += (cv ? " " : "") + fmt_double(cpts[v].at(full));
      }
      out += "\n";
    }
  }
}

}  // namespace

const std::vector<Variable>& Model::variables() const {
  switch (kind) {
    case ModelKind::Belief: return belief.vars;
    case ModelKind::Influence: return influence.vars;
    case ModelKind::Constraint: break;
  }
  return constraint.vars;
}

std::vector<int> Model::cards() const {
  std::vector<int> out;
  out.reserve(variables().size());
  for (const Variable& v : variables()) out.push_back(v.card);
  return out;
}

int Model::var_id(const std::string& name) const {
  const std::vector<Variable>& vs = variables();
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i].name == name) return static_cast<int>(i);
  return -1;
}

Model parse_model(const std::string& text) {
  Parser p;
  p.lines = lex(text);
  while (p.li < p.lines.size()) {
    const std::vector<Tok>& ln = p.lines[p.li++];
    const std::string& kw = ln[0].text;
    if (kw == "var") {
      p.declare(ln, false);
    } else if (kw == "decision") {
      p.declare(ln, true);
    } else if (kw == "cpt") {
      p.parse_cpt(ln);
    } else if (kw == "rel") {
      p.parse_rel(ln);
    } else if (kw == "crit") {
      p.parse_crit(ln);
    } else {
      fail(ln[0], "unknown directive '" + kw + "'");
    }
  }
  return p.finish();
}

std::string serialize_model(const Model& m) {
  std::string out;
  const std::vector<Variable>& vars = m.variables();
  std::vector<int> cards = m.cards();
  write_declarations(out, vars);
  switch (m.kind) {
    case ModelKind::Belief:
      write_cpts(out, vars, cards, m.belief.dag, m.belief.cpts);
      break;
    case ModelKind::Influence:
      write_cpts(out, vars, cards, m.influence.dag, m.influence.cpts);
      for (const Table& comp : m.influence.utility.components)
        write_crit(out, comp, vars, cards);
      break;
    case ModelKind::Constraint:
      for (const Constraint& c : m.constraint.constraints) {
        out += "rel";
        for (int v : c.scope) out += " " + vars[v].name;
        out += "\n";
        for (const std::vector<int>& tuple : c.tuples) {
          for (std::size_t i = 0; i < tuple.size(); ++i)
            out += (i ? " " : "") + std::to_string(tuple[i]);
          out += "\n";
        }
        out += "end\n";
      }
      if (m.has_criterion)
        for (const Table& comp : m.criterion.components)
          write_crit(out, comp, vars, cards);
      break;
  }
  return out;
}

CriterionFunction parse_criterion(const std::string& text, const Model& base) {
  Parser p;
  p.lines = lex(text);
  p.vars = base.variables();
  p.cards = base.cards();
  for (std::size_t i = 0; i < p.vars.size(); ++i)
    p.ids[p.vars[i].name] = static_cast<int>(i);
  while (p.li < p.lines.size()) {
    const std::vector<Tok>& ln = p.lines[p.li++];
    if (ln[0].text != "crit")
      fail(ln[0], "criterion files allow only crit blocks");
    p.parse_crit(ln);
  }
  return CriterionFunction{std::move(p.crits)};
}

std::string serialize_criterion(const CriterionFunction& criterion,
                                const Model& base) {
  std::string out;
  for (const Table& comp : criterion.components)
    write_crit(out, comp, base.variables(), base.cards());
  return out;
}

}  // namespace treespan
