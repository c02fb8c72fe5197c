#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "treespan/cli.hpp"
#include "treespan/io.hpp"

using namespace treespan;

namespace {

std::string corpus(const std::string& name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path =
      (std::filesystem::temp_directory_path() / ("treespan_" + name)).string();
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
  return path;
}

void expect_parse_error(const std::string& text, int line,
                        const std::string& needle) {
  try {
    parse_model(text);
    FAIL("expected a parse error mentioning '" << needle << "'");
  } catch (const ParseError& e) {
    CHECK(e.line == line);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

// ---------------------------------------------------------------- parsing --

TEST_CASE("canonical serialization is a fixed point of parse") {
  for (const char* name :
       {"eightvar.net", "eightvar.csp", "chain.id"}) {
    std::string canon = serialize_model(parse_model(slurp(corpus(name))));
    CHECK(serialize_model(parse_model(canon)) == canon);
  }
}

TEST_CASE("parent order and layout quirks do not change the canonical form") {
  // same conditional function, parents listed in opposite orders
  std::string canonical =
      "var A 2\nvar B 2\nvar C 2\n"
      "cpt A\n0.5 0.5\ncpt B\n0.4 0.6\n"
      "cpt C | A B\n0.1 0.9\n0.2 0.8\n0.3 0.7\n0.4 0.6\n";
  std::string scrambled =
      "# same network, B listed before A, extra blanks\n"
      "var A 2\n\nvar B 2\nvar C 2\n"
      "cpt A\n 0.5   0.5\ncpt B\n0.4 0.6\n"
      "cpt C | B A\n0.1 0.9\n0.3 0.7\n0.2 0.8\n0.4 0.6   # row comment\n";
  CHECK(serialize_model(parse_model(canonical)) ==
        serialize_model(parse_model(scrambled)));
}

TEST_CASE("relation tuples canonicalize to sorted scope and sorted rows") {
  std::string text =
      "var A 2\nvar B 2\n"
      "rel B A\n1 0\n0 0\n1 0\nend\n";  // duplicates collapse
  CHECK(serialize_model(parse_model(text)) ==
        "var A 2\nvar B 2\nrel A B\n0 0\n0 1\nend\n");
}

TEST_CASE("model kind is inferred from the blocks present") {
  CHECK(parse_model("var A 2\n").kind == ModelKind::Constraint);
  CHECK(parse_model("var A 2\ncpt A\n1 0\n").kind == ModelKind::Belief);
  Model with_crit = parse_model("var A 2\ncrit A\n0 1\nend\n");
  CHECK(with_crit.kind == ModelKind::Constraint);
  CHECK(with_crit.has_criterion);
  CHECK(with_crit.criterion.value({1}) == 1.0);
  Model infl = parse_model(
      "decision D 2\nvar X 2\ncpt X | D\n0.5 0.5\n0.2 0.8\n"
      "crit X\n0 1\nend\n");
  CHECK(infl.kind == ModelKind::Influence);
  CHECK(infl.influence.decision_vars() == std::vector<int>{0});
  CHECK(infl.var_id("X") == 1);
  CHECK(infl.var_id("nope") == -1);
}

TEST_CASE("criterion files resolve names against the base model") {
  Model base = parse_model("var A 2\nvar B 2\n");
  CriterionFunction c =
      parse_criterion("crit B A\n0\n1\n2\n3\nend\n", base);
  REQUIRE(c.components.size() == 1);
  // listed order B-slowest: value(B=0,A=1) = 1, value(B=1,A=0) = 2
  CHECK(c.value({1, 0}) == 1.0);
  CHECK(c.value({0, 1}) == 2.0);
  std::string canon = serialize_criterion(c, base);
  CHECK(canon == "crit A B\n0\n2\n1\n3\nend\n");
  CHECK(serialize_criterion(parse_criterion(canon, base), base) == canon);

  try {
    parse_criterion("var C 2\n", base);
    FAIL("directive other than crit must be rejected");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("only crit blocks") != std::string::npos);
  }
}

TEST_CASE("parse errors carry the offending line") {
  expect_parse_error("flip A 2\n", 1, "unknown directive 'flip'");
  expect_parse_error("var A\n", 1, "var takes a name and a domain size");
  expect_parse_error("var 2x 2\n", 1, "invalid variable name '2x'");
  expect_parse_error("var end 2\n", 1, "invalid variable name 'end'");
  expect_parse_error("var A 2\nvar A 3\n", 2, "duplicate variable 'A'");
  expect_parse_error("var A 0\n", 1, "domain size out of range");
  expect_parse_error("var A x\n", 1, "expected domain size, got 'x'");
  expect_parse_error("var A 2\ncpt B\n1 0\n", 2, "unknown variable 'B'");
  expect_parse_error("var A 2\ncpt A | A\n1 0\n1 0\n", 2,
                     "cannot be its own parent");
  expect_parse_error("var A 2\nvar B 2\ncpt B A\n1 0\n1 0\n", 3,
                     "expected '|' before the parent list");
  expect_parse_error("var A 2\nvar B 2\ncpt B |\n1 0\n", 3,
                     "'|' requires at least one parent");
  expect_parse_error("var A 2\ncpt A\n1 0\ncpt A\n1 0\n", 4,
                     "duplicate cpt for 'A'");
  expect_parse_error("var A 3\ncpt A\n0.5 0.5\n", 3,
                     "row needs 3 probabilities, got 2");
  expect_parse_error("var A 2\ncpt A\n-0.5 1.5\n", 3,
                     "probability must be nonnegative");
  expect_parse_error(
      "var A 2\nvar B 2\ncpt A\n0.5 0.5\ncpt B | A\n0.5 0.5\n0.6 0.5\n", 7,
      "cpt 'B': row for A=1 sums to 1.1");
  expect_parse_error("var A 2\nvar B 2\ncpt B | A\n0.5 0.5\n", 3,
                     "missing row 2 of 2");
  expect_parse_error("var A 2\nrel A\n0\nend\ncpt A\n1 0\n", 5,
                     "file mixes cpt and rel blocks");
  expect_parse_error("var A 2\ncpt A\n1 0\nrel A\n0\nend\n", 4,
                     "file mixes cpt and rel blocks");
  expect_parse_error("var A 2\nrel A\n0\n", 2, "not terminated by 'end'");
  expect_parse_error("var A 2\nrel A\n0\nend now\n", 4,
                     "unexpected tokens after 'end'");
  expect_parse_error("var A 2\nvar B 2\nrel A B\n0\nend\n", 4,
                     "tuple needs 2 values, got 1");
  expect_parse_error("var A 2\nvar B 3\nrel A B\n0 3\nend\n", 4,
                     "value 3 out of domain of 'B'");
  expect_parse_error("var A 2\nrel A A\n0 0\nend\n", 2,
                     "repeated variable 'A' in scope");
  expect_parse_error("var A 2\ncrit A\n1\nend\n", 2,
                     "crit block expects 2 values, got 1");
  expect_parse_error("var A 2\ncrit A\ninf 0\nend\n", 3,
                     "criterion value must be finite");
  expect_parse_error("decision D 2\n", 1,
                     "decision variables require cpt blocks");
  expect_parse_error("var A 2\ncpt A\n0.5 0.5\ncrit A\n0 1\nend\n", 4,
                     "criterion blocks require");
  expect_parse_error("var A 2\nvar B 2\ncpt A\n0.5 0.5\n", 2,
                     "variable 'B' has no cpt");
  expect_parse_error(
      "decision D 2\nvar X 2\ncpt X | D\n0.5 0.5\n0.5 0.5\n", 1,
      "needs at least one crit block");
  expect_parse_error("decision D 2\ncpt D\n0.5 0.5\n", 2,
                     "decision variable 'D' cannot have a cpt");
}

// -------------------------------------------------------------------- cli --

TEST_CASE("analyze: decomposition levels of the eight-variable network") {
  const std::string expected =
      "record=graph vars=8 edges=14\n"
      "record=ordering name=min-fill width=3 order=H,G,F,E,D,B,C,A\n"
      "record=clique index=0 vars=A,B\n"
      "record=clique index=1 vars=B,C,D\n"
      "record=clique index=2 vars=B,D,G\n"
      "record=clique index=3 vars=D,E,F,G\n"
      "record=clique index=4 vars=E,F,G,H\n"
      "record=level index=0 sep=3 clusters=5 width=3 cutset=2 cutset_exact=1"
      " bf_time=4 bf_space=3 cut_time=4 cut_space=3\n"
      "record=level index=1 sep=2 clusters=4 width=4 cutset=2 cutset_exact=1"
      " bf_time=5 bf_space=2 cut_time=4 cut_space=2\n"
      "record=level index=2 sep=1 clusters=2 width=6 cutset=3 cutset_exact=1"
      " bf_time=7 bf_space=1 cut_time=5 cut_space=1\n"
      "record=dominating time=4 space=2\n"
      "record=dominating time=5 space=1\n";
  CliRun r = cli({"analyze", corpus("eightvar.net"), "--format", "records"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == expected);
  CHECK(cli({"analyze", corpus("eightvar.net"), "--format", "records"}).out ==
        r.out);
}

TEST_CASE("analyze: human format") {
  const std::string expected =
      "graph: 8 variables, 14 edges\n"
      "ordering (min-fill): H,G,F,E,D,B,C,A (width 3)\n"
      "cliques: {A,B} {B,C,D} {B,D,G} {D,E,F,G} {E,F,G,H}\n"
      "level 0: sep 3, width 3, cutset 2, brute force (time 4, space 3),"
      " conditioning (time 4, space 3)\n"
      "  clusters: {A,B} {B,C,D} {B,D,G} {D,E,F,G} {E,F,G,H}\n"
      "level 1: sep 2, width 4, cutset 2, brute force (time 5, space 2),"
      " conditioning (time 4, space 2)\n"
      "  clusters: {A,B} {B,C,D} {B,D,G} {D,E,F,G,H}\n"
      "level 2: sep 1, width 6, cutset 3, brute force (time 7, space 1),"
      " conditioning (time 5, space 1)\n"
      "  clusters: {A,B} {B,C,D,E,F,G,H}\n"
      "dominating: (time 4, space 2) (time 5, space 1)\n";
  CliRun r = cli({"analyze", corpus("eightvar.net")});
  CHECK(r.code == 0);
  CHECK(r.out == expected);
}

TEST_CASE("analyze: an explicit ordering is echoed as given") {
  CliRun r = cli({"analyze", corpus("eightvar.net"), "--order",
                  "H,G,F,E,D,B,C,A", "--format", "records"});
  CHECK(r.code == 0);
  CHECK(r.out.find("record=ordering name=given width=3 order=H,G,F,E,D,B,C,A\n") !=
        std::string::npos);
  // --order and --ordering contradict each other
  CliRun both = cli({"analyze", corpus("eightvar.net"), "--order", "A,B",
                     "--ordering", "min-degree"});
  CHECK(both.code == 1);
  CHECK(both.err.substr(0, 6) == "error:");
}

TEST_CASE("analyze: a criterion couples its scope into the graph") {
  CliRun r = cli({"analyze", corpus("eightvar.csp"), "--criterion",
                  corpus("coupling.crit"), "--format", "records"});
  CHECK(r.code == 0);
  CHECK(r.out.find("record=graph vars=8 edges=15\n") != std::string::npos);
  CHECK(r.out.find("record=clique index=0 vars=A,B,G\n") != std::string::npos);
  // without it the first clique is A,B over 14 edges
  CliRun base = cli({"analyze", corpus("eightvar.csp"), "--format", "records"});
  CHECK(base.out.find("record=graph vars=8 edges=14\n") != std::string::npos);
  CHECK(base.out.find("record=clique index=0 vars=A,B\n") != std::string::npos);
}

TEST_CASE("infer belief: records output with oracle agreement") {
  const std::string expected =
      "record=run command=belief level=1 sep=2 strategy=cutset\n"
      "record=belief query=D evidence=A=0,H=1 impossible=0"
      " p_evidence=0.280752084375"
      " posterior=0.367086731446,0.632913268554\n"
      "record=meter cell_ops=158 node_visits=0 peak_scratch_cells=4"
      " peak_scratch_arity=2 peak_persistent_cells=10 peak_total_cells=12\n"
      "record=oracle impossible=0 p_evidence=0.280752084375"
      " posterior=0.367086731446,0.632913268554\n"
      "record=agreement status=PASS\n";
  std::vector<std::string> args = {
      "infer",       "belief", corpus("eightvar.net"),
      "--query",     "D",      "--evidence",
      "A=0,H=1",     "--sep-bound", "2",
      "--strategy",  "cutset", "--format",
      "records",     "--oracle"};
  CliRun r = cli(args);
  CHECK(r.code == 0);
  CHECK(r.out == expected);
  CHECK(cli(args).out == r.out);
}

TEST_CASE("infer mpe: records output with oracle agreement") {
  const std::string expected =
      "record=run command=mpe level=2 sep=1 strategy=brute\n"
      "record=mpe evidence=H=0 impossible=0 probability=0.10072755"
      " assignment=A=0,B=0,C=0,D=0,E=0,F=0,G=0,H=0\n"
      "record=meter cell_ops=464 node_visits=0 peak_scratch_cells=1"
      " peak_scratch_arity=0 peak_persistent_cells=2 peak_total_cells=3\n"
      "record=oracle impossible=0 probability=0.10072755"
      " assignment=A=0,B=0,C=0,D=0,E=0,F=0,G=0,H=0\n"
      "record=agreement status=PASS\n";
  CliRun r = cli({"infer", "mpe", corpus("eightvar.net"), "--evidence", "H=0",
                  "--sep-bound", "1", "--strategy", "brute", "--format",
                  "records", "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.out == expected);
}

TEST_CASE("solve: counting, and the nonseparable decomposition") {
  const std::string expected =
      "record=run command=solve level=0 sep=3 strategy=backtracking\n"
      "record=solve consistent=1 solution=A=0,B=0,C=0,D=0,E=0,F=0,G=0,H=0"
      " count=28\n"
      "record=meter cell_ops=260 node_visits=86 peak_scratch_cells=1"
      " peak_scratch_arity=0 peak_persistent_cells=36 peak_total_cells=37\n";
  CliRun r = cli({"solve", corpus("eightvar.csp"), "--count", "--format",
                  "records"});
  CHECK(r.code == 0);
  CHECK(r.out == expected);

  const std::string nonsep =
      "record=run command=solve decomposition=nonseparable"
      " strategy=backtracking\n"
      "record=solve consistent=1 solution=A=0,B=0,C=0,D=0,E=0,F=0,G=0,H=0"
      " count=28\n"
      "record=meter cell_ops=1804 node_visits=88 peak_scratch_cells=1"
      " peak_scratch_arity=0 peak_persistent_cells=4 peak_total_cells=5\n";
  CliRun n = cli({"solve", corpus("eightvar.csp"), "--count", "--nonseparable",
                  "--format", "records"});
  CHECK(n.code == 0);
  CHECK(n.out == nonsep);
}

TEST_CASE("solve: an inconsistent network names the empty cluster, exit 2") {
  std::string path = write_temp(
      "incons.csp",
      "var A 2\nvar B 2\nrel A B\n0 0\nend\nrel A\n1\nend\nrel B\n0\nend\n");
  CliRun r = cli({"solve", path, "--format", "records"});
  CHECK(r.code == 2);
  CHECK(r.out ==
        "record=run command=solve level=0 sep=0 strategy=backtracking\n"
        "record=solve consistent=0 failed_cluster={A,B}\n"
        "record=meter cell_ops=0 node_visits=4 peak_scratch_cells=0"
        " peak_scratch_arity=0 peak_persistent_cells=0 peak_total_cells=0\n");
}

TEST_CASE("optimize: embedded or side-loaded criterion, oracle agreement") {
  const std::string expected =
      "record=run command=optimize level=0 sep=3 strategy=elim\n"
      "record=optimize consistent=1 value=2"
      " assignment=A=1,B=0,C=1,D=0,E=0,F=0,G=1,H=0\n"
      "record=meter cell_ops=346 node_visits=0 peak_scratch_cells=12"
      " peak_scratch_arity=3 peak_persistent_cells=20 peak_total_cells=27\n"
      "record=oracle consistent=1 value=2\n"
      "record=agreement status=PASS\n";
  CliRun r = cli({"optimize", corpus("eightvar.csp"), "--criterion",
                  corpus("coupling.crit"), "--format", "records", "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.out == expected);

  CliRun missing = cli({"optimize", corpus("eightvar.csp")});
  CHECK(missing.code == 1);
  CHECK(missing.err ==
        "error: optimize needs a criterion (embedded crit block or"
        " --criterion)\n");
}

TEST_CASE("meu: records output") {
  CliRun r = cli({"meu", corpus("chain.id"), "--format", "records"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "record=run command=meu level=0 sep=1 strategy=elim\n"
        "record=meu expected_utility=5.55 decisions=T=1\n"
        "record=meter cell_ops=90 node_visits=0 peak_scratch_cells=2"
        " peak_scratch_arity=1 peak_persistent_cells=8 peak_total_cells=10\n");
}

TEST_CASE("bench: one row per level and tradeoff strategy") {
  CliRun r = cli({"bench", corpus("eightvar.net"), "--format", "records"});
  CHECK(r.code == 0);
  const std::string expected =
      "record=bench level=0 sep=3 strategy=brute cell_ops=168 node_visits=0"
      " peak_scratch_cells=1 peak_scratch_arity=0 peak_persistent_cells=18"
      " peak_total_cells=19 predicted_time=4 predicted_space=3\n"
      "record=bench level=0 sep=3 strategy=cutset cell_ops=218 node_visits=0"
      " peak_scratch_cells=4 peak_scratch_arity=2 peak_persistent_cells=18"
      " peak_total_cells=21 predicted_time=4 predicted_space=3\n"
      "record=bench level=1 sep=2 strategy=brute cell_ops=200 node_visits=0"
      " peak_scratch_cells=1 peak_scratch_arity=0 peak_persistent_cells=10"
      " peak_total_cells=11 predicted_time=5 predicted_space=2\n"
      "record=bench level=1 sep=2 strategy=cutset cell_ops=186 node_visits=0"
      " peak_scratch_cells=3 peak_scratch_arity=1 peak_persistent_cells=10"
      " peak_total_cells=13 predicted_time=4 predicted_space=2\n"
      "record=bench level=2 sep=1 strategy=brute cell_ops=912 node_visits=0"
      " peak_scratch_cells=1 peak_scratch_arity=0 peak_persistent_cells=2"
      " peak_total_cells=3 predicted_time=7 predicted_space=1\n"
      "record=bench level=2 sep=1 strategy=cutset cell_ops=418 node_visits=0"
      " peak_scratch_cells=7 peak_scratch_arity=1 peak_persistent_cells=2"
      " peak_total_cells=9 predicted_time=5 predicted_space=1\n";
  CHECK(r.out == expected);
  CHECK(cli({"bench", corpus("eightvar.net"), "--format", "records"}).out ==
        r.out);
}

TEST_CASE("impossible evidence exits 2 on both query kinds") {
  std::string path = write_temp(
      "zero.net", "var A 2\nvar B 2\ncpt A\n1 0\ncpt B | A\n0.5 0.5\n"
                  "0.25 0.75\n");
  CliRun b = cli({"infer", "belief", path, "--query", "B", "--evidence",
                  "A=1", "--format", "records"});
  CHECK(b.code == 2);
  CHECK(b.out.find("record=belief query=B evidence=A=1 impossible=1\n") !=
        std::string::npos);
  CliRun m = cli({"infer", "mpe", path, "--evidence", "A=1"});
  CHECK(m.code == 2);
  CHECK(m.out.find("impossible evidence\n") != std::string::npos);
}

TEST_CASE("usage and input errors exit 1 with an error line") {
  // unavailable separator bound, listing what exists
  CliRun sep = cli({"infer", "belief", corpus("eightvar.net"), "--query", "D",
                    "--sep-bound", "4"});
  CHECK(sep.code == 1);
  CHECK(sep.err ==
        "error: separator bound 4 not available; available separator bounds:"
        " 3, 2, 1\n");

  CliRun var = cli({"infer", "belief", corpus("eightvar.net"), "--query", "Z"});
  CHECK(var.code == 1);
  CHECK(var.err == "error: unknown variable: Z\n");

  std::string bad = write_temp("bad.csp", "var A 2\nrel A B\n0\nend\n");
  CliRun parse = cli({"solve", bad});
  CHECK(parse.code == 1);
  CHECK(parse.err == "error: " + bad + ": line 2: unknown variable 'B'\n");

  for (std::vector<std::string> args :
       {std::vector<std::string>{"infer", "belief", corpus("eightvar.net"),
                                 "--query", "D", "--evidence", "A=5"},
        std::vector<std::string>{"infer", "belief", corpus("eightvar.net"),
                                 "--query", "D", "--evidence", "A=0,A=1"},
        std::vector<std::string>{"infer", "belief", corpus("eightvar.net"),
                                 "--query", "D", "--evidence", "A"}}) {
    CliRun r = cli(args);
    CHECK(r.code == 1);
    CHECK(r.err.substr(0, 6) == "error:");
  }

  CliRun none = cli({});
  CHECK(none.code == 1);
  CHECK(none.err == "error: A subcommand is required\n");

  CliRun strat = cli({"solve", corpus("eightvar.csp"), "--strategy", "brute"});
  CHECK(strat.code == 1);

  CliRun kind = cli({"solve", corpus("eightvar.net")});
  CHECK(kind.code == 1);
  CHECK(kind.err ==
        "error: solve expects a constraint network; a belief network given\n");
  CHECK(cli({"infer", "belief", corpus("eightvar.csp"), "--query", "A"}).err ==
        "error: infer expects a belief network; a constraint network given\n");
  CHECK(cli({"meu", corpus("eightvar.net")}).err ==
        "error: meu expects an influence diagram; a belief network given\n");
}

TEST_CASE("help exits 0 and shows the subcommands") {
  CliRun r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Usage:") != std::string::npos);
  for (const char* sub : {"analyze", "infer", "solve", "optimize", "meu",
                          "bench"})
    CHECK(r.out.find(sub) != std::string::npos);
}
