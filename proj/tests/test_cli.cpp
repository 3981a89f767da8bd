#include <gtest/gtest.h>

#include <sstream>

#include "chaseterm/cli.hpp"
#include "support.hpp"

using testing_support::fixture_path;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = chaseterm::cli::main(std::move(args), in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

}  // namespace

TEST(Check, ExitCodes) {
  EXPECT_EQ(cli({"check", fixture_path("weak_acyclicity.kbr")}).code, 0);
  EXPECT_EQ(cli({"check", fixture_path("further_refinements.kbr")}).code, 1);
  EXPECT_EQ(cli({"check", fixture_path("dpg_upg.kbr"), "--properties", "aGRD,wa"}).code, 1);
  EXPECT_EQ(cli({"check", fixture_path("dpg_upg.kbr"), "--properties", "wa^U"}).code, 0);
}

TEST(Check, Json) {
  auto r = cli({"check", fixture_path("swap.kbr"), "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["chase"]["skolem"], "guaranteed");
  EXPECT_EQ(j["verdicts"][0]["property"], "aGRD");
  EXPECT_EQ(j["verdicts"][0]["outcome"], "violated");
}

TEST(Check, NegationSwitchesToNegationAware) {
  auto r = cli({"check", fixture_path("self_blocking_pair.kbr")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(cli({"check", fixture_path("self_blocking_pair.kbr"), "--positive-only"}).code, 1);
}

TEST(Check, TextWitness) {
  auto r = cli({"check", fixture_path("dpg_upg.kbr"), "--properties", "aGRD"});
  EXPECT_NE(r.out.find("r1 -> r2 -> r1"), std::string::npos) << r.out;
}

TEST(Run, ChaseFixtures) {
  auto r = cli({"run", fixture_path("oblivious_skolem.kbr")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("terminated"), std::string::npos);
  EXPECT_NE(r.out.find("p(a,b)."), std::string::npos);
  auto o = cli({"run", fixture_path("oblivious_skolem.kbr"), "--chase", "oblivious",
                "--max-rounds", "4"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("budget-exhausted"), std::string::npos);
}

TEST(Run, JsonAndTrace) {
  auto r = cli({"run", fixture_path("skolem_restricted.kbr"), "--chase", "restricted", "--format",
                "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "terminated");
  EXPECT_EQ(j["atoms"].size(), 4u);

  auto t = cli({"run", fixture_path("swap.kbr"), "--trace"});
  auto ls = lines(t.out);
  ASSERT_GE(ls.size(), 2u);
  auto step = nlohmann::json::parse(ls[0]);
  EXPECT_EQ(step["version"], 1);
  EXPECT_EQ(step["rule"], "r");
}

TEST(Run, EmptyRulesAndNegation) {
  auto r = cli({"run", "-"}, "p(a).");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p(a)."), std::string::npos);
  EXPECT_EQ(cli({"run", fixture_path("negation_f.kbr")}).code, 3);
}

TEST(Ask, Answers) {
  EXPECT_EQ(cli({"ask", fixture_path("example1.kbr"), "? hasParent(a, X)."}).out, "yes\n");
  auto no = cli({"ask", fixture_path("oblivious_skolem.kbr"), "p(a,X), p(X,Y)"});
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out, "no\n");
  auto budget = cli({"ask", fixture_path("oblivious_skolem.kbr"), "p(a,X), p(X,Y)", "--chase",
                     "oblivious", "--max-rounds", "5"});
  EXPECT_EQ(budget.code, 2);
  EXPECT_EQ(budget.out, "no-within-budget\n");
}

TEST(Ask, QueryFromFile) {
  auto r = cli({"ask", "-"}, "p(a). r: p(X) -> q(X). ? q(a).");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(cli({"ask", "-"}, "p(a).").code, 3);
}

TEST(Stable, ExhaustiveAndBudget) {
  auto r = cli({"stable", fixture_path("applicability.kbr"), "--chase", "core"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 stable set(s), exhaustive"), std::string::npos) << r.out;
  auto b = cli({"stable", fixture_path("termination_counterexample.kbr"), "--chase", "core",
                "--max-nodes", "200"});
  EXPECT_EQ(b.code, 2);
  auto j = nlohmann::json::parse(
      cli({"stable", fixture_path("ground_program.kbr"), "--format", "json"}).out);
  EXPECT_TRUE(j["exhaustive"].get<bool>());
  EXPECT_EQ(j["stable_sets"].size(), 1u);
  EXPECT_EQ(cli({"stable", fixture_path("negation_f.kbr"), "--chase", "restricted"}).code, 3);
}

TEST(Graph, Formats) {
  auto g = cli({"graph", fixture_path("weak_acyclicity.kbr"), "grd"});
  EXPECT_EQ(g.code, 0);
  EXPECT_NE(g.out.find("\"r2\" -> \"r1\""), std::string::npos) << g.out;
  auto j = nlohmann::json::parse(
      cli({"graph", fixture_path("weak_acyclicity.kbr"), "grd", "--format", "json"}).out);
  EXPECT_EQ(j["edges"].size(), 1u);
  auto u = cli({"graph", fixture_path("dpg_upg.kbr"), "pgu"});
  EXPECT_EQ(u.code, 0);
  EXPECT_EQ(u.out.rfind("digraph", 0), 0u);
  EXPECT_EQ(cli({"graph", "-", "pgf"}, "").code, 0);
  EXPECT_EQ(cli({"graph", "-", "nope"}, "").code, 3);
}

TEST(Errors, Malformed) {
  auto r = cli({"check", "-"}, "p(X.");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("<stdin>: error: line 1"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"run", "/nonexistent.kbr"}).code, 3);
  EXPECT_EQ(cli({}).code, 3);
  EXPECT_EQ(cli({"run", fixture_path("swap.kbr"), "--chase", "bogus"}).code, 3);
}
