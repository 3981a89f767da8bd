#include <gtest/gtest.h>

#include "chaseterm/acyclicity.hpp"
#include "chaseterm/chase.hpp"
#include "chaseterm/parser.hpp"
#include "support.hpp"

using namespace chaseterm;
using namespace testing_support;

namespace {

Outcome outcome(const AnalysisReport& rep, const std::string& p) {
  const Verdict* v = rep.verdict(p);
  if (!v) throw std::invalid_argument("no verdict " + p);
  return v->outcome;
}

std::map<std::string, Outcome> outcomes(const std::string& fixture) {
  auto rep = analyze(load(fixture).rules);
  std::map<std::string, Outcome> out;
  for (const auto& v : rep.verdicts) out[v.property] = v.outcome;
  return out;
}

constexpr auto S = Outcome::satisfied;
constexpr auto V = Outcome::violated;

bool edge_subset(const PositionGraph& small, const PositionGraph& big) {
  for (const auto& [e, info] : small.edges())
    if (!big.has_edge(e.first, e.second)) return false;
  return true;
}

void expect_valid_witness(const Verdict& v, const PositionGraph& g, const MarkingFunction& y) {
  ASSERT_FALSE(v.cycle.empty());
  auto p = v.cycle.front();
  EXPECT_TRUE(g.nodes()[p].existential);
  auto marked = y.assign(g, p);
  for (std::size_t k = 0; k < v.cycle.size(); ++k) {
    EXPECT_TRUE(marked[v.cycle[k]]);
    EXPECT_TRUE(g.has_edge(v.cycle[k], v.cycle[(k + 1) % v.cycle.size()]));
  }
}

}  // namespace

TEST(PositionGraph, BasicEdges) {
  auto kb = load("example1.kbr");
  auto g = build_position_graph(GraphKind::basic, share(kb.rules));
  // human(X) -> hasParent(X,Y), human(Y): X reaches [hasParent,1] and both
  // Y positions.
  EXPECT_EQ(g.nodes().size(), 4u);
  EXPECT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(g.existential_positions().size(), 2u);
}

TEST(PositionGraph, DependencyAndUnifierEdgesAreSubsets) {
  for (const auto& name : fixture_names()) {
    auto rules = share(pos(load(name).rules));
    auto dep = grd(rules);
    auto f = build_position_graph(GraphKind::full, rules);
    auto d = build_position_graph(GraphKind::dependency, rules, &dep);
    auto u = build_position_graph(GraphKind::unifier, rules, &dep);
    EXPECT_TRUE(edge_subset(d, f)) << name;
    EXPECT_TRUE(edge_subset(u, d)) << name;
    for (const auto& [e, info] : u.edges())
      if (info.transition) EXPECT_FALSE(info.witnesses.empty()) << name;
  }
}

TEST(PositionGraph, UnifierGraphOfDpgUpgIsAcyclic) {
  auto rules = share(load("dpg_upg.kbr").rules);
  auto dep = grd(rules);
  auto d = build_position_graph(GraphKind::dependency, rules, &dep);
  auto u = build_position_graph(GraphKind::unifier, rules, &dep);
  auto comp = digraph::strongly_connected_components(u.adjacency());
  std::set<std::size_t> distinct(comp.begin(), comp.end());
  EXPECT_EQ(distinct.size(), u.nodes().size());
  auto v = check(wa_marking(), d);
  ASSERT_EQ(v.outcome, Outcome::violated);
  EXPECT_EQ(d.label(v.cycle.front()).rfind("r2:H:[t(", 0), 0u) << d.label(v.cycle.front());
}

TEST(PositionGraph, RequiresGrdForRefinedKinds) {
  auto rules = share(load("swap.kbr").rules);
  EXPECT_THROW(build_position_graph(GraphKind::unifier, rules), std::invalid_argument);
}

TEST(Verdicts, WeakAcyclicityExample) {
  auto o = outcomes("weak_acyclicity.kbr");
  EXPECT_EQ(o["wa"], V);
  EXPECT_EQ(o["aGRD"], S);
  EXPECT_EQ(o["wa^D"], S);
  EXPECT_EQ(o["wa^U"], S);
  EXPECT_EQ(o["wa^U+"], S);
}

TEST(Verdicts, DpgUpg) {
  auto o = outcomes("dpg_upg.kbr");
  EXPECT_EQ(o["aGRD"], V);
  EXPECT_EQ(o["wa"], V);
  EXPECT_EQ(o["wa^D"], V);
  EXPECT_EQ(o["wa^U"], S);
  EXPECT_EQ(o["wa^U+"], S);
}

TEST(Verdicts, FurtherRefinements) {
  auto rep = analyze(load("further_refinements.kbr").rules);
  EXPECT_EQ(outcome(rep, "wa^U"), V);
  const Verdict* up = rep.verdict("wa^U+");
  ASSERT_NE(up, nullptr);
  EXPECT_EQ(up->outcome, V);
  std::vector<std::string> ids;
  for (auto r : up->rule_cycle) ids.push_back(rep.rules[r]->id());
  EXPECT_EQ(ids, (std::vector<std::string>{"r1", "r2", "r3", "r1"}));
  auto again = compatible_sequence(up->rule_cycle, up->sequence, rep.pgu);
  EXPECT_TRUE(again.compatible);
}

TEST(Verdicts, SwapAndExample1) {
  auto swap = outcomes("swap.kbr");
  EXPECT_EQ(swap["wa"], S);
  EXPECT_EQ(swap["aGRD"], V);
  auto ex = outcomes("example1.kbr");
  for (const auto& [p, o] : ex) EXPECT_EQ(o, V) << p;
}

TEST(Verdicts, GuaranteeMatrix) {
  auto wa = analyze(load("weak_acyclicity.kbr").rules).guarantees();
  EXPECT_TRUE(wa["oblivious"]);
  EXPECT_TRUE(wa["core"]);
  auto swap = analyze(load("swap.kbr").rules).guarantees();
  EXPECT_FALSE(swap["oblivious"]);
  EXPECT_TRUE(swap["skolem"]);
  auto ex = analyze(load("example1.kbr").rules).guarantees();
  for (const auto& [c, ok] : ex) EXPECT_FALSE(ok) << c;
}

TEST(Verdicts, MarkNothingIsNeverViolated) {
  MarkingFunction none{"none", [](const PositionGraph& g, std::size_t) {
                         return std::vector<bool>(g.nodes().size(), false);
                       }};
  for (const auto& name : fixture_names()) {
    auto f = build_position_graph(GraphKind::full, share(pos(load(name).rules)));
    EXPECT_EQ(check(none, f).outcome, Outcome::satisfied) << name;
  }
}

TEST(Compatibility, PieceUnifiersAreCompatible) {
  auto rules = share(load("dpg_upg.kbr").rules);
  auto dep = grd(rules);
  auto u = build_position_graph(GraphKind::unifier, rules, &dep);
  for (const auto& [e, info] : u.edges())
    for (const auto& w : info.witnesses) EXPECT_TRUE(compatible(w, u));
}

TEST(Compatibility, RelaxedUnifierNeedsAPath) {
  // The relaxed unifier of dpg_upg merges U with the existential Z; nothing
  // leads from [p(Z,Y),1] to [q(U),1] without crossing another existential.
  auto rules = share(load("dpg_upg.kbr").rules);
  auto dep = grd(rules);
  auto u = build_position_graph(GraphKind::unifier, rules, &dep);
  UnifierOptions all;
  all.require_piece = false;
  bool seen = false;
  for (const auto& w : unifiers(rules[1], rules[0], all))
    if (!w.piece) {
      seen = true;
      EXPECT_FALSE(compatible(w, u));
    }
  EXPECT_TRUE(seen);
}

TEST(Properties, WaMatchesPredicatePositionOracle) {
  RandomRules gen(11);
  for (int i = 0; i < 300; ++i) {
    auto rules = gen.rules(3, 2);
    auto f = build_position_graph(GraphKind::full, share(rules));
    bool ours = check(wa_marking(), f).outcome == Outcome::satisfied;
    EXPECT_EQ(ours, oracle_weakly_acyclic(rules)) << i;
  }
}

TEST(Properties, RefinementsAreMonotone) {
  RandomRules gen(5);
  for (int i = 0; i < 120; ++i) {
    auto rules = gen.rules(3, 2);
    auto rep = analyze(rules);
    auto sat = [&](const char* p) { return outcome(rep, p) == Outcome::satisfied; };
    if (sat("wa")) EXPECT_TRUE(sat("wa^D")) << i;
    if (sat("aGRD")) EXPECT_TRUE(sat("wa^D")) << i;
    if (sat("wa^D")) EXPECT_TRUE(sat("wa^U")) << i;
    if (sat("wa^U")) EXPECT_TRUE(sat("wa^U+")) << i;
    auto wa = wa_marking();
    for (const auto& v : rep.verdicts) {
      if (v.outcome != Outcome::violated || v.cycle.empty()) continue;
      const PositionGraph& g = v.property == "wa" ? rep.pgf : v.property == "wa^D" ? rep.pgd : rep.pgu;
      expect_valid_witness(v, g, wa);
    }
  }
}

TEST(Properties, SatisfiedImpliesSkolemTermination) {
  RandomRules gen(3);
  Budget b;
  b.max_rounds = 40;
  b.max_steps = 5000;
  int certified = 0;
  for (int i = 0; i < 150; ++i) {
    auto rules = gen.rules(3, 2);
    auto rep = analyze(rules);
    if (!rep.any_satisfied()) continue;
    ++certified;
    auto facts = gen.facts(4);
    for (auto c : {Criterion::skolem, Criterion::restricted, Criterion::core})
      EXPECT_EQ(run_chase(facts, rules, c, b).status, ChaseStatus::terminated) << i;
    if (rep.guarantees()["oblivious"])
      EXPECT_EQ(run_chase(facts, rules, Criterion::oblivious, b).status, ChaseStatus::terminated);
  }
  EXPECT_GT(certified, 20);
}

TEST(Export, DotAndJson) {
  auto rep = analyze(load("dpg_upg.kbr").rules);
  auto dot = to_dot(rep.pgu);
  EXPECT_EQ(dot.rfind("digraph pgu {", 0), 0u);
  auto j = to_json(rep);
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["verdicts"].size(), 5u);
  EXPECT_EQ(j["verdicts"][0]["property"], "aGRD");
  EXPECT_TRUE(j["verdicts"][0]["witness"]["rules"].is_array());
  EXPECT_EQ(to_json(rep.grd)["edges"].size(), 2u);
}
