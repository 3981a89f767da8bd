#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaseterm/acyclicity.hpp"
#include "chaseterm/chase.hpp"
#include "chaseterm/nonmonotonic.hpp"
#include "chaseterm/parser.hpp"

namespace chaseterm::cli {

// Exit codes shared by all commands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_unknown = 2;
inline constexpr int exit_error = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string path;
  std::string query;
  std::string kind;
  std::string chase = "skolem";
  std::string properties;
  std::string format = "text";
  bool negation_aware = false;
  bool positive_only = false;
  bool trace = false;
  std::size_t max_rounds = Budget{}.max_rounds;
  std::size_t max_steps = Budget{}.max_steps;
  std::size_t max_nodes = TreeBudget{}.max_nodes;
  std::size_t max_depth = TreeBudget{}.max_depth;
};

inline KnowledgeBase load(const std::string& path, std::istream& in) {
  if (path == "-") return parse(in);
  std::ifstream file(path);
  if (!file) throw UsageError("cannot open " + path);
  return parse(file);
}

inline Criterion criterion(const Options& o) {
  auto c = parse_criterion(o.chase);
  if (!c) throw UsageError("unknown chase variant " + o.chase);
  return *c;
}

inline void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const auto* f : allowed)
    if (o.format == f) return;
  throw UsageError("format " + o.format + " is not available for this command");
}

inline std::vector<std::string> split_properties(const std::string& s) {
  if (s.empty()) return all_properties();
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    if (p.empty()) continue;
    bool known = false;
    for (const auto& q : all_properties()) known |= q == p;
    if (!known) throw UsageError("unknown property " + p);
    out.push_back(p);
  }
  return out;
}

inline std::string facts_text(const AtomSet& atoms) {
  VariableNames names(atoms.variables());
  std::string out;
  for (const auto& a : atoms) out += names.atom(a) + ".\n";
  return out;
}

inline std::string witness_text(const Verdict& v, const AnalysisReport& rep) {
  auto j = verdict_to_json(v, rep);
  if (!j.contains("witness")) return j.value("note", "");
  const auto& w = j["witness"];
  std::string out;
  auto join = [](const nlohmann::json& a, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? sep : "") + a[i].get<std::string>();
    return s;
  };
  // Cycles are printed closed, back to their first node.
  auto closed = [&](nlohmann::json a) {
    if (a.front() != a.back() || a.size() == 1) a.push_back(a.front());
    return join(a, " -> ");
  };
  if (w.contains("cycle")) out = closed(w["cycle"]);
  else if (w.contains("rules")) out = closed(w["rules"]);
  if (w.contains("unifiers")) out += "  via " + join(w["rules"], " ") + " with " + join(w["unifiers"], " ");
  return out;
}

inline int check(const Options& o, std::istream& in, std::ostream& out) {
  require_format(o, {"text", "json"});
  auto kb = load(o.path, in);
  AnalysisOptions opts;
  opts.properties = split_properties(o.properties);
  bool nm = (kb.has_negation() && !o.positive_only) || o.negation_aware;
  AnalysisReport rep = nm ? nm_analyze(kb.rules, opts) : analyze(kb.rules, opts);
  if (o.format == "json") {
    auto j = to_json(rep);
    if (nm) {
      nlohmann::json g = nlohmann::json::object();
      for (const auto& [k, ok] : stable_guarantees(rep)) g[k] = ok ? "guaranteed" : "not-guaranteed";
      j["stable"] = g;
    }
    out << j.dump(2) << "\n";
  } else {
    if (nm) {
      out << "negation-aware analysis";
      if (!rep.dropped.empty()) {
        out << " (self-blocking rules dropped:";
        for (const auto& d : rep.dropped) out << " " << d;
        out << ")";
      }
      out << "\n";
    }
    for (const auto& v : rep.verdicts) {
      out << v.property << std::string(8 - std::min<std::size_t>(7, v.property.size()), ' ')
          << to_string(v.outcome);
      auto w = witness_text(v, rep);
      if (!w.empty()) out << "  " << w;
      out << "\n";
    }
    out << "\n";
    if (nm) {
      for (const auto& [k, ok] : stable_guarantees(rep))
        out << k << "  " << (ok ? "guaranteed" : "not-guaranteed") << "\n";
    } else {
      for (auto c : all_criteria) {
        std::string name(to_string(c));
        out << name << std::string(12 - name.size(), ' ')
            << (rep.guarantees()[name] ? "guaranteed" : "not-guaranteed") << "\n";
      }
    }
  }
  bool unknown = false;
  for (const auto& v : rep.verdicts) {
    if (v.outcome == Outcome::satisfied) return exit_ok;
    unknown |= v.outcome == Outcome::unknown;
  }
  return unknown ? exit_unknown : exit_negative;
}

inline Budget budget(const Options& o) {
  Budget b;
  b.max_rounds = o.max_rounds;
  b.max_steps = o.max_steps;
  return b;
}

inline int run(const Options& o, std::istream& in, std::ostream& out) {
  require_format(o, {"text", "json"});
  auto kb = load(o.path, in);
  if (kb.has_negation()) throw UsageError("rules with negation need the stable command");
  auto res = run_chase(kb.facts, kb.rules, criterion(o), budget(o));
  if (o.trace)
    for (const auto& st : res.trace) out << step_to_json(st).dump() << "\n";
  if (o.format == "json") {
    out << nlohmann::json{{"version", 1},
                          {"status", to_string(res.status)},
                          {"rounds", res.rounds},
                          {"steps", res.steps},
                          {"atoms", atoms_to_json(res.produced)}}
               .dump()
        << "\n";
  } else {
    out << "% " << to_string(res.status) << " after " << res.rounds << " rounds, " << res.steps
        << " steps\n"
        << facts_text(res.produced);
  }
  return res.status == ChaseStatus::terminated ? exit_ok : exit_unknown;
}

inline std::string strip_query(std::string q) {
  auto trim = [](std::string& s) {
    s.erase(0, s.find_first_not_of(" \t\n"));
    s.erase(s.find_last_not_of(" \t\n") + 1);
  };
  trim(q);
  if (!q.empty() && q.front() == '?') q.erase(0, 1);
  trim(q);
  if (!q.empty() && q.back() == '.') q.pop_back();
  return q;
}

inline int ask(const Options& o, std::istream& in, std::ostream& out) {
  require_format(o, {"text", "json"});
  auto kb = load(o.path, in);
  if (kb.has_negation()) throw UsageError("rules with negation need the stable command");
  AtomSet q;
  if (!o.query.empty()) {
    q = parse_query(strip_query(o.query));
  } else if (!kb.queries.empty()) {
    q = kb.queries.front();
  } else {
    throw UsageError("no query given and none in the file");
  }
  auto a = answer(kb.facts, kb.rules, q, criterion(o), budget(o));
  if (o.format == "json")
    out << nlohmann::json{{"version", 1}, {"answer", to_string(a.answer)}, {"round", a.round}}.dump()
        << "\n";
  else
    out << to_string(a.answer) << "\n";
  switch (a.answer) {
    case Answer::yes: return exit_ok;
    case Answer::no: return exit_negative;
    case Answer::no_within_budget: return exit_unknown;
  }
  return exit_error;
}

inline int stable(const Options& o, std::istream& in, std::ostream& out) {
  require_format(o, {"text", "json"});
  auto c = criterion(o);
  require_stable_criterion(c);
  auto kb = load(o.path, in);
  TreeBudget b;
  b.max_nodes = o.max_nodes;
  b.max_depth = o.max_depth;
  auto r = stable_sets(kb, c, b);
  if (o.format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < r.sets.size(); ++i)
      out << "% stable set " << i + 1 << "\n" << facts_text(r.sets[i].atoms);
    out << "% " << r.sets.size() << " stable set(s), " << (r.exhaustive ? "exhaustive" : "budget exhausted")
        << ", " << r.explored_nodes << " nodes\n";
  }
  return r.exhaustive ? exit_ok : exit_unknown;
}

inline int graph(const Options& o, std::istream& in, std::ostream& out) {
  std::string format = o.format == "text" ? "dot" : o.format;
  if (format != "dot" && format != "json") throw UsageError("graph output is dot or json");
  auto kb = load(o.path, in);
  std::vector<Rule> rules;
  for (const auto& r : kb.rules)
    if (!(o.negation_aware && self_blocking(r))) rules.push_back(r);
  auto shared = share(o.negation_aware ? rules : pos(rules));
  DependencyOptions dopts;
  dopts.negation_aware = o.negation_aware;
  auto g = grd(shared, dopts);
  if (o.kind == "grd") {
    out << (format == "dot" ? to_dot(g) : to_json(g).dump(2) + "\n");
    return exit_ok;
  }
  GraphKind kind;
  if (o.kind == "pgf") kind = GraphKind::full;
  else if (o.kind == "pgd") kind = GraphKind::dependency;
  else if (o.kind == "pgu") kind = GraphKind::unifier;
  else throw UsageError("unknown graph kind " + o.kind);
  GraphOptions gopts;
  gopts.negation_aware = o.negation_aware;
  auto pg = build_position_graph(kind, shared, &g, gopts);
  out << (format == "dot" ? to_dot(pg) : to_json(pg).dump(2) + "\n");
  return exit_ok;
}

/// Runs one invocation. `args` excludes the program name.
inline int main(std::vector<std::string> args, std::istream& in, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Chase termination analysis and stable sets for existential rules", "chaseterm"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("path", o.path, "Knowledge base file, or - for stdin")->required();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "dot"}));
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--chase", o.chase, "Chase variant")
        ->check(CLI::IsMember({"oblivious", "frontier", "skolem", "restricted", "core"}));
    sub->add_option("--max-rounds", o.max_rounds, "Round budget");
    sub->add_option("--max-steps", o.max_steps, "Rule application budget");
  };

  auto* c_check = app.add_subcommand("check", "Decide acyclicity properties");
  add_common(c_check);
  c_check->add_option("--properties", o.properties, "Comma-separated properties (default: all)");
  c_check->add_flag("--negation-aware", o.negation_aware, "Use the negation-aware analysis");
  c_check->add_flag("--positive-only", o.positive_only, "Analyze pos() of rules with negation");

  auto* c_run = app.add_subcommand("run", "Saturate the facts with the rules");
  add_common(c_run);
  add_budget(c_run);
  c_run->add_flag("--trace", o.trace, "Print every derivation step as a JSON line");

  auto* c_ask = app.add_subcommand("ask", "Answer a conjunctive query");
  add_common(c_ask);
  c_ask->add_option("query", o.query, "Query such as \"? p(a, X).\" (default: first in file)");
  add_budget(c_ask);

  auto* c_stable = app.add_subcommand("stable", "Enumerate stable sets");
  add_common(c_stable);
  c_stable->add_option("--chase", o.chase, "skolem or core")
      ->check(CLI::IsMember({"oblivious", "frontier", "skolem", "restricted", "core"}));
  c_stable->add_option("--max-nodes", o.max_nodes, "Chase-tree node budget");
  c_stable->add_option("--max-depth", o.max_depth, "Chase-tree depth budget");

  auto* c_graph = app.add_subcommand("graph", "Print a dependency or position graph");
  add_common(c_graph);
  c_graph->add_option("kind", o.kind, "grd, pgf, pgd or pgu")
      ->required()
      ->check(CLI::IsMember({"grd", "pgf", "pgd", "pgu"}));
  c_graph->add_flag("--negation-aware", o.negation_aware, "Drop self-blocking rules and unifiers");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_error;
  }

  try {
    if (c_check->parsed()) return check(o, in, out);
    if (c_run->parsed()) return run(o, in, out);
    if (c_ask->parsed()) return ask(o, in, out);
    if (c_stable->parsed()) return stable(o, in, out);
    return graph(o, in, out);
  } catch (const ParseError& e) {
    err << (o.path == "-" ? "<stdin>" : o.path) << ": error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return exit_error;
}

}  // namespace chaseterm::cli
