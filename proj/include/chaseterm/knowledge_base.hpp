#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaseterm/atom.hpp"
#include "chaseterm/rule.hpp"

namespace chaseterm {

/// Facts, rules and queries of one document. Fact variables are shared
/// labelled nulls; rules are pairwise variable-disjoint.
struct KnowledgeBase {
  AtomSet facts;
  std::vector<Rule> rules;
  std::vector<AtomSet> queries;

  bool has_negation() const {
    for (const auto& r : rules)
      if (!r.is_positive()) return true;
    return false;
  }
};

/// Printable names for the variables of one scope. Base names are used when
/// they are unambiguous.
class VariableNames {
 public:
  VariableNames() = default;
  explicit VariableNames(const std::set<Term>& vars) {
    std::map<std::string, int> uses;
    for (const auto& v : vars) ++uses[v.name()];
    std::set<std::string> taken;
    bool clash = false;
    for (const auto& v : vars) {
      std::string n = uses[v.name()] == 1 ? v.name() : v.str();
      if (!taken.insert(n).second) clash = true;
      names_[v] = n;
    }
    if (clash) {
      int i = 0;
      for (auto& [v, n] : names_) n = "V" + std::to_string(i++);
    }
  }

  std::string term(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::variable: {
        auto it = names_.find(t);
        return it == names_.end() ? t.str() : it->second;
      }
      case Term::Kind::constant:
        return t.name();
      case Term::Kind::functional: {
        std::string out = t.name() + "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ",";
          out += term(t.args()[i]);
        }
        return out + ")";
      }
    }
    return {};
  }

  std::string atom(const Atom& a) const {
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += term(a.args[i]);
    }
    return out + ")";
  }

  std::string atoms(const AtomSet& s, const char* sep = ", ") const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += sep;
      out += atom(s[i]);
    }
    return out;
  }

 private:
  std::map<Term, std::string> names_;
};

inline std::string print_atoms(const AtomSet& s) {
  return VariableNames(s.variables()).atoms(s);
}

inline std::string print_rule(const Rule& r) {
  VariableNames names(r.variables());
  std::string out = r.id() + ": " + names.atoms(r.body());
  for (const auto& n : r.negative()) {
    out += ", not ";
    out += n.size() == 1 ? names.atom(n[0]) : "(" + names.atoms(n) + ")";
  }
  out += " -> " + names.atoms(r.head()) + ".";
  return out;
}

/// Text form of a knowledge base; parse(print(kb)) is isomorphic to kb.
inline std::string print(const KnowledgeBase& kb) {
  std::string out;
  VariableNames fact_names(kb.facts.variables());
  for (const auto& a : kb.facts) out += fact_names.atom(a) + ".\n";
  for (const auto& r : kb.rules) out += print_rule(r) + "\n";
  for (const auto& q : kb.queries)
    out += "? " + VariableNames(q.variables()).atoms(q) + ".\n";
  return out;
}

inline nlohmann::json term_to_json(const Term& t, const VariableNames& names) {
  switch (t.kind()) {
    case Term::Kind::constant:
      return {{"const", t.name()}};
    case Term::Kind::variable:
      return {{"var", names.term(t)}};
    case Term::Kind::functional: {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : t.args()) args.push_back(term_to_json(a, names));
      return {{"fn", t.name()}, {"args", args}};
    }
  }
  return nullptr;
}

inline nlohmann::json atom_to_json(const Atom& a, const VariableNames& names) {
  nlohmann::json args = nlohmann::json::array();
  for (const auto& t : a.args) args.push_back(term_to_json(t, names));
  return {{"pred", a.predicate}, {"args", args}};
}

inline nlohmann::json atoms_to_json(const AtomSet& s, const VariableNames& names) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : s) out.push_back(atom_to_json(a, names));
  return out;
}

inline nlohmann::json atoms_to_json(const AtomSet& s) {
  return atoms_to_json(s, VariableNames(s.variables()));
}

inline nlohmann::json rule_to_json(const Rule& r) {
  VariableNames names(r.variables());
  nlohmann::json negative = nlohmann::json::array();
  for (const auto& n : r.negative()) negative.push_back(atoms_to_json(n, names));
  return {{"id", r.id()},
          {"body", {{"positive", atoms_to_json(r.body(), names)},
                    {"negative", negative}}},
          {"head", atoms_to_json(r.head(), names)}};
}

inline nlohmann::json to_json(const KnowledgeBase& kb) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : kb.rules) rules.push_back(rule_to_json(r));
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : kb.queries) queries.push_back(atoms_to_json(q));
  return {{"version", 1},
          {"facts", atoms_to_json(kb.facts)},
          {"rules", rules},
          {"queries", queries}};
}

}  // namespace chaseterm
