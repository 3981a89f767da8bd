#pragma once

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chaseterm/digraph.hpp"
#include "chaseterm/parser.hpp"

namespace testing_support {

using namespace chaseterm;

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline KnowledgeBase load(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse(in);
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "example1.kbr",        "oblivious_skolem.kbr",    "skolem_restricted.kbr",
      "restricted_core.kbr", "weak_acyclicity.kbr",     "dpg_upg.kbr",
      "further_refinements.kbr", "swap.kbr",            "negation_f.kbr",
      "negation_fprime.kbr", "applicability.kbr",       "ground_program.kbr",
      "termination_counterexample.kbr", "self_blocking_pair.kbr",
      "selfblock_unifier.kbr"};
  return names;
}

inline const Rule& rule(const KnowledgeBase& kb, const std::string& id) {
  for (const auto& r : kb.rules)
    if (r.id() == id) return r;
  throw std::runtime_error("no rule " + id);
}

inline Term c(const std::string& n) { return Term::constant(n); }
inline Term v(const std::string& n) { return Term::variable(n); }

inline Atom at(const std::string& p, std::vector<Term> args) {
  return Atom(p, std::move(args));
}

// Brute force: every assignment of source variables to target terms,
// filtered by membership.
inline std::set<Substitution> oracle_homomorphisms(const AtomSet& source,
                                                   const AtomSet& target) {
  auto sv = source.variables();
  std::vector<Term> vars(sv.begin(), sv.end());
  auto tt = target.terms();
  std::vector<Term> terms(tt.begin(), tt.end());
  std::set<Substitution> out;
  if (vars.empty()) {
    if (source.subset_of(target)) out.insert(Substitution());
    return out;
  }
  if (terms.empty()) return out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], terms[idx[i]]);
    if (s.apply(source).subset_of(target)) out.insert(s);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == terms.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

inline bool oracle_entails(const AtomSet& f, const AtomSet& q) {
  return !oracle_homomorphisms(q, f).empty();
}

// Smallest image of an endomorphism, found by exhaustive enumeration.
inline std::size_t oracle_core_size(const AtomSet& f) {
  std::size_t best = f.size();
  for (const auto& h : oracle_homomorphisms(f, f)) best = std::min(best, h.apply(f).size());
  return best;
}

/// Replaces skolem terms by variables (one per distinct term) so that skolem
/// results can be compared with frontier ones.
inline AtomSet abstract_skolem_terms(const AtomSet& s) {
  std::map<Term, Term> names;
  std::vector<Atom> out;
  for (const auto& a : s) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      if (t.is_functional()) {
        auto it = names.find(t);
        if (it == names.end())
          it = names.emplace(t, Term::variable("sk", 900000000 + names.size())).first;
        args.push_back(it->second);
      } else {
        args.push_back(t);
      }
    }
    out.emplace_back(a.predicate, std::move(args));
  }
  AtomSet r;
  for (auto& a : out) r.insert(a);
  return r;
}

struct RandomRules {
  std::mt19937 rng;
  explicit RandomRules(unsigned seed) : rng(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  Atom random_atom(const std::vector<std::string>& preds, const std::vector<Term>& pool) {
    const auto& p = preds[pick(0, static_cast<int>(preds.size()) - 1)];
    int arity = p[0] == 'u' ? 1 : 2;
    std::vector<Term> args;
    for (int i = 0; i < arity; ++i) args.push_back(pool[pick(0, static_cast<int>(pool.size()) - 1)]);
    return Atom(p, args);
  }

  /// Up to `max_rules` positive rules over predicates u1 (unary), b1, b2
  /// (binary), with at most `max_atoms` atoms per side.
  std::vector<Rule> rules(int max_rules, int max_atoms, bool allow_existentials = true) {
    static const std::vector<std::string> preds = {"u1", "b1", "b2"};
    std::vector<Rule> out;
    int n = pick(1, max_rules);
    for (int i = 0; i < n; ++i) {
      std::string id = "g" + std::to_string(i + 1);
      std::vector<Term> body_vars = {Term::variable("X" + std::to_string(i)),
                                     Term::variable("Y" + std::to_string(i))};
      AtomSet body;
      int nb = pick(1, max_atoms);
      for (int k = 0; k < nb; ++k) body.insert(random_atom(preds, body_vars));
      std::vector<Term> head_pool;
      for (const auto& t : body.variables()) head_pool.push_back(t);
      if (allow_existentials && pick(0, 1)) head_pool.push_back(Term::variable("Z" + std::to_string(i)));
      AtomSet head;
      int nh = pick(1, max_atoms);
      for (int k = 0; k < nh; ++k) head.insert(random_atom(preds, head_pool));
      out.emplace_back(id, body, head);
    }
    return out;
  }

  AtomSet facts(int max_atoms) {
    static const std::vector<std::string> preds = {"u1", "b1", "b2"};
    std::vector<Term> pool = {Term::constant("a"), Term::constant("b")};
    AtomSet f;
    int n = pick(1, max_atoms);
    for (int k = 0; k < n; ++k) f.insert(random_atom(preds, pool));
    return f;
  }

  /// Random atomset over ≤ `nvars` variables and constants a, b.
  AtomSet atomset(int max_atoms, int nvars, bool constants = true) {
    static const std::vector<std::string> preds = {"u1", "b1", "b2"};
    std::vector<Term> pool;
    for (int i = 0; i < nvars; ++i) pool.push_back(Term::variable("V" + std::to_string(i)));
    if (constants) {
      pool.push_back(Term::constant("a"));
      pool.push_back(Term::constant("b"));
    }
    AtomSet f;
    int n = pick(1, max_atoms);
    for (int k = 0; k < n; ++k) f.insert(random_atom(preds, pool));
    return f;
  }
};

// Stable models of a ground program by the Gelfond-Lifschitz reduct over
// every candidate subset of the atoms in play.
inline std::vector<AtomSet> oracle_stable_models(const AtomSet& facts, const std::vector<Rule>& rules) {
  AtomSet universe = facts;
  for (const auto& r : rules) universe = universe.united(r.head());
  const auto& atoms = universe.atoms();
  std::vector<AtomSet> out;
  for (std::size_t mask = 0; mask < (1u << atoms.size()); ++mask) {
    AtomSet m;
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (mask & (1u << k)) m.insert(atoms[k]);
    std::vector<const Rule*> reduct;
    for (const auto& r : rules) {
      bool keep = true;
      for (const auto& neg : r.negative())
        if (neg.subset_of(m)) keep = false;
      if (keep) reduct.push_back(&r);
    }
    AtomSet lm = facts;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto* r : reduct)
        if (r->body().subset_of(lm) && !r->head().subset_of(lm)) {
          lm = lm.united(r->head());
          grew = true;
        }
    }
    if (lm == m) out.push_back(m);
  }
  return out;
}

struct GroundProgram {
  AtomSet facts;
  std::vector<Rule> rules;
};

/// Random ground program over at most `max_atoms` atoms u1(a)..un(a) with
/// at most `max_rules` rules. Half of the programs spend two of their rules
/// on an even loop through negation.
inline GroundProgram random_ground_program(std::mt19937& rng, int max_atoms = 6,
                                           int max_rules = 5) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<Atom> pool;
  for (int i = 1; i <= max_atoms; ++i)
    pool.push_back(Atom("u" + std::to_string(i), {Term::constant("a")}));
  auto some = [&](int lo, int hi) {
    AtomSet s;
    int n = pick(lo, hi);
    for (int k = 0; k < n; ++k) s.insert(pool[pick(0, static_cast<int>(pool.size()) - 1)]);
    return s;
  };
  GroundProgram g;
  g.facts = some(0, 2);
  bool loop = max_rules >= 2 && pick(0, 1);
  int n = pick(loop ? 0 : 1, max_rules - (loop ? 2 : 0));
  for (int i = 0; i < n; ++i) {
    std::vector<AtomSet> neg;
    int k = pick(0, 2);
    for (int j = 0; j < k; ++j) neg.push_back(some(1, 2));
    g.rules.emplace_back("g" + std::to_string(i + 1), some(1, 2), some(1, 2), neg);
  }
  if (loop) {
    // x, not p -> q and x, not q -> p.
    AtomSet x = some(1, 1), p = some(1, 1), q = some(1, 1);
    g.facts = g.facts.united(x);
    g.rules.emplace_back("e1", x, q, std::vector<AtomSet>{p});
    g.rules.emplace_back("e2", x, p, std::vector<AtomSet>{q});
  }
  return g;
}

// Weak acyclicity on predicate positions: special edges into existential
// positions must not lie on a cycle.
inline bool oracle_weakly_acyclic(const std::vector<Rule>& rules) {
  std::map<std::pair<std::string, std::size_t>, std::size_t> id;
  auto node = [&](const std::string& p, std::size_t i) {
    return id.emplace(std::make_pair(p, i), id.size()).first->second;
  };
  std::vector<std::tuple<std::size_t, std::size_t, bool>> edges;
  for (const auto& r : rules)
    for (const auto& b : r.body())
      for (std::size_t i = 0; i < b.arity(); ++i) {
        const Term& x = b.args[i];
        if (!r.is_frontier(x)) continue;
        for (const auto& h : r.head())
          for (std::size_t j = 0; j < h.arity(); ++j) {
            if (h.args[j] == x) edges.emplace_back(node(b.predicate, i), node(h.predicate, j), false);
            if (h.args[j].is_variable() && r.is_existential(h.args[j]))
              edges.emplace_back(node(b.predicate, i), node(h.predicate, j), true);
          }
      }
  digraph::Adjacency g(id.size());
  for (auto [a, b, s] : edges) g[a].push_back(b);
  for (auto [a, b, special] : edges)
    if (special && (a == b || digraph::successors(g, b)[a])) return false;
  return true;
}

}  // namespace testing_support
