#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaseterm/acyclicity.hpp"
#include "chaseterm/chase.hpp"
#include "chaseterm/homomorphism.hpp"
#include "chaseterm/knowledge_base.hpp"
#include "chaseterm/rule.hpp"

namespace chaseterm {

/// Only these two criteria give stable sets that do not depend on how an
/// equivalent fact base is written.
inline void require_stable_criterion(Criterion c) {
  if (c == Criterion::skolem || c == Criterion::core) return;
  throw std::invalid_argument(
      "stable sets need the skolem or core chase; the " + std::string(to_string(c)) +
      " chase may produce non-equivalent results from equivalent knowledge bases");
}

struct TreeBudget {
  std::size_t max_depth = 64;
  std::size_t max_nodes = 10000;
};

/// One edge of a chase-tree branch. `negative` is 0 for the positive child,
/// i for the child blocking the rule with its i-th negative body.
struct TreeStep {
  std::string rule_id;
  Substitution trigger;
  std::size_t negative = 0;
};

struct StableSet {
  AtomSet atoms;
  std::vector<TreeStep> branch;
  Criterion criterion = Criterion::skolem;
};

struct StableResult {
  std::vector<StableSet> sets;
  bool exhaustive = true;
  std::size_t explored_nodes = 0;
};

namespace detail {

struct TreeNode {
  AtomSet in;
  std::vector<AtomSet> out;
  std::vector<AtomSet> mbt;
  // Trigger keys (rule, body assignment) already expanded on this branch,
  // and the order in which triggers first became available.
  std::set<std::pair<std::size_t, Substitution>> handled;
  std::map<std::pair<std::size_t, Substitution>, std::size_t> birth;
  std::vector<TreeStep> branch;
};

inline bool has_subset_in(const std::vector<AtomSet>& sets, const AtomSet& s) {
  for (const auto& m : sets)
    if (s.subset_of(m)) return true;
  return false;
}

inline bool unsound(const TreeNode& n) {
  for (const auto& o : n.out)
    if (o.subset_of(n.in) || has_subset_in(n.mbt, o)) return true;
  return false;
}

inline bool stable(const TreeNode& n) {
  for (const auto& m : n.mbt)
    if (!m.subset_of(n.in)) return false;
  return true;
}

class TreeExplorer {
 public:
  TreeExplorer(std::vector<Rule> rules, Criterion c, TreeBudget budget)
      : rules_(std::move(rules)), criterion_(c), budget_(budget) {
    for (const auto& r : rules_)
      for (const auto& a : r.head()) producible_.insert(a.predicate);
  }

  StableResult run(const AtomSet& facts) {
    TreeNode root;
    root.in = criterion_ == Criterion::core ? core(facts) : facts;
    discover(root);
    explore(root);
    return std::move(result_);
  }

 private:
  using Key = std::pair<std::size_t, Substitution>;

  struct Candidate {
    Key key;
    AtomSet next;
    Substitution retraction;
  };

  // Records newly available triggers in discovery order.
  void discover(TreeNode& n) {
    for (std::size_t r = 0; r < rules_.size(); ++r)
      for_each_homomorphism(rules_[r].body(), n.in, {}, [&](const Substitution& pi) {
        Key k{r, pi.normalized()};
        if (!n.birth.count(k)) n.birth.emplace(k, counter_++);
        return true;
      });
  }

  bool blocked(const Rule& r, const Substitution& pi, const AtomSet& in) const {
    for (const auto& neg : r.negative())
      if (pi.apply(neg).subset_of(in)) return true;
    return false;
  }

  // The earliest-born trigger that is unhandled, unblocked and produces
  // something new.
  std::optional<Candidate> next_trigger(const TreeNode& n) const {
    std::vector<std::pair<std::size_t, Key>> order;
    for (const auto& [k, b] : n.birth) order.emplace_back(b, k);
    std::sort(order.begin(), order.end());
    for (const auto& [b, k] : order) {
      if (n.handled.count(k)) continue;
      const Rule& r = rules_[k.first];
      if (!is_body_homomorphism(r, k.second, n.in)) continue;
      if (blocked(r, k.second, n.in)) continue;
      Candidate c{k, {}, {}};
      if (criterion_ == Criterion::core) {
        Rule p = pos(r);
        if (!is_useful(k.second, p, n.in)) continue;
        auto folded = core_with_retraction(apply(n.in, p, k.second));
        c.next = std::move(folded.atoms);
        c.retraction = std::move(folded.retraction);
      } else {
        AtomSet head = k.second.apply(r.head());
        if (head.subset_of(n.in)) continue;
        c.next = n.in.united(head);
      }
      return c;
    }
    return std::nullopt;
  }

  static Key transform(const Key& k, const Substitution& sigma) {
    Substitution out;
    for (const auto& [v, t] : k.second) out.bind(v, sigma.apply(t));
    return {k.first, out};
  }

  // Applies a folding retraction to every label of the node.
  static void simplify(TreeNode& n, const Substitution& sigma) {
    for (auto& o : n.out) o = sigma.apply(o);
    for (auto& m : n.mbt) m = sigma.apply(m);
    std::set<Key> handled;
    for (const auto& k : n.handled) handled.insert(transform(k, sigma));
    n.handled = std::move(handled);
    std::map<Key, std::size_t> birth;
    for (const auto& [k, b] : n.birth) {
      auto [it, fresh] = birth.emplace(transform(k, sigma), b);
      if (!fresh) it->second = std::min(it->second, b);
    }
    n.birth = std::move(birth);
  }

  // An obligation with an atom whose predicate no rule head has is never met.
  bool unprovable(const TreeNode& n) const {
    for (const auto& m : n.mbt)
      for (const auto& a : m)
        if (!n.in.contains(a) && !producible_.count(a.predicate)) return true;
    return false;
  }

  void explore(TreeNode& n) {
    if (++result_.explored_nodes > budget_.max_nodes) {
      result_.exhaustive = false;
      return;
    }
    if (unsound(n) || unprovable(n)) return;
    auto cand = next_trigger(n);
    if (!cand) {
      if (stable(n)) record(n);
      return;
    }
    if (n.branch.size() >= budget_.max_depth) {
      result_.exhaustive = false;
      return;
    }
    const Rule& r = rules_[cand->key.first];
    const Substitution& pi = cand->key.second;

    TreeNode plus = n;
    plus.handled.insert(cand->key);
    plus.in = cand->next;
    for (const auto& neg : r.negative()) plus.out.push_back(pi.apply(neg));
    plus.branch.push_back({r.id(), pi, 0});
    if (criterion_ == Criterion::core) simplify(plus, cand->retraction);
    discover(plus);
    explore(plus);

    for (std::size_t i = 0; i < r.negative().size(); ++i) {
      TreeNode minus = n;
      minus.handled.insert(cand->key);
      minus.mbt.push_back(pi.apply(r.negative()[i]));
      minus.branch.push_back({r.id(), pi, i + 1});
      explore(minus);
    }
  }

  void record(const TreeNode& n) {
    for (const auto& s : result_.sets)
      if (isomorphic(s.atoms, n.in)) return;
    result_.sets.push_back({n.in, n.branch, criterion_});
  }

  std::vector<Rule> rules_;
  Criterion criterion_;
  TreeBudget budget_;
  std::set<std::string> producible_;
  std::size_t counter_ = 0;
  StableResult result_;
};

}  // namespace detail

/// C-stable sets of (facts, rules) found by a depth-first walk of the
/// chase tree, positive child first. `exhaustive` is false when a budget
/// cut some branch short.
inline StableResult stable_sets(const AtomSet& facts, const std::vector<Rule>& rules, Criterion c,
                                TreeBudget budget = {}) {
  require_stable_criterion(c);
  if (c == Criterion::skolem) {
    std::vector<Rule> sk;
    for (const auto& r : rules) sk.push_back(skolemize(r));
    return detail::TreeExplorer(std::move(sk), c, budget).run(skolemize_facts(facts));
  }
  return detail::TreeExplorer(rules, c, budget).run(facts);
}

inline StableResult stable_sets(const KnowledgeBase& kb, Criterion c, TreeBudget budget = {}) {
  return stable_sets(kb.facts, kb.rules, c, budget);
}

/// Acyclicity analysis for rules with negation: self-blocking rules are
/// dropped, then the negation-aware GRD, PG^U and U+ are used.
inline AnalysisReport nm_analyze(const std::vector<Rule>& rules, AnalysisOptions opts = {}) {
  std::vector<Rule> kept;
  std::vector<std::string> dropped;
  for (const auto& r : rules) {
    if (self_blocking(r))
      dropped.push_back(r.id());
    else
      kept.push_back(r);
  }
  opts.negation_aware = true;
  auto rep = analyze(share(kept), opts);
  rep.dropped = std::move(dropped);
  return rep;
}

/// Stable-finiteness certified by a negation-aware report.
inline std::map<std::string, bool> stable_guarantees(const AnalysisReport& rep) {
  bool any = rep.any_satisfied();
  return {{"skolem-stable-finite", any}, {"core-stable-finite", any}};
}

inline nlohmann::json to_json(const StableResult& r) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : r.sets)
    sets.push_back({{"atoms", atoms_to_json(s.atoms)}, {"criterion", to_string(s.criterion)}});
  return {{"version", 1},
          {"stable_sets", sets},
          {"exhaustive", r.exhaustive},
          {"explored_nodes", r.explored_nodes}};
}

}  // namespace chaseterm
