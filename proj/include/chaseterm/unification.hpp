#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaseterm/chase.hpp"
#include "chaseterm/digraph.hpp"
#include "chaseterm/homomorphism.hpp"
#include "chaseterm/rule.hpp"

namespace chaseterm {

using RulePtr = std::shared_ptr<const Rule>;

inline std::vector<RulePtr> share(const std::vector<Rule>& rules) {
  std::vector<RulePtr> out;
  for (const auto& r : rules) out.push_back(std::make_shared<const Rule>(r));
  return out;
}

/// A unifier of part of the consumer's body with part of the producer's
/// head, kept as a partition of their terms plus the induced substitution.
struct Unifier {
  RulePtr producer;  // head side
  RulePtr consumer;  // body side
  std::vector<std::size_t> body_part;  // indices into consumer->body()
  std::vector<std::size_t> head_part;  // indices into producer->head()
  std::vector<std::vector<Term>> classes;
  Substitution mu;
  bool piece = false;

  Term apply(const Term& t) const { return mu.apply(t); }
  AtomSet apply(const AtomSet& s) const { return mu.apply(s); }

  AtomSet body_atoms() const {
    AtomSet out;
    for (auto i : body_part) out.insert(consumer->body()[i]);
    return out;
  }
  AtomSet head_atoms() const {
    AtomSet out;
    for (auto i : head_part) out.insert(producer->head()[i]);
    return out;
  }

  const std::vector<Term>* class_of(const Term& t) const {
    for (const auto& c : classes)
      if (std::find(c.begin(), c.end(), t) != c.end()) return &c;
    return nullptr;
  }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& c : classes) {
      if (c.size() < 2) continue;
      if (!first) out += ", ";
      first = false;
      out += "{";
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += c[i].str();
      }
      out += "}";
    }
    return out + "}";
  }
};

/// Variables of `consumer`'s body part that also occur in the rest of its body.
inline std::set<Term> separating_variables(const Rule& consumer,
                                           const std::vector<std::size_t>& body_part) {
  std::set<Term> inside, outside;
  for (std::size_t i = 0; i < consumer.body().size(); ++i) {
    bool in = std::find(body_part.begin(), body_part.end(), i) != body_part.end();
    for (const auto& t : consumer.body()[i].args) detail::collect_variables(t, in ? inside : outside);
  }
  std::set<Term> out;
  for (const auto& v : inside)
    if (outside.count(v)) out.insert(v);
  return out;
}

/// A class holding an existential z of the producer must hold no constant,
/// no other variable of the producer's head and no separating variable.
inline bool is_admissible(const Unifier& u) {
  auto separating = separating_variables(*u.consumer, u.body_part);
  auto head_vars = u.producer->head().variables();
  for (const auto& c : u.classes) {
    for (const auto& z : c) {
      if (!z.is_variable() || !u.producer->is_existential(z)) continue;
      for (const auto& t : c) {
        if (t == z) continue;
        if (!t.is_variable()) return false;
        if (head_vars.count(t)) return false;
        if (separating.count(t)) return false;
      }
    }
  }
  return true;
}

namespace detail {

class UnionFind {
 public:
  std::size_t id(const Term& t) {
    auto [it, fresh] = ids_.emplace(t, parent_.size());
    if (fresh) {
      parent_.push_back(parent_.size());
      terms_.push_back(t);
    }
    return it->second;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(const Term& a, const Term& b) {
    auto x = find(id(a)), y = find(id(b));
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }
  std::vector<std::vector<Term>> classes() {
    std::map<std::size_t, std::vector<Term>> groups;
    for (std::size_t i = 0; i < terms_.size(); ++i) groups[find(i)].push_back(terms_[i]);
    std::vector<std::vector<Term>> out;
    for (auto& [k, g] : groups) {
      std::sort(g.begin(), g.end());
      out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::map<Term, std::size_t> ids_;
  std::vector<std::size_t> parent_;
  std::vector<Term> terms_;
};

}  // namespace detail

/// Fills `mu` and `piece` from `classes`. Returns false when a class holds
/// two distinct constants. Representatives prefer constants, then producer
/// variables, then consumer variables.
inline bool finish_unifier(Unifier& u) {
  auto producer_vars = u.producer->variables();
  u.mu = Substitution();
  for (const auto& c : u.classes) {
    const Term* rep = nullptr;
    int best = -1;
    for (const auto& t : c) {
      int rank = t.is_variable() ? (producer_vars.count(t) ? 1 : 0) : 2;
      if (rank == 2 && best == 2 && !(t == *rep)) return false;
      if (rank > best) {
        best = rank;
        rep = &t;
      }
    }
    for (const auto& t : c)
      if (t.is_variable() && !(t == *rep)) u.mu.bind(t, *rep);
  }
  u.piece = is_admissible(u);
  return true;
}

struct UnifierOptions {
  bool require_piece = true;
  /// Rules with more atoms on the enumerated side are not enumerated.
  std::size_t max_atoms = 12;
};

/// Enumerates the unifiers of part of `consumer`'s body with part of
/// `producer`'s head. The rules must not share variables. `incomplete` is
/// set when a side exceeds the atom cap.
inline std::vector<Unifier> unifiers(const RulePtr& consumer, const RulePtr& producer,
                                     UnifierOptions opts = {}, bool* incomplete = nullptr) {
  std::vector<Unifier> out;
  const auto& body = consumer->body().atoms();
  const auto& head = producer->head().atoms();
  if (body.size() > opts.max_atoms || head.size() > opts.max_atoms) {
    if (incomplete) *incomplete = true;
    return out;
  }
  std::set<std::tuple<std::vector<std::size_t>, std::vector<std::size_t>,
                      std::vector<std::vector<Term>>>>
      seen;
  std::vector<long> choice(body.size(), -1);

  auto finish = [&]() {
    Unifier u;
    u.producer = producer;
    u.consumer = consumer;
    detail::UnionFind uf;
    std::set<std::size_t> heads;
    for (std::size_t b = 0; b < body.size(); ++b) {
      if (choice[b] < 0) continue;
      u.body_part.push_back(b);
      auto h = static_cast<std::size_t>(choice[b]);
      heads.insert(h);
      for (std::size_t k = 0; k < body[b].args.size(); ++k)
        uf.unite(body[b].args[k], head[h].args[k]);
    }
    if (u.body_part.empty()) return;
    u.head_part.assign(heads.begin(), heads.end());
    u.classes = uf.classes();
    if (!finish_unifier(u)) return;
    if (opts.require_piece && !u.piece) return;
    if (!seen.emplace(u.body_part, u.head_part, u.classes).second) return;
    out.push_back(std::move(u));
  };

  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == body.size()) {
      finish();
      return;
    }
    choice[b] = -1;
    rec(b + 1);
    for (std::size_t h = 0; h < head.size(); ++h) {
      if (head[h].predicate != body[b].predicate || head[h].arity() != body[b].arity()) continue;
      choice[b] = static_cast<long>(h);
      rec(b + 1);
    }
    choice[b] = -1;
  };
  rec(0);
  return out;
}

/// R₁ ⊕_μ R₂ for a unifier of R₂'s body with R₁'s head: head μ(H₁) ∪ μ(H₂),
/// body μ(B₁) ∪ (μ(B₂) \ μ(H₁)), negative bodies μ(B⁻) of both rules.
inline Rule unified_rule(const Rule& r1, const Unifier& u, const Rule& r2) {
  AtomSet h1 = u.apply(r1.head());
  AtomSet head = h1.united(u.apply(r2.head()));
  AtomSet body = u.apply(r1.body()).united(u.apply(r2.body()).minus(h1));
  std::vector<AtomSet> negative;
  for (const auto& n : r1.negative()) negative.push_back(u.apply(n));
  for (const auto& n : r2.negative()) negative.push_back(u.apply(n));
  return Rule(r1.id() + "+" + r2.id(), body, head, negative);
}

/// A rule is self-blocking when one of its negative bodies is contained in
/// its positive body and head together.
inline bool self_blocking(const Rule& r) {
  AtomSet all = r.body().united(r.head());
  for (const auto& n : r.negative())
    if (n.subset_of(all)) return true;
  return false;
}

inline bool self_blocking_unifier(const Rule& r1, const Unifier& u, const Rule& r2) {
  return self_blocking(unified_rule(r1, u, r2));
}

/// Semantic check of a piece-unifier on a frozen instance: the producer,
/// applied on F = freeze(μ(B_p) ∪ μ(B_c \ B′)), must enable a consumer
/// trigger whose image is not inside F. With `require_useful`, the trigger
/// must also be useful in skolemized form: its skolemized head is not
/// already present.
inline bool validates_dependency(const Unifier& u, bool require_useful = true) {
  Rule p = skolemize(*u.producer);
  Rule c = skolemize(*u.consumer);
  AtomSet rest = c.body().minus(u.body_atoms());
  Frozen fz = freeze(u.apply(p.body()).united(u.apply(rest)));
  Substitution pi;
  for (const auto& v : p.body().variables()) pi.bind(v, fz.freezing.apply(u.apply(v)));
  AtomSet g = fz.atoms.united(pi.apply(p.head()));
  bool found = false;
  for_each_homomorphism(c.body(), g, {}, [&](const Substitution& h) {
    if (!h.apply(c.body()).subset_of(fz.atoms) &&
        (!require_useful || !h.apply(c.head()).subset_of(g)))
      found = true;
    return !found;
  });
  return found;
}

/// The consumer side of a pair, renamed apart when both sides are the same rule.
inline RulePtr consumer_copy(const RulePtr& producer, const RulePtr& consumer) {
  if (producer.get() != consumer.get() && !(*producer == *consumer)) return consumer;
  return std::make_shared<const Rule>(rename_apart(*consumer));
}

struct DependencyOptions {
  bool negation_aware = false;
  /// Keep every new trigger, useful or not (the dependency notion under
  /// which an acyclic GRD bounds the oblivious chase).
  bool oblivious = false;
  UnifierOptions unifier;
};

/// Validated piece-unifiers witnessing that `consumer` depends on
/// `producer`. In negation-aware mode, self-blocking witnesses are dropped.
inline std::vector<Unifier> dependency_witnesses(const RulePtr& producer, const RulePtr& consumer,
                                                 DependencyOptions opts = {},
                                                 bool* incomplete = nullptr) {
  std::vector<Unifier> out;
  auto c = consumer_copy(producer, consumer);
  UnifierOptions uo = opts.unifier;
  uo.require_piece = true;
  for (auto& u : unifiers(c, producer, uo, incomplete)) {
    if (!validates_dependency(u, !opts.oblivious)) continue;
    if (opts.negation_aware && self_blocking_unifier(*producer, u, *c)) continue;
    out.push_back(std::move(u));
  }
  return out;
}

inline bool depends(const Rule& producer, const Rule& consumer) {
  auto p = std::make_shared<const Rule>(producer);
  auto c = std::make_shared<const Rule>(consumer);
  return !dependency_witnesses(p, c).empty();
}

/// Positive reliance: some validated unifier whose unified rule is not
/// self-blocking.
inline bool nm_depends(const Rule& producer, const Rule& consumer) {
  auto p = std::make_shared<const Rule>(producer);
  auto c = std::make_shared<const Rule>(consumer);
  DependencyOptions opts;
  opts.negation_aware = true;
  return !dependency_witnesses(p, c, opts).empty();
}

class DependencyGraph {
 public:
  DependencyGraph() = default;
  explicit DependencyGraph(std::vector<RulePtr> rules) : rules_(std::move(rules)) {
    adjacency_.resize(rules_.size());
  }

  const std::vector<RulePtr>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  const Rule& rule(std::size_t i) const { return *rules_[i]; }

  void add_edge(std::size_t from, std::size_t to, std::vector<Unifier> witnesses) {
    if (edges_.emplace(std::make_pair(from, to), std::move(witnesses)).second)
      adjacency_[from].push_back(to);
  }

  bool has_edge(std::size_t from, std::size_t to) const { return edges_.count({from, to}) != 0; }

  const std::vector<Unifier>& witnesses(std::size_t from, std::size_t to) const {
    static const std::vector<Unifier> none;
    auto it = edges_.find({from, to});
    return it == edges_.end() ? none : it->second;
  }

  const std::map<std::pair<std::size_t, std::size_t>, std::vector<Unifier>>& edges() const {
    return edges_;
  }
  const digraph::Adjacency& adjacency() const { return adjacency_; }

  /// True when a path of length ≥ 1 leads from `from` to `to`.
  bool reaches(std::size_t from, std::size_t to) const {
    return digraph::successors(adjacency_, from)[to];
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (rules_[i]->id() == id) return i;
    return std::nullopt;
  }

  bool incomplete = false;
  bool negation_aware = false;

 private:
  std::vector<RulePtr> rules_;
  digraph::Adjacency adjacency_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Unifier>> edges_;
};

/// The graph of rule dependencies, self-pairs included.
inline DependencyGraph grd(const std::vector<RulePtr>& rules, DependencyOptions opts = {}) {
  DependencyGraph g(rules);
  g.negation_aware = opts.negation_aware;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = 0; j < rules.size(); ++j) {
      auto w = dependency_witnesses(rules[i], rules[j], opts, &g.incomplete);
      if (!w.empty()) g.add_edge(i, j, std::move(w));
    }
  return g;
}

inline DependencyGraph grd(const std::vector<Rule>& rules, DependencyOptions opts = {}) {
  return grd(share(rules), opts);
}

/// Reserved predicate of agglomerated rules; the parser never produces it.
inline const std::string fr_predicate = "_fr";

struct AgglomeratedRule {
  std::size_t base = 0;    // R_i
  std::size_t target = 0;  // R_j
  std::set<Term> fr_terms;
  RulePtr rule;
};

inline RulePtr with_fr_atoms(const Rule& r, const std::set<Term>& terms) {
  AtomSet body = r.body();
  for (const auto& t : terms) body.insert(Atom(fr_predicate, {t}));
  return std::make_shared<const Rule>(r.id(), body, r.head(), r.negative());
}

/// R^j_i: B_i plus fr(t) for every head term of R_i that piece-unifiers
/// consume along GRD paths from R_i towards direct predecessors of R_j.
/// Computed as a monotone fixpoint over all such paths.
inline AgglomeratedRule agglomerate(const DependencyGraph& g, std::size_t i, std::size_t j,
                                    UnifierOptions opts = {}) {
  if (!g.reaches(i, j))
    throw std::invalid_argument("rule " + g.rule(j).id() + " is not reachable from " +
                                g.rule(i).id());
  const std::size_t n = g.size();
  std::vector<bool> reached(n, false);
  std::vector<std::set<Term>> terms(n);
  reached[i] = true;
  opts.require_piece = true;
  const RulePtr& base = g.rules()[i];
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t m = 0; m < n; ++m) {
      if (!reached[m]) continue;
      auto producer = with_fr_atoms(*base, terms[m]);
      for (auto next : g.adjacency()[m]) {
        auto consumer = g.rules()[next];
        if (next == i) consumer = std::make_shared<const Rule>(rename_apart(*consumer));
        auto us = unifiers(consumer, producer, opts);
        if (us.empty()) continue;
        std::set<Term> add = terms[m];
        for (const auto& u : us)
          for (const auto& t : u.head_atoms().terms()) add.insert(t);
        if (!reached[next]) {
          reached[next] = true;
          changed = true;
        }
        for (const auto& t : add)
          if (terms[next].insert(t).second) changed = true;
      }
    }
  }
  AgglomeratedRule out;
  out.base = i;
  out.target = j;
  for (std::size_t p = 0; p < n; ++p)
    if (reached[p] && g.has_edge(p, j)) out.fr_terms.insert(terms[p].begin(), terms[p].end());
  out.rule = with_fr_atoms(*base, out.fr_terms);
  return out;
}

}  // namespace chaseterm
