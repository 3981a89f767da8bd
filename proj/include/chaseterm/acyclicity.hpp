#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaseterm/digraph.hpp"
#include "chaseterm/knowledge_base.hpp"
#include "chaseterm/unification.hpp"

namespace chaseterm {

enum class GraphKind { basic, full, dependency, unifier };

inline std::string_view to_string(GraphKind k) {
  switch (k) {
    case GraphKind::basic: return "pg";
    case GraphKind::full: return "pgf";
    case GraphKind::dependency: return "pgd";
    case GraphKind::unifier: return "pgu";
  }
  return "?";
}

enum class Side { body, head };

/// The position [a,i]: argument `arg` of atom `atom` on one side of a rule.
struct PositionNode {
  std::size_t rule = 0;
  Side side = Side::body;
  std::size_t atom = 0;
  std::size_t arg = 0;
  bool existential = false;
  bool frontier = false;

  friend bool operator==(const PositionNode& a, const PositionNode& b) {
    return a.rule == b.rule && a.side == b.side && a.atom == b.atom && a.arg == b.arg;
  }
};

struct PositionEdge {
  bool transition = false;
  std::vector<Unifier> witnesses;  // filled for unifier-kind transition edges
};

class PositionGraph {
 public:
  GraphKind kind = GraphKind::basic;

  PositionGraph() = default;
  explicit PositionGraph(std::vector<RulePtr> rules) : rules_(std::move(rules)) {
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      const Rule& rule = *rules_[r];
      for (Side side : {Side::body, Side::head}) {
        const AtomSet& atoms = side == Side::body ? rule.body() : rule.head();
        for (std::size_t a = 0; a < atoms.size(); ++a)
          for (std::size_t k = 0; k < atoms[a].arity(); ++k) {
            PositionNode n{r, side, a, k, false, false};
            const Term& t = atoms[a].args[k];
            n.existential = side == Side::head && t.is_variable() && rule.is_existential(t);
            n.frontier = t.is_variable() && rule.is_frontier(t);
            index_[{r, side == Side::head, a, k}] = nodes_.size();
            nodes_.push_back(n);
          }
      }
    }
    adjacency_.resize(nodes_.size());
  }

  const std::vector<RulePtr>& rules() const { return rules_; }
  const std::vector<PositionNode>& nodes() const { return nodes_; }
  const digraph::Adjacency& adjacency() const { return adjacency_; }
  const std::map<std::pair<std::size_t, std::size_t>, PositionEdge>& edges() const {
    return edges_;
  }

  std::size_t node(std::size_t rule, Side side, std::size_t atom, std::size_t arg) const {
    return index_.at({rule, side == Side::head, atom, arg});
  }

  const Atom& atom_of(const PositionNode& n) const {
    const Rule& r = *rules_[n.rule];
    return (n.side == Side::body ? r.body() : r.head())[n.atom];
  }
  const Term& term_of(const PositionNode& n) const { return atom_of(n).args[n.arg]; }

  /// Adds an edge, or merges witnesses into an existing one.
  void add_edge(std::size_t from, std::size_t to, bool transition,
                std::vector<Unifier> witnesses = {}) {
    auto [it, fresh] = edges_.try_emplace({from, to});
    if (fresh) {
      adjacency_[from].push_back(to);
      it->second.transition = transition;
    }
    for (auto& w : witnesses) it->second.witnesses.push_back(std::move(w));
  }

  bool has_edge(std::size_t from, std::size_t to) const { return edges_.count({from, to}) != 0; }

  const PositionEdge* edge(std::size_t from, std::size_t to) const {
    auto it = edges_.find({from, to});
    return it == edges_.end() ? nullptr : &it->second;
  }

  std::string label(std::size_t id) const {
    const auto& n = nodes_[id];
    VariableNames names(rules_[n.rule]->variables());
    return rules_[n.rule]->id() + (n.side == Side::body ? ":B:[" : ":H:[") +
           names.atom(atom_of(n)) + "," + std::to_string(n.arg + 1) + "]";
  }

  std::vector<std::size_t> existential_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].existential) out.push_back(i);
    return out;
  }

  bool incomplete = false;

 private:
  std::vector<RulePtr> rules_;
  std::vector<PositionNode> nodes_;
  std::map<std::tuple<std::size_t, bool, std::size_t, std::size_t>, std::size_t> index_;
  digraph::Adjacency adjacency_;
  std::map<std::pair<std::size_t, std::size_t>, PositionEdge> edges_;
};

namespace detail {

inline void add_basic_edges(PositionGraph& g) {
  for (std::size_t r = 0; r < g.rules().size(); ++r) {
    const Rule& rule = *g.rules()[r];
    for (std::size_t a = 0; a < rule.body().size(); ++a)
      for (std::size_t k = 0; k < rule.body()[a].arity(); ++k) {
        const Term& x = rule.body()[a].args[k];
        if (!x.is_variable() || !rule.is_frontier(x)) continue;
        auto from = g.node(r, Side::body, a, k);
        for (std::size_t h = 0; h < rule.head().size(); ++h)
          for (std::size_t m = 0; m < rule.head()[h].arity(); ++m) {
            const Term& t = rule.head()[h].args[m];
            if (t == x || (t.is_variable() && rule.is_existential(t)))
              g.add_edge(from, g.node(r, Side::head, h, m), false);
          }
      }
  }
}

// Calls visit(h, b, k) for each same-predicate position pair of R_i's head
// and R_j's body.
template <class Visit>
void for_each_transition(const Rule& ri, const Rule& rj, Visit&& visit) {
  for (std::size_t h = 0; h < ri.head().size(); ++h)
    for (std::size_t b = 0; b < rj.body().size(); ++b) {
      const Atom& ha = ri.head()[h];
      const Atom& ba = rj.body()[b];
      if (ha.predicate != ba.predicate || ha.arity() != ba.arity()) continue;
      for (std::size_t k = 0; k < ha.arity(); ++k) visit(h, b, k);
    }
}

}  // namespace detail

struct GraphOptions {
  bool negation_aware = false;
  UnifierOptions unifier;
};

/// PG, PG^F, PG^D or PG^U. The dependency and unifier kinds need the GRD.
inline PositionGraph build_position_graph(GraphKind kind, const std::vector<RulePtr>& rules,
                                          const DependencyGraph* grd = nullptr,
                                          GraphOptions opts = {}) {
  if ((kind == GraphKind::dependency || kind == GraphKind::unifier) && !grd)
    throw std::invalid_argument("the " + std::string(to_string(kind)) +
                                " graph needs the rule dependency graph");
  PositionGraph g(rules);
  g.kind = kind;
  detail::add_basic_edges(g);
  if (kind == GraphKind::basic) return g;
  const std::size_t n = rules.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> reach;
    if (kind != GraphKind::full) reach = digraph::successors(grd->adjacency(), i);
    for (std::size_t j = 0; j < n; ++j) {
      if (kind != GraphKind::full && !reach[j]) continue;
      const Rule& ri = *rules[i];
      const Rule& rj = *rules[j];
      if (kind != GraphKind::unifier) {
        detail::for_each_transition(ri, rj, [&](std::size_t h, std::size_t b, std::size_t k) {
          g.add_edge(g.node(i, Side::head, h, k), g.node(j, Side::body, b, k), true);
        });
        continue;
      }
      auto agg = agglomerate(*grd, i, j, opts.unifier);
      auto consumer = i == j ? std::make_shared<const Rule>(rename_apart(rj)) : rules[j];
      UnifierOptions uo = opts.unifier;
      uo.require_piece = true;
      bool capped = false;
      auto us = unifiers(consumer, agg.rule, uo, &capped);
      if (capped) g.incomplete = true;
      for (auto& u : us) {
        if (opts.negation_aware && self_blocking_unifier(ri, u, *consumer)) continue;
        detail::for_each_transition(ri, rj, [&](std::size_t h, std::size_t b, std::size_t k) {
          if (u.apply(consumer->body()[b].args[k]) == u.apply(ri.head()[h].args[k]))
            g.add_edge(g.node(i, Side::head, h, k), g.node(j, Side::body, b, k), true, {u});
        });
      }
    }
  }
  if (grd && grd->incomplete) g.incomplete = true;
  return g;
}

/// Assigns to each node a subset of its direct or indirect successors.
struct MarkingFunction {
  std::string name;
  std::function<std::vector<bool>(const PositionGraph&, std::size_t)> assign;
};

/// Weak acyclicity: every successor is marked.
inline MarkingFunction wa_marking() {
  return {"wa", [](const PositionGraph& g, std::size_t n) {
            return digraph::successors(g.adjacency(), n);
          }};
}

enum class Outcome { satisfied, violated, unknown };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::satisfied: return "satisfied";
    case Outcome::violated: return "violated";
    case Outcome::unknown: return "unknown";
  }
  return "?";
}

struct Verdict {
  std::string property;
  Outcome outcome = Outcome::satisfied;
  /// Position-graph nodes of the marked cycle, starting at the existential
  /// position (empty for aGRD, whose witness is `rule_cycle`).
  std::vector<std::size_t> cycle;
  std::vector<std::size_t> rule_cycle;
  /// For U+: one witness unifier per transition edge of the cycle.
  std::vector<Unifier> sequence;
  std::string note;
};

/// No marked cycle through an existential position.
inline Verdict check(const MarkingFunction& y, const PositionGraph& g, std::string property = "") {
  Verdict v;
  v.property = property.empty() ? y.name : property;
  for (auto p : g.existential_positions()) {
    auto marked = y.assign(g, p);
    if (auto c = digraph::cycle_through(g.adjacency(), p, marked)) {
      v.outcome = Outcome::violated;
      v.cycle = *c;
      return v;
    }
  }
  if (g.incomplete) {
    v.outcome = Outcome::unknown;
    v.note = "unifier enumeration capped";
  }
  return v;
}

inline Verdict check_agrd(const DependencyGraph& g) {
  Verdict v;
  v.property = "aGRD";
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<bool> all(g.size(), true);
    if (auto c = digraph::cycle_through(g.adjacency(), i, all)) {
      v.outcome = Outcome::violated;
      v.rule_cycle = *c;
      return v;
    }
  }
  if (g.incomplete) {
    v.outcome = Outcome::unknown;
    v.note = "unifier enumeration capped";
  }
  return v;
}

/// Y^< : every s.c.c. of the GRD satisfies Y on its own full position graph,
/// single rules without a loop excepted.
inline Verdict check_per_scc(const MarkingFunction& y, const DependencyGraph& g) {
  Verdict v;
  v.property = y.name + "<";
  auto comp = digraph::strongly_connected_components(g.adjacency());
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < comp.size(); ++i) members[comp[i]].push_back(i);
  for (const auto& [c, rs] : members) {
    if (rs.size() == 1 && !g.has_edge(rs[0], rs[0])) continue;
    std::vector<RulePtr> sub;
    for (auto r : rs) sub.push_back(g.rules()[r]);
    auto pg = build_position_graph(GraphKind::full, sub);
    auto sv = check(y, pg);
    if (sv.outcome == Outcome::violated) {
      v.outcome = Outcome::violated;
      v.rule_cycle = rs;
      return v;
    }
  }
  if (g.incomplete) v.outcome = Outcome::unknown;
  return v;
}

// ---------------------------------------------------------------------------
// Compatible unifiers and sequences

/// Original (rule index, variable) of each variable of a derived rule.
using Provenance = std::map<Term, std::pair<std::size_t, Term>>;

inline Provenance identity_provenance(const PositionGraph& g) {
  Provenance p;
  for (std::size_t r = 0; r < g.rules().size(); ++r)
    for (const auto& v : g.rules()[r]->variables()) p[v] = {r, v};
  return p;
}

/// Pairs the variables of two rules that are renamings of each other (both
/// sorted, renaming monotone).
inline std::map<Term, Term> align_variables(const Rule& from, const Rule& to) {
  auto a = from.variables();
  auto b = to.variables();
  if (a.size() != b.size()) throw std::invalid_argument("rules are not renamings of each other");
  std::map<Term, Term> out;
  auto it = b.begin();
  for (const auto& v : a) out[v] = *it++;
  return out;
}

/// A unifier is compatible when every consumer body position whose term is
/// merged with an existential z of the producer's head part can be reached
/// in PG^U from a position of z without crossing another existential
/// position. `consumer_index` is the rule of g the consumer is a copy of.
inline bool compatible(const Unifier& u, const PositionGraph& g, const Provenance& provenance,
                       std::size_t consumer_index) {
  if (u.piece) return true;
  auto head_vars = u.head_atoms().variables();
  const Rule& consumer = *u.consumer;
  for (const auto& cls : u.classes) {
    for (const auto& z : cls) {
      if (!z.is_variable() || !head_vars.count(z) || !u.producer->is_existential(z)) continue;
      auto origin = provenance.find(z);
      if (origin == provenance.end()) return false;
      auto [ri, zo] = origin->second;
      const Rule& orig = *g.rules()[ri];
      std::vector<std::size_t> sources;
      for (std::size_t h = 0; h < orig.head().size(); ++h)
        for (std::size_t k = 0; k < orig.head()[h].arity(); ++k)
          if (orig.head()[h].args[k] == zo) sources.push_back(g.node(ri, Side::head, h, k));
      std::vector<bool> seen(g.nodes().size(), false);
      std::vector<std::size_t> stack = sources;
      for (auto s : sources) seen[s] = true;
      while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        for (auto m : g.adjacency()[n]) {
          if (seen[m] || g.nodes()[m].existential) continue;
          seen[m] = true;
          stack.push_back(m);
        }
      }
      for (std::size_t b = 0; b < consumer.body().size(); ++b)
        for (std::size_t k = 0; k < consumer.body()[b].arity(); ++k) {
          const Term& t = consumer.body()[b].args[k];
          if (std::find(cls.begin(), cls.end(), t) == cls.end()) continue;
          if (!seen[g.node(consumer_index, Side::body, b, k)]) return false;
        }
    }
  }
  return true;
}

inline bool compatible(const Unifier& u, const PositionGraph& g) {
  auto consumer_index = [&]() -> std::size_t {
    for (std::size_t r = 0; r < g.rules().size(); ++r)
      if (g.rules()[r]->id() == u.consumer->id()) return r;
    throw std::invalid_argument("consumer " + u.consumer->id() + " is not a rule of the graph");
  }();
  Provenance p = identity_provenance(g);
  if (u.consumer.get() != g.rules()[consumer_index].get()) {
    for (const auto& [from, to] : align_variables(*u.consumer, *g.rules()[consumer_index]))
      p[from] = {consumer_index, to};
  }
  return compatible(u, g, p, consumer_index);
}

struct SequenceResult {
  bool compatible = false;
  bool self_blocking = false;
  std::optional<Rule> composite;
  std::size_t failed_at = 0;
};

/// Folds R₁ μ₁ R₂ … μ_k R_{k+1} left to right: each μ_m (a unifier between
/// rules of g, or a renamed copy) is lifted onto the rule folded so far and
/// must be compatible there. Every rule occurrence after the first is a
/// fresh copy.
inline SequenceResult compatible_sequence(const std::vector<std::size_t>& rules,
                                          const std::vector<Unifier>& unifiers,
                                          const PositionGraph& g) {
  if (rules.size() != unifiers.size() + 1 || rules.empty())
    throw std::invalid_argument("a sequence alternates k+1 rules and k unifiers");
  SequenceResult res;
  Provenance prov = identity_provenance(g);
  std::vector<RulePtr> occ{g.rules()[rules[0]]};
  for (std::size_t m = 1; m < rules.size(); ++m) {
    Substitution renaming;
    occ.push_back(std::make_shared<const Rule>(rename_apart(*g.rules()[rules[m]], &renaming)));
    for (const auto& [from, to] : renaming) prov[to] = {rules[m], from};
  }
  RulePtr folded = occ[0];
  Substitution theta;
  for (std::size_t m = 0; m < unifiers.size(); ++m) {
    const Unifier& w = unifiers[m];
    auto to_producer = align_variables(*w.producer, *g.rules()[rules[m]]);
    auto to_occ_p = align_variables(*g.rules()[rules[m]], *occ[m]);
    auto to_consumer = align_variables(*w.consumer, *g.rules()[rules[m + 1]]);
    auto to_occ_c = align_variables(*g.rules()[rules[m + 1]], *occ[m + 1]);
    auto producer_term = [&](const Term& t) {
      if (!t.is_variable()) return t;
      return theta.apply(to_occ_p.at(to_producer.at(t)));
    };
    auto consumer_term = [&](const Term& t) {
      if (!t.is_variable()) return t;
      return to_occ_c.at(to_consumer.at(t));
    };
    auto producer_vars = w.producer->variables();

    Unifier lifted;
    lifted.producer = folded;
    lifted.consumer = occ[m + 1];
    lifted.body_part = w.body_part;
    detail::UnionFind uf;
    for (const auto& cls : w.classes) {
      std::vector<Term> mapped;
      for (const auto& t : cls)
        mapped.push_back(t.is_variable() && producer_vars.count(t) ? producer_term(t)
                                                                   : consumer_term(t));
      for (const auto& t : mapped) uf.unite(mapped[0], t);
    }
    // Terms of the lifted head part also belong to the partition.
    std::set<std::size_t> heads;
    for (auto h : w.head_part) {
      const Atom& orig = w.producer->head()[h];
      std::vector<Term> args;
      for (const auto& t : orig.args) args.push_back(producer_term(t));
      Atom lifted_atom(orig.predicate, args);
      if (!folded->head().contains(lifted_atom)) {
        res.failed_at = m;
        return res;
      }
      heads.insert(folded->head().index_of(lifted_atom));
      for (const auto& t : args) uf.id(t);
    }
    lifted.head_part.assign(heads.begin(), heads.end());
    lifted.classes = uf.classes();
    if (!finish_unifier(lifted)) {
      res.failed_at = m;
      return res;
    }
    if (!compatible(lifted, g, prov, rules[m + 1])) {
      res.failed_at = m;
      return res;
    }
    folded = std::make_shared<const Rule>(unified_rule(*folded, lifted, *occ[m + 1]));
    theta = lifted.mu.after(theta);
  }
  res.compatible = true;
  res.composite = *folded;
  res.self_blocking = self_blocking(*folded);
  return res;
}

struct UPlusOptions {
  bool negation_aware = false;
  std::size_t max_cycles = 10000;
  std::size_t max_sequences = 10000;
};

/// Y^{U+}: every marked cycle through an existential position must have no
/// compatible induced unifier sequence (negation-aware: no compatible
/// sequence that is not self-blocking).
inline Verdict check_u_plus(const MarkingFunction& y, const PositionGraph& g,
                            UPlusOptions opts = {}) {
  Verdict v;
  v.property = y.name + "^U+";
  bool capped = g.incomplete;
  auto comp = digraph::strongly_connected_components(g.adjacency());
  for (auto p : g.existential_positions()) {
    auto allowed = y.assign(g, p);
    for (std::size_t n = 0; n < allowed.size(); ++n)
      if (comp[n] != comp[p]) allowed[n] = false;
    std::size_t sequences = 0;
    bool found = false;
    bool complete = digraph::elementary_cycles_through(
        g.adjacency(), p, allowed, opts.max_cycles, [&](const std::vector<std::size_t>& cyc) {
          // Rules along the cycle and the witness choices of its transitions.
          std::vector<std::size_t> rules{g.nodes()[p].rule};
          std::vector<const std::vector<Unifier>*> choices;
          for (std::size_t k = 0; k < cyc.size(); ++k) {
            auto from = cyc[k], to = cyc[(k + 1) % cyc.size()];
            const PositionEdge* e = g.edge(from, to);
            if (!e->transition) continue;
            rules.push_back(g.nodes()[to].rule);
            choices.push_back(&e->witnesses);
          }
          std::vector<std::size_t> pick(choices.size(), 0);
          for (const auto* c : choices)
            if (c->empty()) return true;
          while (true) {
            if (sequences++ == opts.max_sequences) {
              capped = true;
              return false;
            }
            std::vector<Unifier> seq;
            for (std::size_t k = 0; k < choices.size(); ++k) seq.push_back((*choices[k])[pick[k]]);
            auto r = compatible_sequence(rules, seq, g);
            if (r.compatible && !(opts.negation_aware && r.self_blocking)) {
              v.outcome = Outcome::violated;
              v.cycle = cyc;
              v.rule_cycle = rules;
              v.sequence = seq;
              found = true;
              return false;
            }
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == choices[k]->size()) pick[k++] = 0;
            if (k == pick.size()) break;
          }
          return true;
        });
    if (found) return v;
    if (!complete) capped = true;
  }
  if (capped) {
    v.outcome = Outcome::unknown;
    v.note = "cycle or sequence enumeration capped";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Analysis report

inline const std::vector<std::string>& all_properties() {
  static const std::vector<std::string> p = {"aGRD", "wa", "wa^D", "wa^U", "wa^U+"};
  return p;
}

struct AnalysisOptions {
  bool negation_aware = false;
  std::vector<std::string> properties = all_properties();
  UPlusOptions u_plus;
  UnifierOptions unifier;
};

struct AnalysisReport {
  std::vector<RulePtr> rules;
  DependencyGraph grd;
  PositionGraph pgf, pgd, pgu;
  std::vector<Verdict> verdicts;
  bool negation_aware = false;
  std::vector<std::string> dropped;  // self-blocking rules, nm analysis only
  /// aGRD over the dependency notion that keeps useless triggers; only this
  /// one bounds the oblivious chase.
  Outcome oblivious_agrd = Outcome::violated;

  const Verdict* verdict(const std::string& property) const {
    for (const auto& v : verdicts)
      if (v.property == property) return &v;
    return nullptr;
  }

  bool any_satisfied() const {
    for (const auto& v : verdicts)
      if (v.outcome == Outcome::satisfied) return true;
    return false;
  }

  /// Chase variants guaranteed to halt on every fact base.
  std::map<std::string, bool> guarantees() const {
    std::map<std::string, bool> out;
    bool any = any_satisfied();
    for (auto c : {"frontier", "skolem", "restricted", "core"}) out[c] = any;
    out["oblivious"] = oblivious_agrd == Outcome::satisfied;
    return out;
  }
};

inline AnalysisReport analyze(const std::vector<RulePtr>& rules, AnalysisOptions opts = {}) {
  AnalysisReport rep;
  rep.rules = rules;
  rep.negation_aware = opts.negation_aware;
  DependencyOptions dopts;
  dopts.negation_aware = opts.negation_aware;
  dopts.unifier = opts.unifier;
  rep.grd = grd(rules, dopts);
  GraphOptions gopts;
  gopts.negation_aware = opts.negation_aware;
  gopts.unifier = opts.unifier;
  rep.pgf = build_position_graph(GraphKind::full, rules);
  rep.pgd = build_position_graph(GraphKind::dependency, rules, &rep.grd);
  rep.pgu = build_position_graph(GraphKind::unifier, rules, &rep.grd, gopts);
  auto wa = wa_marking();
  UPlusOptions up = opts.u_plus;
  up.negation_aware = opts.negation_aware;
  for (const auto& p : opts.properties) {
    if (p == "aGRD")
      rep.verdicts.push_back(check_agrd(rep.grd));
    else if (p == "wa")
      rep.verdicts.push_back(check(wa, rep.pgf, "wa"));
    else if (p == "wa^D")
      rep.verdicts.push_back(check(wa, rep.pgd, "wa^D"));
    else if (p == "wa^U")
      rep.verdicts.push_back(check(wa, rep.pgu, "wa^U"));
    else if (p == "wa^U+")
      rep.verdicts.push_back(check_u_plus(wa, rep.pgu, up));
    else
      throw std::invalid_argument("unknown property " + p);
  }
  const Verdict* agrd = rep.verdict("aGRD");
  if (agrd && agrd->outcome == Outcome::satisfied && !opts.negation_aware) {
    DependencyOptions obl = dopts;
    obl.oblivious = true;
    rep.oblivious_agrd = check_agrd(grd(rules, obl)).outcome;
  }
  return rep;
}

inline AnalysisReport analyze(const std::vector<Rule>& rules, AnalysisOptions opts = {}) {
  return analyze(share(pos(rules)), opts);
}

// ---------------------------------------------------------------------------
// Export

inline std::string to_dot(const DependencyGraph& g) {
  std::string out = "digraph grd {\n";
  for (const auto& r : g.rules()) out += "  \"" + r->id() + "\";\n";
  for (const auto& [e, w] : g.edges())
    out += "  \"" + g.rule(e.first).id() + "\" -> \"" + g.rule(e.second).id() +
           "\" [label=\"" + std::to_string(w.size()) + "\"];\n";
  return out + "}\n";
}

inline std::string to_dot(const PositionGraph& g) {
  std::string out = "digraph " + std::string(to_string(g.kind)) + " {\n";
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    out += "  n" + std::to_string(i) + " [label=\"" + g.label(i) + "\"";
    if (g.nodes()[i].existential) out += ", shape=box, style=bold";
    out += "];\n";
  }
  for (const auto& [e, info] : g.edges()) {
    out += "  n" + std::to_string(e.first) + " -> n" + std::to_string(e.second);
    if (info.transition) {
      out += " [style=dashed";
      if (g.kind == GraphKind::unifier)
        out += ", label=\"" + std::to_string(info.witnesses.size()) + "\"";
      out += "]";
    }
    out += ";\n";
  }
  return out + "}\n";
}

inline nlohmann::json to_json(const DependencyGraph& g) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& r : g.rules()) nodes.push_back(r->id());
  for (const auto& [e, w] : g.edges()) {
    nlohmann::json us = nlohmann::json::array();
    for (const auto& u : w) us.push_back(u.str());
    edges.push_back({{"from", g.rule(e.first).id()},
                     {"to", g.rule(e.second).id()},
                     {"unifiers", us}});
  }
  return {{"version", 1}, {"kind", "grd"}, {"nodes", nodes}, {"edges", edges}};
}

inline nlohmann::json to_json(const PositionGraph& g) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    nodes.push_back({{"id", i}, {"label", g.label(i)}, {"existential", g.nodes()[i].existential}});
  for (const auto& [e, info] : g.edges())
    edges.push_back({{"from", e.first},
                     {"to", e.second},
                     {"transition", info.transition},
                     {"witnesses", info.witnesses.size()}});
  return {{"version", 1}, {"kind", to_string(g.kind)}, {"nodes", nodes}, {"edges", edges}};
}

inline nlohmann::json verdict_to_json(const Verdict& v, const AnalysisReport& rep) {
  nlohmann::json j = {{"property", v.property}, {"outcome", to_string(v.outcome)}};
  if (v.outcome != Outcome::violated) {
    if (!v.note.empty()) j["note"] = v.note;
    return j;
  }
  nlohmann::json w = nlohmann::json::object();
  const PositionGraph& g = v.property == "wa"     ? rep.pgf
                           : v.property == "wa^D" ? rep.pgd
                                                  : rep.pgu;
  if (!v.cycle.empty()) {
    nlohmann::json cyc = nlohmann::json::array();
    for (auto n : v.cycle) cyc.push_back(g.label(n));
    w["cycle"] = cyc;
  }
  if (!v.rule_cycle.empty()) {
    nlohmann::json rs = nlohmann::json::array();
    for (auto r : v.rule_cycle) rs.push_back(rep.rules[r]->id());
    w["rules"] = rs;
  }
  if (!v.sequence.empty()) {
    nlohmann::json seq = nlohmann::json::array();
    for (const auto& u : v.sequence) seq.push_back(u.str());
    w["unifiers"] = seq;
  }
  j["witness"] = w;
  return j;
}

inline nlohmann::json to_json(const AnalysisReport& rep) {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : rep.verdicts) vs.push_back(verdict_to_json(v, rep));
  nlohmann::json g = nlohmann::json::object();
  for (const auto& [c, ok] : rep.guarantees()) g[c] = ok ? "guaranteed" : "not-guaranteed";
  nlohmann::json j = {{"version", 1},
                      {"negation_aware", rep.negation_aware},
                      {"verdicts", vs},
                      {"chase", g}};
  if (!rep.dropped.empty()) j["dropped_self_blocking"] = rep.dropped;
  return j;
}

}  // namespace chaseterm
