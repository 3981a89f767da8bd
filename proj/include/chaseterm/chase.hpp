#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaseterm/homomorphism.hpp"
#include "chaseterm/knowledge_base.hpp"
#include "chaseterm/rule.hpp"

namespace chaseterm {

enum class Criterion { oblivious, frontier, skolem, restricted, core };

inline constexpr Criterion all_criteria[] = {Criterion::oblivious, Criterion::frontier,
                                             Criterion::skolem, Criterion::restricted,
                                             Criterion::core};

/// All criteria except core keep every intermediate atomset.
inline bool is_local(Criterion c) { return c != Criterion::core; }

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::oblivious: return "oblivious";
    case Criterion::frontier: return "frontier";
    case Criterion::skolem: return "skolem";
    case Criterion::restricted: return "restricted";
    case Criterion::core: return "core";
  }
  return "?";
}

inline std::optional<Criterion> parse_criterion(std::string_view s) {
  for (auto c : all_criteria)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

struct Budget {
  std::size_t max_rounds = 64;
  std::size_t max_steps = 10000;
};

/// One trigger considered by the engine. A step with an empty rule id is the
/// end-of-round core simplification; its `simplification` is the folding.
struct DerivationStep {
  std::size_t round = 0;
  std::string rule_id;
  Substitution trigger;
  AtomSet added;
  Substitution simplification;
  bool skipped = false;
};

enum class ChaseStatus { terminated, budget_exhausted };

inline std::string_view to_string(ChaseStatus s) {
  return s == ChaseStatus::terminated ? "terminated" : "budget-exhausted";
}

struct ChaseResult {
  ChaseStatus status = ChaseStatus::budget_exhausted;
  AtomSet produced;
  std::vector<DerivationStep> trace;
  std::size_t rounds = 0;
  std::size_t steps = 0;
  /// Size of the produced atomset after each round (index 0 = input).
  std::vector<std::size_t> round_sizes;
};

/// Symbol of the skolem function replacing existential `var` of `rule_id`.
inline std::string skolem_symbol(const std::string& rule_id, const Term& var) {
  return "f_" + rule_id + "_" + var.name();
}

/// Replaces each existential variable y by f_R_y(frontier…), the frontier
/// listed in order of first occurrence in the body.
inline Rule skolemize(const Rule& r) {
  std::vector<Term> frontier;
  for (const auto& a : r.body())
    for (const auto& t : a.args)
      if (t.is_variable() && r.is_frontier(t) &&
          std::find(frontier.begin(), frontier.end(), t) == frontier.end())
        frontier.push_back(t);
  Substitution s;
  for (const auto& z : r.existentials())
    s.bind(z, Term::functional(skolem_symbol(r.id(), z), frontier));
  return Rule(r.id(), r.body(), s.apply(r.head()), r.negative());
}

/// Replaces fact variables (labelled nulls) by 0-ary skolem terms, as if the
/// facts were a rule with an empty body.
inline AtomSet skolemize_facts(const AtomSet& facts) {
  Substitution s;
  for (const auto& v : facts.variables())
    s.bind(v, Term::functional("f__" + v.str(), {}));
  return s.apply(facts);
}

/// Called after every round with (round, produced atomset); return false to
/// stop the derivation early.
using RoundObserver = std::function<bool(std::size_t, const AtomSet&)>;

namespace detail {

class ChaseEngine {
 public:
  ChaseEngine(std::span<const Rule> rules, Criterion c, Budget budget)
      : criterion_(c), budget_(budget) {
    for (const auto& r : rules) {
      if (!r.is_positive())
        throw std::invalid_argument("rule " + r.id() +
                                    " has negative bodies; use the stable-set procedure");
      rules_.push_back(c == Criterion::skolem ? skolemize(r) : r);
      std::set<Term> fr(r.frontier().begin(), r.frontier().end());
      frontiers_.push_back(std::move(fr));
    }
  }

  ChaseResult run(const AtomSet& facts, const RoundObserver& observe) {
    ChaseResult res;
    res.produced = criterion_ == Criterion::core ? core(facts) : facts;
    res.round_sizes.push_back(res.produced.size());
    if (observe && !observe(0, res.produced)) return res;
    while (res.rounds < budget_.max_rounds) {
      ++res.rounds;
      AtomSet start = res.produced;
      if (!round(start, res)) return res;  // step budget exhausted
      if (criterion_ == Criterion::core) {
        auto c = core_with_retraction(res.produced);
        if (!c.retraction.empty()) {
          DerivationStep st;
          st.round = res.rounds;
          st.simplification = c.retraction;
          res.trace.push_back(std::move(st));
        }
        res.produced = std::move(c.atoms);
      }
      res.round_sizes.push_back(res.produced.size());
      if (res.produced == start) {
        res.status = ChaseStatus::terminated;
        return res;
      }
      if (observe && !observe(res.rounds, res.produced)) return res;
    }
    return res;
  }

 private:
  // Returns false when the step budget ran out in the middle of the round.
  bool round(const AtomSet& start, ChaseResult& res) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const Rule& r = rules_[i];
      for (const auto& pi : homomorphisms(r.body(), start)) {
        DerivationStep st;
        st.round = res.rounds;
        st.rule_id = r.id();
        st.trigger = pi;
        switch (criterion_) {
          case Criterion::oblivious:
          case Criterion::skolem:
            if (!applied_.insert({i, pi}).second) continue;
            break;
          case Criterion::frontier:
            if (!applied_.insert({i, pi}).second) continue;
            if (!applied_frontier_.insert({i, pi.restricted_to(frontiers_[i])}).second)
              st.skipped = true;
            break;
          case Criterion::restricted:
          case Criterion::core:
            if (!is_useful(pi, r, res.produced)) st.skipped = true;
            break;
        }
        if (!st.skipped) {
          if (res.steps >= budget_.max_steps) return false;
          ++res.steps;
          AtomSet head = instantiate_head(r, pi);
          st.added = head.minus(res.produced);
          res.produced.insert(head);
        }
        res.trace.push_back(std::move(st));
      }
    }
    return true;
  }

  Criterion criterion_;
  Budget budget_;
  std::vector<Rule> rules_;
  std::vector<std::set<Term>> frontiers_;
  std::set<std::pair<std::size_t, Substitution>> applied_;
  std::set<std::pair<std::size_t, Substitution>> applied_frontier_;
};

}  // namespace detail

/// Runs the chase breadth-first: each round collects the triggers on the
/// round-start atomset and applies them in order (rule order, then
/// homomorphism order), skipping per criterion. The core criterion folds
/// once at the end of each round. Termination under `restricted` is relative
/// to this trigger order.
inline ChaseResult run_chase(const AtomSet& facts, std::span<const Rule> rules,
                             Criterion criterion, Budget budget = {},
                             const RoundObserver& observe = {}) {
  detail::ChaseEngine engine(rules, criterion, budget);
  return engine.run(facts, observe);
}

enum class Answer { yes, no, no_within_budget };

inline std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::no_within_budget: return "no-within-budget";
  }
  return "?";
}

struct AnswerResult {
  Answer answer = Answer::no_within_budget;
  std::size_t round = 0;  // round at which the query was first entailed
};

/// Entailment by chasing: yes as soon as some round entails q; a definitive
/// no only when the chase terminated without entailing it.
inline AnswerResult answer(const AtomSet& facts, std::span<const Rule> rules,
                           const AtomSet& query, Criterion criterion, Budget budget = {}) {
  AnswerResult out;
  auto res = run_chase(facts, rules, criterion, budget,
                       [&](std::size_t round, const AtomSet& f) {
                         if (entails(f, query)) {
                           out.answer = Answer::yes;
                           out.round = round;
                           return false;
                         }
                         return true;
                       });
  if (out.answer == Answer::yes) return out;
  if (res.status == ChaseStatus::terminated)
    out.answer = entails(res.produced, query) ? Answer::yes : Answer::no;
  if (out.answer == Answer::yes) out.round = res.rounds;
  return out;
}

inline nlohmann::json step_to_json(const DerivationStep& s) {
  auto subst = [](const Substitution& m) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [v, t] : m) o[v.str()] = t.str();
    return o;
  };
  nlohmann::json added = nlohmann::json::array();
  for (const auto& a : s.added) added.push_back(a.str());
  return {{"version", 1},
          {"round", s.round},
          {"rule", s.rule_id.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.rule_id)},
          {"trigger", subst(s.trigger)},
          {"added", added},
          {"simplification", subst(s.simplification)},
          {"skipped", s.skipped}};
}

}  // namespace chaseterm
