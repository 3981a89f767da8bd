#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "chaseterm/atom.hpp"
#include "chaseterm/substitution.hpp"

namespace chaseterm {

namespace detail {

// Backtracking search for substitutions σ ⊇ seed with σ(source) ⊆ target.
// Source atoms are ordered greedily: most already-constrained arguments
// first, then fewest candidate target atoms. Target candidates are visited
// in AtomSet order, so enumeration is deterministic.
class HomomorphismSearch {
 public:
  HomomorphismSearch(const AtomSet& source, const AtomSet& target,
                     const Substitution& seed)
      : binding_(seed) {
    for (const auto& a : target) index_[{a.predicate, a.arity()}].push_back(&a);
    order(source);
  }

  /// Calls visit(σ) for each homomorphism; stops when visit returns false.
  /// Returns false iff the search was stopped early.
  template <class Visit>
  bool run(Visit&& visit) {
    if (impossible_) return true;
    return step(0, visit);
  }

 private:
  void order(const AtomSet& source) {
    std::set<Term> known;
    for (const auto& [v, t] : binding_) known.insert(v);
    std::vector<const Atom*> pending;
    for (const auto& a : source) pending.push_back(&a);
    while (!pending.empty()) {
      std::size_t best = 0;
      long best_score = -1;
      std::size_t best_cands = 0;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const Atom& a = *pending[i];
        auto it = index_.find({a.predicate, a.arity()});
        std::size_t cands = it == index_.end() ? 0 : it->second.size();
        long score = 0;
        for (const auto& t : a.args) {
          std::set<Term> vs;
          collect_variables(t, vs);
          bool fixed = std::all_of(vs.begin(), vs.end(), [&](const Term& v) {
            return known.count(v) != 0;
          });
          if (fixed) ++score;
        }
        if (cands == 0) {
          best = i;
          best_cands = 0;
          best_score = 1L << 30;
          break;
        }
        if (score > best_score || (score == best_score && cands < best_cands)) {
          best = i;
          best_score = score;
          best_cands = cands;
        }
      }
      const Atom* chosen = pending[best];
      pending.erase(pending.begin() + static_cast<long>(best));
      auto it = index_.find({chosen->predicate, chosen->arity()});
      if (it == index_.end()) impossible_ = true;
      plan_.push_back({chosen, it == index_.end() ? nullptr : &it->second});
      for (const auto& t : chosen->args) collect_variables(t, known);
    }
  }

  bool match(const Term& pattern, const Term& value, std::vector<Term>& trail) {
    switch (pattern.kind()) {
      case Term::Kind::variable: {
        if (const Term* bound = binding_.find(pattern)) return *bound == value;
        binding_.bind(pattern, value);
        trail.push_back(pattern);
        return true;
      }
      case Term::Kind::constant:
        return pattern == value;
      case Term::Kind::functional: {
        if (!value.is_functional() || value.name() != pattern.name() ||
            value.args().size() != pattern.args().size())
          return false;
        for (std::size_t i = 0; i < pattern.args().size(); ++i)
          if (!match(pattern.args()[i], value.args()[i], trail)) return false;
        return true;
      }
    }
    return false;
  }

  template <class Visit>
  bool step(std::size_t depth, Visit& visit) {
    if (depth == plan_.size()) return visit(static_cast<const Substitution&>(binding_));
    const auto& [pattern, candidates] = plan_[depth];
    std::vector<Term> trail;
    for (const Atom* cand : *candidates) {
      bool ok = true;
      for (std::size_t i = 0; i < pattern->args.size() && ok; ++i)
        ok = match(pattern->args[i], cand->args[i], trail);
      if (ok && !step(depth + 1, visit)) return false;
      for (const auto& v : trail) binding_.unbind(v);
      trail.clear();
    }
    return true;
  }

  struct PlanStep {
    const Atom* pattern;
    const std::vector<const Atom*>* candidates;
  };

  Substitution binding_;
  std::map<std::pair<std::string, std::size_t>, std::vector<const Atom*>> index_;
  std::vector<PlanStep> plan_;
  bool impossible_ = false;
};

}  // namespace detail

/// Visits every homomorphism from `source` to `target` extending `seed`.
/// The visitor returns true to continue; the enumeration is exhaustive and
/// duplicate-free.
template <class Visit>
void for_each_homomorphism(const AtomSet& source, const AtomSet& target,
                           const Substitution& seed, Visit&& visit) {
  detail::HomomorphismSearch search(source, target, seed);
  search.run(visit);
}

inline std::vector<Substitution> homomorphisms(const AtomSet& source,
                                               const AtomSet& target,
                                               const Substitution& seed = {}) {
  std::vector<Substitution> out;
  for_each_homomorphism(source, target, seed, [&](const Substitution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

inline std::optional<Substitution> find_homomorphism(
    const AtomSet& source, const AtomSet& target, const Substitution& seed = {}) {
  std::optional<Substitution> out;
  for_each_homomorphism(source, target, seed, [&](const Substitution& s) {
    out = s;
    return false;
  });
  return out;
}

/// F ⊨ Q iff Q maps homomorphically into F.
inline bool entails(const AtomSet& f, const AtomSet& q) {
  return find_homomorphism(q, f).has_value();
}

inline bool equivalent(const AtomSet& a, const AtomSet& b) {
  return entails(a, b) && entails(b, a);
}

/// True when some bijective renaming of variables maps `a` onto `b`.
inline bool isomorphic(const AtomSet& a, const AtomSet& b) {
  if (a.size() != b.size()) return false;
  if (a.variables().size() != b.variables().size()) return false;
  bool found = false;
  for_each_homomorphism(a, b, {}, [&](const Substitution& s) {
    std::set<Term> image;
    for (const auto& [v, t] : s) {
      if (!t.is_variable()) return true;
      image.insert(t);
    }
    if (image.size() != s.size()) return true;
    found = s.apply(a) == b;
    return !found;
  });
  return found;
}

}  // namespace chaseterm
