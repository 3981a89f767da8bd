#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaseterm/atom.hpp"
#include "chaseterm/homomorphism.hpp"
#include "chaseterm/substitution.hpp"

namespace chaseterm {

/// An existential rule B⁺, not B⁻₁, …, not B⁻ₖ → H. A rule with no negative
/// body is a plain existential rule.
class Rule {
 public:
  Rule() = default;
  Rule(std::string id, AtomSet body, AtomSet head,
       std::vector<AtomSet> negative = {})
      : id_(std::move(id)),
        body_(std::move(body)),
        head_(std::move(head)),
        negative_(std::move(negative)) {
    auto bv = body_.variables();
    for (const auto& v : head_.variables()) {
      if (bv.count(v))
        frontier_.push_back(v);
      else
        existentials_.push_back(v);
    }
  }

  const std::string& id() const { return id_; }
  const AtomSet& body() const { return body_; }
  const AtomSet& head() const { return head_; }
  const std::vector<AtomSet>& negative() const { return negative_; }
  const std::vector<Term>& frontier() const { return frontier_; }
  const std::vector<Term>& existentials() const { return existentials_; }

  bool is_positive() const { return negative_.empty(); }

  bool is_frontier(const Term& v) const {
    return std::binary_search(frontier_.begin(), frontier_.end(), v);
  }
  bool is_existential(const Term& v) const {
    return std::binary_search(existentials_.begin(), existentials_.end(), v);
  }

  std::set<Term> variables() const {
    auto out = body_.variables();
    for (const auto& v : head_.variables()) out.insert(v);
    for (const auto& n : negative_)
      for (const auto& v : n.variables()) out.insert(v);
    return out;
  }

  Rule with_id(std::string id) const {
    Rule r = *this;
    r.id_ = std::move(id);
    return r;
  }

  std::string str() const {
    std::string out = id_ + ": ";
    bool first = true;
    for (const auto& a : body_) {
      if (!first) out += ", ";
      first = false;
      out += a.str();
    }
    for (const auto& n : negative_) {
      out += ", not ";
      if (n.size() == 1) {
        out += n[0].str();
      } else {
        out += "(";
        for (std::size_t i = 0; i < n.size(); ++i) {
          if (i) out += ", ";
          out += n[i].str();
        }
        out += ")";
      }
    }
    out += " -> ";
    first = true;
    for (const auto& a : head_) {
      if (!first) out += ", ";
      first = false;
      out += a.str();
    }
    return out;
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.id_ == b.id_ && a.body_ == b.body_ && a.head_ == b.head_ &&
           a.negative_ == b.negative_;
  }

 private:
  std::string id_;
  AtomSet body_;
  AtomSet head_;
  std::vector<AtomSet> negative_;
  std::vector<Term> frontier_;
  std::vector<Term> existentials_;
};

/// pos(R): the rule without its negative bodies.
inline Rule pos(const Rule& r) { return Rule(r.id(), r.body(), r.head()); }

inline std::vector<Rule> pos(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const auto& r : rules) out.push_back(pos(r));
  return out;
}

/// Applies a substitution to every part of a rule.
inline Rule substitute(const Rule& r, const Substitution& s, std::string id) {
  std::vector<AtomSet> neg;
  for (const auto& n : r.negative()) neg.push_back(s.apply(n));
  return Rule(std::move(id), s.apply(r.body()), s.apply(r.head()), std::move(neg));
}

/// Renames every variable of `r` to a fresh one. Fresh serials are minted in
/// variable order, so the renaming is monotone and atom indices are kept.
inline Rule rename_apart(const Rule& r, Substitution* renaming = nullptr) {
  Substitution s;
  for (const auto& v : r.variables()) s.bind(v, Term::fresh_variable(v.name()));
  if (renaming) *renaming = s;
  return substitute(r, s, r.id());
}

/// Extends `pi` so that every existential variable of `r` maps to a fresh
/// variable and returns π(safe(H)).
inline AtomSet instantiate_head(const Rule& r, const Substitution& pi,
                                Substitution* extended = nullptr) {
  Substitution s = pi;
  for (const auto& z : r.existentials()) s.bind(z, Term::fresh_variable(z.name()));
  if (extended) *extended = s;
  return s.apply(r.head());
}

inline bool is_body_homomorphism(const Rule& r, const Substitution& pi,
                                 const AtomSet& f) {
  for (const auto& v : r.body().variables())
    if (!pi.binds(v)) return false;
  return pi.apply(r.body()).subset_of(f);
}

/// α(F, R, π) = F ∪ π(safe(H)). Throws when π is not a homomorphism of the
/// whole body into F.
inline AtomSet apply(const AtomSet& f, const Rule& r, const Substitution& pi) {
  if (!is_body_homomorphism(r, pi, f))
    throw std::invalid_argument("trigger for rule " + r.id() +
                                " is not a homomorphism of its body");
  return f.united(instantiate_head(r, pi));
}

/// A trigger π is useful when it cannot be extended to map B ∪ H into F.
inline bool is_useful(const Substitution& pi, const Rule& r, const AtomSet& f) {
  std::set<Term> fr(r.frontier().begin(), r.frontier().end());
  return !find_homomorphism(r.head(), f, pi.restricted_to(fr)).has_value();
}

struct Frozen {
  AtomSet atoms;
  Substitution freezing;  // variable -> reserved constant
};

/// Name of the reserved constant standing for a frozen variable. User
/// constants start with a lowercase letter, so these never collide.
inline Term frozen_constant(const Term& v) {
  std::string name = "_c_" + v.name();
  if (v.serial() != 0) name += "#" + std::to_string(v.serial());
  return Term::constant(std::move(name));
}

inline Frozen freeze(const AtomSet& a) {
  Frozen out;
  for (const auto& v : a.variables()) out.freezing.bind(v, frozen_constant(v));
  out.atoms = out.freezing.apply(a);
  return out;
}

struct CoreResult {
  AtomSet atoms;
  Substitution retraction;  // endomorphism folding the input onto `atoms`
};

/// Computes the core by iterated folding: look for an endomorphism whose
/// image misses some atom, apply it, and repeat until none exists.
inline CoreResult core_with_retraction(const AtomSet& f) {
  CoreResult out{f, {}};
  bool folded = true;
  while (folded) {
    folded = false;
    const auto& atoms = out.atoms.atoms();
    for (std::size_t i = atoms.size(); i-- > 0;) {
      if (atoms[i].is_ground()) continue;
      AtomSet target = out.atoms;
      target.erase(atoms[i]);
      if (auto h = find_homomorphism(out.atoms, target)) {
        Substitution step = h->normalized();
        out.atoms = step.apply(out.atoms);
        out.retraction = step.after(out.retraction);
        folded = true;
        break;
      }
    }
  }
  out.retraction = out.retraction.normalized();
  return out;
}

inline AtomSet core(const AtomSet& f) { return core_with_retraction(f).atoms; }

}  // namespace chaseterm
