#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "chaseterm/atom.hpp"

namespace chaseterm {

/// Finite map from variables to terms. Unbound variables map to themselves.
class Substitution {
 public:
  using Map = std::map<Term, Term>;

  Substitution() = default;
  explicit Substitution(Map bindings) : map_(std::move(bindings)) {}

  void bind(const Term& var, const Term& value) { map_[var] = value; }
  void unbind(const Term& var) { map_.erase(var); }

  const Term* find(const Term& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool binds(const Term& var) const { return map_.count(var) != 0; }

  Term apply(const Term& t) const {
    if (t.is_variable()) {
      auto it = map_.find(t);
      return it == map_.end() ? t : it->second;
    }
    if (t.is_functional()) {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(apply(a));
      return Term::functional(t.name(), std::move(args));
    }
    return t;
  }

  Atom apply(const Atom& a) const {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply(t));
    return out;
  }

  AtomSet apply(const AtomSet& s) const {
    std::vector<Atom> out;
    out.reserve(s.size());
    for (const auto& a : s) out.push_back(apply(a));
    return AtomSet(std::move(out));
  }

  /// this ∘ inner: apply `inner` first, then `this`.
  Substitution after(const Substitution& inner) const {
    Substitution out;
    for (const auto& [v, t] : inner.map_) out.map_[v] = apply(t);
    for (const auto& [v, t] : map_)
      if (!inner.binds(v)) out.map_[v] = t;
    return out;
  }

  Substitution restricted_to(const std::set<Term>& vars) const {
    Substitution out;
    for (const auto& [v, t] : map_)
      if (vars.count(v)) out.map_[v] = t;
    return out;
  }

  /// Drops bindings of the form x -> x.
  Substitution normalized() const {
    Substitution out;
    for (const auto& [v, t] : map_)
      if (v != t) out.map_[v] = t;
    return out;
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& bindings() const { return map_; }
  Map::const_iterator begin() const { return map_.begin(); }
  Map::const_iterator end() const { return map_.end(); }

  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : map_) {
      if (!first) out += ", ";
      first = false;
      out += v.str() + "->" + t.str();
    }
    return out + "}";
  }

  friend bool operator==(const Substitution&, const Substitution&) = default;
  friend auto operator<=>(const Substitution&, const Substitution&) = default;

 private:
  Map map_;
};

}  // namespace chaseterm
