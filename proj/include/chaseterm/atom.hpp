#pragma once

#include <algorithm>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chaseterm/term.hpp"

namespace chaseterm {

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> arguments)
      : predicate(std::move(pred)), args(std::move(arguments)) {}

  std::size_t arity() const { return args.size(); }

  bool is_ground() const {
    return std::all_of(args.begin(), args.end(),
                       [](const Term& t) { return t.is_ground(); });
  }

  std::string str() const {
    std::string out = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].str();
    }
    return out + ")";
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

namespace detail {
inline void collect_variables(const Term& t, std::set<Term>& out) {
  if (t.is_variable()) {
    out.insert(t);
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}
}  // namespace detail

/// A finite set of atoms kept as a sorted, duplicate-free vector so that
/// iteration order (and therefore every "first match" choice downstream)
/// is deterministic.
class AtomSet {
 public:
  using const_iterator = std::vector<Atom>::const_iterator;

  AtomSet() = default;
  AtomSet(std::initializer_list<Atom> atoms) {
    for (const auto& a : atoms) insert(a);
  }
  explicit AtomSet(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  }

  bool insert(const Atom& a) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it != atoms_.end() && *it == a) return false;
    atoms_.insert(it, a);
    return true;
  }

  /// Returns the number of atoms that were not already present.
  std::size_t insert(const AtomSet& other) {
    std::vector<Atom> merged;
    merged.reserve(atoms_.size() + other.atoms_.size());
    std::set_union(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                   other.atoms_.end(), std::back_inserter(merged));
    std::size_t added = merged.size() - atoms_.size();
    atoms_ = std::move(merged);
    return added;
  }

  bool erase(const Atom& a) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    if (it == atoms_.end() || *it != a) return false;
    atoms_.erase(it);
    return true;
  }

  bool contains(const Atom& a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
  }

  /// Subset test: every atom of `this` is in `other`.
  bool subset_of(const AtomSet& other) const {
    return std::includes(other.atoms_.begin(), other.atoms_.end(),
                         atoms_.begin(), atoms_.end());
  }

  AtomSet united(const AtomSet& other) const {
    AtomSet out = *this;
    out.insert(other);
    return out;
  }

  AtomSet minus(const AtomSet& other) const {
    AtomSet out;
    std::set_difference(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                        other.atoms_.end(), std::back_inserter(out.atoms_));
    return out;
  }

  std::set<Term> variables() const {
    std::set<Term> out;
    for (const auto& a : atoms_)
      for (const auto& t : a.args) detail::collect_variables(t, out);
    return out;
  }

  std::set<Term> terms() const {
    std::set<Term> out;
    for (const auto& a : atoms_) out.insert(a.args.begin(), a.args.end());
    return out;
  }

  std::set<std::string> predicates() const {
    std::set<std::string> out;
    for (const auto& a : atoms_) out.insert(a.predicate);
    return out;
  }

  bool is_ground() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom& a) { return a.is_ground(); });
  }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::size_t index_of(const Atom& a) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) out += ", ";
      out += atoms_[i].str();
    }
    return out + "}";
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
  friend auto operator<=>(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace chaseterm
