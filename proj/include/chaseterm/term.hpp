#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chaseterm {

/// A first-order term: a constant, a variable, or a functional term.
///
/// Variables are identified by (name, serial). Serial 0 is reserved for
/// variables written in facts; every other variable is minted by
/// `Term::fresh_variable`, whose counter is process-wide and monotone, so
/// two minted variables are never equal. Functional terms only arise from
/// skolemization.
class Term {
 public:
  enum class Kind : std::uint8_t { constant, variable, functional };

  Term() = default;

  static Term constant(std::string name) {
    Term t;
    t.kind_ = Kind::constant;
    t.name_ = std::move(name);
    return t;
  }

  static Term variable(std::string name, std::uint64_t serial = 0) {
    Term t;
    t.kind_ = Kind::variable;
    t.name_ = std::move(name);
    t.serial_ = serial;
    return t;
  }

  /// Mints a variable that differs from every variable seen so far.
  static Term fresh_variable(std::string name) {
    return variable(std::move(name), next_serial());
  }

  static Term functional(std::string symbol, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::functional;
    t.name_ = std::move(symbol);
    t.args_ = std::make_shared<const std::vector<Term>>(std::move(args));
    return t;
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_variable() const { return kind_ == Kind::variable; }
  bool is_functional() const { return kind_ == Kind::functional; }

  const std::string& name() const { return name_; }
  std::uint64_t serial() const { return serial_; }

  const std::vector<Term>& args() const {
    static const std::vector<Term> none;
    return args_ ? *args_ : none;
  }

  /// True when the term contains no variable.
  bool is_ground() const {
    if (kind_ == Kind::variable) return false;
    for (const auto& a : args())
      if (!a.is_ground()) return false;
    return true;
  }

  std::string str() const {
    switch (kind_) {
      case Kind::constant:
        return name_;
      case Kind::variable:
        return serial_ == 0 ? name_ : name_ + "_" + std::to_string(serial_);
      case Kind::functional: {
        std::string out = name_ + "(";
        bool first = true;
        for (const auto& a : args()) {
          if (!first) out += ",";
          first = false;
          out += a.str();
        }
        return out + ")";
      }
    }
    return {};
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.compare(b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    return a.compare(b);
  }

 private:
  std::strong_ordering compare(const Term& o) const {
    if (auto c = kind_ <=> o.kind_; c != 0) return c;
    if (auto c = name_.compare(o.name_); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = serial_ <=> o.serial_; c != 0) return c;
    if (args_ == o.args_) return std::strong_ordering::equal;
    const auto& xs = args();
    const auto& ys = o.args();
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
      if (auto c = xs[i].compare(ys[i]); c != 0) return c;
    return xs.size() <=> ys.size();
  }

  static std::uint64_t next_serial() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  Kind kind_ = Kind::constant;
  std::uint64_t serial_ = 0;
  std::string name_;
  std::shared_ptr<const std::vector<Term>> args_;
};

}  // namespace chaseterm
