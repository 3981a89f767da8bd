#pragma once

#include <cctype>
#include <istream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaseterm/knowledge_base.hpp"

namespace chaseterm {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, arity, safeness, duplicate };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + msg),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Accept functional terms f(t, …) as arguments. Only skolemized rules
  /// printed by the engine use them.
  bool allow_functional_terms = false;
};

namespace detail {

struct Token {
  enum class Kind { ident, variable, lparen, rparen, comma, dot, colon, arrow, query, end };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Token::Kind::end, {}, line, col};
    if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)) ||
        std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && is_word(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = std::isupper(static_cast<unsigned char>(c)) ? Token::Kind::variable
                                                           : Token::Kind::ident;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '(': t.kind = Token::Kind::lparen; break;
      case ')': t.kind = Token::Kind::rparen; break;
      case ',': t.kind = Token::Kind::comma; break;
      case '.': t.kind = Token::Kind::dot; break;
      case ':': t.kind = Token::Kind::colon; break;
      case '?': t.kind = Token::Kind::query; break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          t.kind = Token::Kind::arrow;
          t.text = "->";
          advance(2);
          out.push_back(std::move(t));
          continue;
        }
        [[fallthrough]];
      default:
        throw ParseError(ParseError::Kind::syntax, line, col,
                         std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(1, c);
    advance(1);
    out.push_back(std::move(t));
  }
  out.push_back({Token::Kind::end, {}, line, col});
  return out;
}

struct Located {
  Atom atom;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions options)
      : toks_(std::move(tokens)), opts_(options) {}

  KnowledgeBase document() {
    KnowledgeBase kb;
    std::vector<std::pair<std::string, Rule>> pending_rules;
    std::size_t rule_count = 0;
    while (peek().kind != Token::Kind::end) {
      if (peek().kind == Token::Kind::query) {
        next();
        Scope scope{Scope::Kind::fresh, {}};
        AtomSet q;
        for (auto& l : atom_list(scope)) q.insert(l.atom);
        expect(Token::Kind::dot, "'.' after query");
        kb.queries.push_back(std::move(q));
        continue;
      }
      std::string label;
      const Token& start = peek();
      if ((start.kind == Token::Kind::ident || start.kind == Token::Kind::variable) &&
          peek(1).kind == Token::Kind::colon) {
        label = start.text;
        next();
        next();
      }
      Scope scope{label.empty() && !looks_like_rule() ? Scope::Kind::facts
                                                      : Scope::Kind::fresh,
                  {}};
      std::vector<Located> positive;
      std::vector<std::vector<Located>> negative;
      body(scope, positive, negative);
      if (peek().kind == Token::Kind::arrow) {
        next();
        auto head = atom_list(scope);
        expect(Token::Kind::dot, "'.' at end of rule");
        ++rule_count;
        kb.rules.push_back(make_rule(label, rule_count, start, positive, negative, head));
      } else {
        if (!label.empty()) fail(peek(), "expected '->' in labelled rule");
        if (!negative.empty()) fail(start, "negation is only allowed in rule bodies");
        expect(Token::Kind::dot, "'.' or '->'");
        for (auto& l : positive) kb.facts.insert(l.atom);
      }
    }
    return kb;
  }

 private:
  struct Scope {
    enum class Kind { facts, fresh } kind;
    std::map<std::string, Term> vars;
  };

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    std::string found = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(ParseError::Kind::syntax, t.line, t.column, msg + ", found " + found);
  }

  const Token& expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) fail(peek(), "expected " + what);
    return next();
  }

  // Scans ahead to the statement terminator to see whether an arrow occurs.
  bool looks_like_rule() const {
    int depth = 0;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
      switch (toks_[k].kind) {
        case Token::Kind::lparen: ++depth; break;
        case Token::Kind::rparen: --depth; break;
        case Token::Kind::arrow: return true;
        case Token::Kind::dot:
          if (depth <= 0) return false;
          break;
        case Token::Kind::end: return false;
        default: break;
      }
    }
    return false;
  }

  Term variable(Scope& scope, const std::string& name) {
    auto it = scope.vars.find(name);
    if (it != scope.vars.end()) return it->second;
    Term v = scope.kind == Scope::Kind::facts ? Term::variable(name)
                                              : Term::fresh_variable(name);
    scope.vars.emplace(name, v);
    return v;
  }

  Term term(Scope& scope) {
    const Token& t = peek();
    if (t.kind == Token::Kind::variable) {
      next();
      return variable(scope, t.text);
    }
    if (t.kind == Token::Kind::ident) {
      next();
      if (peek().kind == Token::Kind::lparen) {
        if (!opts_.allow_functional_terms)
          fail(peek(), "functional terms are not allowed in input");
        next();
        std::vector<Term> args;
        if (peek().kind != Token::Kind::rparen) {
          args.push_back(term(scope));
          while (peek().kind == Token::Kind::comma) {
            next();
            args.push_back(term(scope));
          }
        }
        expect(Token::Kind::rparen, "')'");
        return Term::functional(t.text, std::move(args));
      }
      return Term::constant(t.text);
    }
    fail(t, "expected a term");
  }

  Located atom(Scope& scope) {
    const Token& name = peek();
    if (name.kind != Token::Kind::ident) fail(name, "expected a predicate name");
    if (name.text == "not") fail(name, "'not' is reserved");
    next();
    expect(Token::Kind::lparen, "'(' after predicate name");
    std::vector<Term> args;
    args.push_back(term(scope));
    while (peek().kind == Token::Kind::comma) {
      next();
      args.push_back(term(scope));
    }
    expect(Token::Kind::rparen, "')' to close the argument list");
    Located out{Atom(name.text, std::move(args)), name.line, name.column};
    check_arity(out);
    return out;
  }

  std::vector<Located> atom_list(Scope& scope) {
    std::vector<Located> out;
    out.push_back(atom(scope));
    while (peek().kind == Token::Kind::comma) {
      next();
      out.push_back(atom(scope));
    }
    return out;
  }

  void body(Scope& scope, std::vector<Located>& positive,
            std::vector<std::vector<Located>>& negative) {
    do {
      if (!positive.empty() || !negative.empty()) next();  // the comma
      if (peek().kind == Token::Kind::ident && peek().text == "not") {
        next();
        if (peek().kind == Token::Kind::lparen) {
          next();
          negative.push_back(atom_list(scope));
          expect(Token::Kind::rparen, "')' to close the negated conjunction");
        } else {
          negative.push_back({atom(scope)});
        }
      } else {
        positive.push_back(atom(scope));
      }
    } while (peek().kind == Token::Kind::comma);
  }

  void check_arity(const Located& l) {
    auto [it, inserted] = arity_.emplace(l.atom.predicate, l.atom.arity());
    if (!inserted && it->second != l.atom.arity())
      throw ParseError(ParseError::Kind::arity, l.line, l.column,
                       "predicate " + l.atom.predicate + " used with arity " +
                           std::to_string(l.atom.arity()) + " but earlier with arity " +
                           std::to_string(it->second));
  }

  Rule make_rule(const std::string& label, std::size_t ordinal, const Token& start,
                 const std::vector<Located>& positive,
                 const std::vector<std::vector<Located>>& negative,
                 const std::vector<Located>& head) {
    if (positive.empty())
      throw ParseError(ParseError::Kind::safeness, start.line, start.column,
                       "rule has no positive body atom");
    std::string id = label;
    if (id.empty()) {
      id = "r" + std::to_string(ordinal);
      for (int k = 1; ids_.count(id); ++k)
        id = "r" + std::to_string(ordinal) + "_" + std::to_string(k);
    }
    if (!ids_.insert(id).second)
      throw ParseError(ParseError::Kind::duplicate, start.line, start.column,
                       "duplicate rule id " + id);
    AtomSet b, h;
    for (const auto& l : positive) b.insert(l.atom);
    for (const auto& l : head) h.insert(l.atom);
    auto bound = b.variables();
    std::vector<AtomSet> neg;
    for (const auto& group : negative) {
      AtomSet n;
      for (const auto& l : group) {
        for (const auto& t : l.atom.args) {
          if (t.is_variable() && !bound.count(t))
            throw ParseError(ParseError::Kind::safeness, l.line, l.column,
                             "rule " + id + ": variable " + t.name() +
                                 " of a negative body does not occur in the positive body");
        }
        n.insert(l.atom);
      }
      neg.push_back(std::move(n));
    }
    return Rule(id, std::move(b), std::move(h), std::move(neg));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
  std::map<std::string, std::size_t> arity_;
  std::set<std::string> ids_;
};

}  // namespace detail

/// Parses the .kbr text format. Rules are renamed apart on load.
inline KnowledgeBase parse(std::string_view text, ParseOptions options = {}) {
  detail::Parser p(detail::tokenize(text), options);
  return p.document();
}

inline KnowledgeBase parse(std::istream& in, ParseOptions options = {}) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse(std::string_view(text), options);
}

/// Parses a single query such as "? p(a,X)." (the leading '?' is optional).
inline AtomSet parse_query(std::string_view text) {
  std::string src(text);
  auto first = src.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || src[first] != '?') src = "? " + src;
  auto last = src.find_last_not_of(" \t\r\n");
  if (src[last] != '.') src += ".";
  auto kb = parse(std::string_view(src));
  if (kb.queries.size() != 1 || !kb.facts.empty() || !kb.rules.empty())
    throw ParseError(ParseError::Kind::syntax, 1, 1, "expected exactly one query");
  return kb.queries.front();
}

}  // namespace chaseterm
