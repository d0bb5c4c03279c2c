#pragma once

// Word expression grammar:
//
//   expr   := factor*                       juxtaposition is product
//   factor := atom ('^' ['-'|'+'] digits)?
//   atom   := generator | '1' | '(' expr ')'
//           | '[' expr ',' expr ']'         u v u^-1 v^-1
//           | 'c(' expr ',' expr ')'        h z h^-1
//
// Whitespace is ignored between tokens. Generators are identifiers
// [a-z][a-z0-9_]*; a trailing digit run is the generator index, so "a1" and
// "a_1" both name (a, 1).

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sclforge/word.hpp"

namespace sclforge {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Splits an identifier into (name, optional index).
inline Generator generator_from_identifier(std::string_view id) {
  std::size_t end = id.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(id[end - 1]))) --end;
  if (end == id.size() || end == 0) return Generator(std::string(id));
  std::string name(id.substr(0, end));
  unsigned idx = static_cast<unsigned>(std::stoul(std::string(id.substr(end))));
  if (name.size() > 1 && name.back() == '_') name.pop_back();
  return Generator(name, idx);
}

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const Alphabet& alphabet)
      : s_(text), alphabet_(alphabet) {}

  Word parse() {
    Word w = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool at_factor_start() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || c == '[' || c == '1' || std::islower(static_cast<unsigned char>(c));
  }

  Word expr() {
    Word w;
    while (at_factor_start()) w.append(factor());
    return w;
  }

  Word factor() {
    Word base = atom();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    std::int64_t k = 0;
    try {
      k = std::stoll(std::string(s_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("exponent out of range");
    }
    return base.pow(neg ? -k : k);
  }

  Word atom() {
    skip_ws();
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = expr();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word u = expr();
      expect(',');
      Word v = expr();
      expect(']');
      return commutator(u, v);
    }
    if (c == '1') {
      ++pos_;
      return Word();
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::islower(static_cast<unsigned char>(s_[pos_])) ||
            std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string_view id = s_.substr(start, pos_ - start);
    if (id == "c" && pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Word h = expr();
      expect(',');
      Word z = expr();
      expect(')');
      return conjugate(h, z);
    }
    Generator g = generator_from_identifier(id);
    if (!alphabet_.contains(g)) {
      pos_ = start;
      fail("unknown generator '" + std::string(id) + "'");
    }
    return Word::letter(g);
  }

  std::string_view s_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  return detail::WordParser(text, alphabet).parse();
}

}  // namespace sclforge
