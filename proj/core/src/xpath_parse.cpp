// Copyright 2026 The secxml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secxml/error.hpp"
#include "secxml/xpath.hpp"

namespace secxml {
namespace {

enum class Tok { Name, Number, String, ColonColon, Star, Slash, Bar, LBracket, RBracket, LParen, RParen, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(msg, 1, i + 1); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '*':
        single(Tok::Star);
        continue;
      case '/':
        single(Tok::Slash);
        continue;
      case '|':
        single(Tok::Bar);
        continue;
      case '[':
        single(Tok::LBracket);
        continue;
      case ']':
        single(Tok::RBracket);
        continue;
      case '(':
        single(Tok::LParen);
        continue;
      case ')':
        single(Tok::RParen);
        continue;
      case '=':
        single(Tok::Equals);
        continue;
      case ':':
        if (i + 1 < s.size() && s[i + 1] == ':') {
          out.push_back({Tok::ColonColon, "::", start});
          i += 2;
          continue;
        }
        fail("expected '::'");
        break;
      case '\'':
      case '"': {
        std::string value;
        ++i;
        for (;;) {
          if (i >= s.size()) fail("unterminated string literal");
          if (s[i] == c) {
            if (i + 1 < s.size() && s[i + 1] == c) {
              value += c;
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          value += s[i++];
        }
        out.push_back({Tok::String, std::move(value), start});
        continue;
      }
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (is_name_start(c)) {
      while (i < s.size() && is_name_char(s[i])) ++i;
      out.push_back({Tok::Name, std::string(s.substr(start, i - start)), start});
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

std::optional<Axis> axis_from(std::string_view name) {
  if (name == "self") return Axis::Self;
  if (name == "child") return Axis::Child;
  if (name == "descendant") return Axis::Descendant;
  if (name == "descendant-or-self") return Axis::DescendantOrSelf;
  if (name == "parent") return Axis::Parent;
  if (name == "ancestor") return Axis::Ancestor;
  if (name == "ancestor-or-self") return Axis::AncestorOrSelf;
  return std::nullopt;
}

// Thrown to abandon a speculative parse of a parenthesised qualifier.
struct Backtrack {};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  XPathExpr whole_expr() {
    XPathExpr e = union_expr();
    expect(Tok::End, "end of expression");
    return e;
  }

  Qualifier whole_qualifier() {
    Qualifier q = or_expr();
    expect(Tok::End, "end of qualifier");
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  bool at(Tok t, std::size_t ahead = 0) const { return peek(ahead).kind == t; }
  bool at_name(std::string_view name, std::size_t ahead = 0) const {
    return at(Tok::Name, ahead) && peek(ahead).text == name;
  }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, 1, t.offset + 1);
  }

  const Token& expect(Tok t, const char* what) {
    if (!at(t)) fail(std::string("expected ") + what);
    return advance();
  }

  bool at_text_test(std::size_t ahead = 0) const {
    return at_name("text", ahead) && at(Tok::LParen, ahead + 1) && at(Tok::RParen, ahead + 2);
  }

  XPathExpr union_expr() {
    XPathExpr e = path_expr();
    while (at(Tok::Bar)) {
      advance();
      e = XPathExpr::union_of(std::move(e), path_expr());
    }
    return e;
  }

  XPathExpr path_expr() {
    XPathExpr e = primary();
    while (at(Tok::Slash) && !at_text_test(1)) {
      advance();
      e = XPathExpr::slash(std::move(e), primary());
    }
    return e;
  }

  XPathExpr primary() {
    if (at(Tok::LParen)) {
      advance();
      XPathExpr inner = union_expr();
      expect(Tok::RParen, "')'");
      return XPathExpr::filter(std::move(inner), predicates());
    }
    if (!at(Tok::Name)) fail("expected an axis name");
    auto axis = axis_from(peek().text);
    if (!axis) fail("unknown axis");
    advance();
    expect(Tok::ColonColon, "'::'");
    std::string label;
    if (at(Tok::Star)) {
      advance();
      label = "*";
    } else {
      label = expect(Tok::Name, "a name test").text;
    }
    return XPathExpr::step(*axis, std::move(label), predicates());
  }

  std::vector<Predicate> predicates() {
    std::vector<Predicate> out;
    while (at(Tok::LBracket)) {
      advance();
      if (at(Tok::Number) && at(Tok::RBracket, 1)) {
        std::size_t k = 0;
        const std::string& digits = peek().text;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc() || k == 0) fail("positions start at 1");
        advance();
        out.push_back(Predicate::position(k));
      } else {
        out.emplace_back(or_expr());
      }
      expect(Tok::RBracket, "']'");
    }
    return out;
  }

  Qualifier or_expr() {
    Qualifier q = and_expr();
    while (at_name("or") && !at(Tok::ColonColon, 1)) {
      advance();
      q = Qualifier::disj(std::move(q), and_expr());
    }
    return q;
  }

  Qualifier and_expr() {
    Qualifier q = unary();
    while (at_name("and") && !at(Tok::ColonColon, 1)) {
      advance();
      q = Qualifier::conj(std::move(q), unary());
    }
    return q;
  }

  Qualifier unary() {
    if (at_name("not") && at(Tok::LParen, 1)) {
      advance();
      advance();
      Qualifier q = or_expr();
      expect(Tok::RParen, "')'");
      return Qualifier::negate(std::move(q));
    }
    if (at(Tok::LParen)) {
      std::size_t saved = pos_;
      try {
        advance();
        Qualifier q = or_expr();
        if (!at(Tok::RParen)) throw Backtrack{};
        advance();
        if (at(Tok::Slash) || at(Tok::LBracket) || at(Tok::Bar) || at(Tok::Equals)) throw Backtrack{};
        return q;
      } catch (const Backtrack&) {
        pos_ = saved;
      } catch (const ParseError&) {
        pos_ = saved;
      }
    }
    return atom();
  }

  Qualifier atom() {
    if (at_text_test()) {
      pos_ += 3;
      expect(Tok::Equals, "'='");
      std::string value = expect(Tok::String, "a string literal").text;
      return Qualifier::text_equals(XPathExpr::step(Axis::Self, "*"), std::move(value));
    }
    XPathExpr p = union_expr();
    if (at(Tok::Slash)) {
      advance();
      pos_ += 3;  // text ( ), guaranteed by path_expr's lookahead
      expect(Tok::Equals, "'='");
      std::string value = expect(Tok::String, "a string literal").text;
      return Qualifier::text_equals(std::move(p), std::move(value));
    }
    if (at(Tok::Equals)) {
      advance();
      if (!at_name("self")) fail("expected 'self::' after '='");
      advance();
      expect(Tok::ColonColon, "'::'");
      std::string label;
      if (at(Tok::Star)) {
        advance();
        label = "*";
      } else {
        label = expect(Tok::Name, "a name test").text;
      }
      return Qualifier::node_equals(std::move(p), std::move(label));
    }
    return Qualifier::path(std::move(p));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

template <typename T>
T check_fragment(T value, Fragment max_fragment, std::string_view text) {
  Fragment f = classify(value);
  if (f > max_fragment) {
    throw FragmentError("'" + std::string(text) + "' lies in fragment " + std::string(to_string(f)) +
                        ", above the permitted " + std::string(to_string(max_fragment)));
  }
  return value;
}

}  // namespace

XPathExpr parse_xpath(std::string_view text, Fragment max_fragment) {
  return check_fragment(Parser(text).whole_expr(), max_fragment, text);
}

Qualifier parse_qualifier(std::string_view text, Fragment max_fragment) {
  return check_fragment(Parser(text).whole_qualifier(), max_fragment, text);
}

}  // namespace secxml
