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

#include "secxml/dtd.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <tuple>
#include <map>
#include <set>
#include <sstream>

#include "secxml/error.hpp"

namespace secxml {

// --------------------------------------------------------------------
// ContentModel

ContentModel ContentModel::str() { return ContentModel(Kind::Str, {}, {}); }
ContentModel ContentModel::epsilon() { return ContentModel(Kind::Epsilon, {}, {}); }
ContentModel ContentModel::name(std::string type) { return ContentModel(Kind::Name, std::move(type), {}); }

ContentModel ContentModel::seq(ContentModel first, ContentModel second) {
  return ContentModel(Kind::Seq, {}, {std::move(first), std::move(second)});
}

ContentModel ContentModel::alt(ContentModel first, ContentModel second) {
  return ContentModel(Kind::Alt, {}, {std::move(first), std::move(second)});
}

ContentModel ContentModel::star(ContentModel body) { return ContentModel(Kind::Star, {}, {std::move(body)}); }

std::size_t ContentModel::size() const {
  std::size_t n = 1;
  for (const auto& op : operands_) n += op.size();
  return n;
}

bool ContentModel::mentions_text() const {
  if (kind_ == Kind::Str) return true;
  return std::any_of(operands_.begin(), operands_.end(), [](const ContentModel& m) { return m.mentions_text(); });
}

void ContentModel::collect_types(std::set<std::string>& out) const {
  if (kind_ == Kind::Name) out.insert(name_);
  for (const auto& op : operands_) op.collect_types(out);
}

namespace {

int precedence(ContentModel::Kind k) {
  switch (k) {
    case ContentModel::Kind::Alt:
      return 0;
    case ContentModel::Kind::Seq:
      return 1;
    default:
      return 2;
  }
}

void render(const ContentModel& m, std::string& out);

void render_operand(const ContentModel& m, int min_precedence, std::string& out) {
  if (precedence(m.kind()) < min_precedence) {
    out += '(';
    render(m, out);
    out += ')';
  } else {
    render(m, out);
  }
}

void render(const ContentModel& m, std::string& out) {
  using K = ContentModel::Kind;
  switch (m.kind()) {
    case K::Str:
      out += "STR";
      break;
    case K::Epsilon:
      out += "EPSILON";
      break;
    case K::Name:
      out += m.type_name();
      break;
    case K::Seq:
      render_operand(m.operands()[0], 1, out);
      out += ", ";
      render_operand(m.operands()[1], 2, out);
      break;
    case K::Alt:
      render_operand(m.operands()[0], 0, out);
      out += " | ";
      render_operand(m.operands()[1], 1, out);
      break;
    case K::Star:
      render_operand(m.operands()[0], 3, out);
      out += '*';
      break;
  }
}

}  // namespace

std::string ContentModel::to_string() const {
  std::string out;
  render(*this, out);
  return out;
}

// --------------------------------------------------------------------
// ContentAutomaton: Thompson construction followed by subset construction.

namespace {

struct Nfa {
  struct State {
    std::vector<std::size_t> epsilon;
    std::vector<std::pair<std::string, std::size_t>> moves;
  };
  std::vector<State> states;

  std::size_t add() {
    states.emplace_back();
    return states.size() - 1;
  }

  // Returns (entry, exit) of the sub-automaton for m.
  std::pair<std::size_t, std::size_t> build(const ContentModel& m) {
    using K = ContentModel::Kind;
    std::size_t in = add();
    std::size_t out = add();
    switch (m.kind()) {
      case K::Str:
        states[in].moves.emplace_back(std::string(kTextSymbol), out);
        break;
      case K::Epsilon:
        states[in].epsilon.push_back(out);
        break;
      case K::Name:
        states[in].moves.emplace_back(m.type_name(), out);
        break;
      case K::Seq: {
        auto [a_in, a_out] = build(m.operands()[0]);
        auto [b_in, b_out] = build(m.operands()[1]);
        states[in].epsilon.push_back(a_in);
        states[a_out].epsilon.push_back(b_in);
        states[b_out].epsilon.push_back(out);
        break;
      }
      case K::Alt: {
        auto [a_in, a_out] = build(m.operands()[0]);
        auto [b_in, b_out] = build(m.operands()[1]);
        states[in].epsilon.push_back(a_in);
        states[in].epsilon.push_back(b_in);
        states[a_out].epsilon.push_back(out);
        states[b_out].epsilon.push_back(out);
        break;
      }
      case K::Star: {
        auto [a_in, a_out] = build(m.operands()[0]);
        states[in].epsilon.push_back(a_in);
        states[in].epsilon.push_back(out);
        states[a_out].epsilon.push_back(a_in);
        states[a_out].epsilon.push_back(out);
        break;
      }
    }
    return {in, out};
  }

  std::set<std::size_t> closure(std::set<std::size_t> set) const {
    std::vector<std::size_t> stack(set.begin(), set.end());
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t t : states[s].epsilon) {
        if (set.insert(t).second) stack.push_back(t);
      }
    }
    return set;
  }
};

}  // namespace

ContentAutomaton::ContentAutomaton(const ContentModel& model) {
  Nfa nfa;
  auto [start, accept] = nfa.build(model);

  std::map<std::set<std::size_t>, std::size_t> index;
  std::vector<std::set<std::size_t>> pending;

  auto intern = [&](std::set<std::size_t> set) {
    auto [it, inserted] = index.emplace(std::move(set), transitions_.size());
    if (inserted) {
      transitions_.emplace_back();
      accepting_.push_back(it->first.count(accept) != 0);
      pending.push_back(it->first);
    }
    return it->second;
  };

  intern(nfa.closure({start}));
  while (!pending.empty()) {
    std::set<std::size_t> current = std::move(pending.back());
    pending.pop_back();
    std::size_t from = index.at(current);

    std::map<std::string, std::set<std::size_t>> targets;
    for (std::size_t s : current) {
      for (const auto& [symbol, to] : nfa.states[s].moves) targets[symbol].insert(to);
    }
    for (auto& [symbol, set] : targets) {
      std::size_t to = intern(nfa.closure(std::move(set)));
      transitions_[from].emplace(symbol, to);
    }
  }
}

bool ContentAutomaton::accepts(std::span<const std::string> word) const {
  std::size_t state = 0;
  for (const auto& symbol : word) {
    auto it = transitions_[state].find(symbol);
    if (it == transitions_[state].end()) return false;
    state = it->second;
  }
  return accepting_[state];
}

// --------------------------------------------------------------------
// Dtd

Dtd::Dtd(std::string root, std::vector<std::pair<std::string, ContentModel>> productions) : root_(std::move(root)) {
  for (auto& [type, model] : productions) {
    if (productions_.count(type) != 0) throw SchemaError("duplicate production for element type '" + type + "'");
    if (model.mentions_text() && model.kind() != ContentModel::Kind::Str) {
      throw SchemaError("mixed content in production of '" + type + "': STR must be the whole content model");
    }
    std::vector<std::string> children;
    std::set<std::string> seen;
    std::function<void(const ContentModel&)> walk = [&](const ContentModel& m) {
      if (m.kind() == ContentModel::Kind::Name && seen.insert(m.type_name()).second) children.push_back(m.type_name());
      for (const auto& op : m.operands()) walk(op);
    };
    walk(model);
    order_.push_back(type);
    ContentAutomaton automaton(model);
    productions_.emplace(type, Production{std::move(model), std::move(automaton), std::move(children)});
  }
  if (productions_.count(root_) == 0) throw SchemaError("root type '" + root_ + "' has no production");
  for (const auto& [type, prod] : productions_) {
    for (const auto& child : prod.child_types) {
      if (productions_.count(child) == 0) {
        throw SchemaError("production of '" + type + "' references undeclared element type '" + child + "'");
      }
    }
  }

  // A type is recursive when it reaches itself; one cycle anywhere flags the DTD.
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark, std::less<>> mark;
  std::function<bool(const std::string&)> cyclic = [&](const std::string& type) {
    Mark& m = mark[type];
    if (m == Mark::Active) return true;
    if (m == Mark::Done) return false;
    m = Mark::Active;
    for (const auto& child : productions_.at(type).child_types) {
      if (cyclic(child)) return true;
    }
    mark[type] = Mark::Done;
    return false;
  };
  recursive_ = std::any_of(order_.begin(), order_.end(), [&](const std::string& t) { return cyclic(t); });
}

const Dtd::Production& Dtd::production(std::string_view type) const {
  auto it = productions_.find(type);
  if (it == productions_.end()) throw SchemaError("unknown element type '" + std::string(type) + "'");
  return it->second;
}

bool Dtd::contains(std::string_view type) const { return productions_.find(type) != productions_.end(); }

const ContentModel& Dtd::content_model(std::string_view type) const { return production(type).model; }

const std::vector<std::string>& Dtd::child_types(std::string_view type) const { return production(type).child_types; }

bool Dtd::accepts(std::string_view type, std::span<const std::string> word) const {
  return production(type).automaton.accepts(word);
}

std::string Dtd::to_string() const {
  std::ostringstream out;
  out << "root " << root_ << ";\n";
  for (const auto& type : order_) out << type << " -> " << content_model(type).to_string() << ";\n";
  return out.str();
}

// --------------------------------------------------------------------
// Parser

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class DtdParser {
 public:
  explicit DtdParser(std::string_view text) : text_(text) {}

  Dtd parse() {
    std::optional<std::string> root;
    std::vector<std::pair<std::string, ContentModel>> productions;
    std::map<std::string, std::pair<std::size_t, std::size_t>> declared_at;
    std::vector<std::tuple<std::string, std::size_t, std::size_t>> references;

    skip();
    while (pos_ < text_.size()) {
      auto [line, col] = position();
      std::string head = name();
      skip();
      if (head == "root" && !looking_at("->")) {
        if (root) fail("second root declaration", line, col);
        root = name();
        expect(';');
      } else {
        if (head == "EPSILON" || head == "STR") fail("'" + head + "' is reserved", line, col);
        if (declared_at.count(head) != 0) fail("duplicate production for element type '" + head + "'", line, col);
        declared_at[head] = {line, col};
        expect("->");
        ContentModel model = alternation(references);
        expect(';');
        if (model.mentions_text() && model.kind() != ContentModel::Kind::Str) {
          fail("mixed content in production of '" + head + "': STR must be the whole content model", line, col);
        }
        productions.emplace_back(head, std::move(model));
      }
      skip();
    }
    if (!root) fail("missing root declaration", 0, 0);
    if (declared_at.count(*root) == 0) fail("root type '" + *root + "' has no production", 0, 0);
    for (const auto& [type, line, col] : references) {
      if (declared_at.count(type) == 0) fail("unknown element type '" + type + "'", line, col);
    }
    return Dtd(*root, std::move(productions));
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t line, std::size_t col) const {
    throw ParseError("DTD: " + what, line, col);
  }
  [[noreturn]] void fail(const std::string& what) const {
    auto [line, col] = position();
    fail(what, line, col);
  }

  std::pair<std::size_t, std::size_t> position() const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool looking_at(std::string_view token) const { return text_.substr(pos_, token.size()) == token; }

  void expect(std::string_view token) {
    skip();
    if (!looking_at(token)) {
      fail("expected '" + std::string(token) + "'" +
           (pos_ < text_.size() ? std::string(" but found '") + text_[pos_] + "'" : std::string(" at end of input")));
    }
    pos_ += token.size();
    skip();
  }
  void expect(char c) { expect(std::string_view(&c, 1)); }

  std::string name() {
    skip();
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected a name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  using Refs = std::vector<std::tuple<std::string, std::size_t, std::size_t>>;

  ContentModel alternation(Refs& refs) {
    ContentModel m = sequence(refs);
    skip();
    while (looking_at("|")) {
      expect('|');
      m = ContentModel::alt(std::move(m), sequence(refs));
      skip();
    }
    return m;
  }

  ContentModel sequence(Refs& refs) {
    ContentModel m = postfix(refs);
    skip();
    while (looking_at(",")) {
      expect(',');
      m = ContentModel::seq(std::move(m), postfix(refs));
      skip();
    }
    return m;
  }

  ContentModel postfix(Refs& refs) {
    ContentModel m = atom(refs);
    skip();
    while (looking_at("*")) {
      expect('*');
      m = ContentModel::star(std::move(m));
    }
    return m;
  }

  ContentModel atom(Refs& refs) {
    skip();
    if (looking_at("(")) {
      expect('(');
      ContentModel m = alternation(refs);
      expect(')');
      return m;
    }
    auto [line, col] = position();
    std::string n = name();
    if (n == "EPSILON") return ContentModel::epsilon();
    if (n == "STR") return ContentModel::str();
    refs.emplace_back(n, line, col);
    return ContentModel::name(std::move(n));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Dtd parse_dtd(std::string_view text) { return DtdParser(text).parse(); }

}  // namespace secxml
