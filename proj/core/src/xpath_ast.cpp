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

#include <algorithm>
#include <optional>
#include <string>

#include "secxml/error.hpp"
#include "secxml/xpath.hpp"
#include "xpath_nodes.hpp"

namespace secxml {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::Self:
      return "self";
    case Axis::Child:
      return "child";
    case Axis::Descendant:
      return "descendant";
    case Axis::DescendantOrSelf:
      return "descendant-or-self";
    case Axis::Parent:
      return "parent";
    case Axis::Ancestor:
      return "ancestor";
    case Axis::AncestorOrSelf:
      return "ancestor-or-self";
  }
  return "?";
}

bool is_upward(Axis axis) noexcept {
  return axis == Axis::Parent || axis == Axis::Ancestor || axis == Axis::AncestorOrSelf;
}

std::string_view to_string(Fragment f) {
  switch (f) {
    case Fragment::Downward:
      return "X";
    case Fragment::Upward:
      return "X-up";
    case Fragment::UpwardPositional:
      return "X-up[n]";
    case Fragment::Full:
      return "X-up[n,=]";
  }
  return "?";
}

// --------------------------------------------------------------------
// Construction and access

XPathExpr XPathExpr::step(Axis axis, std::string label, std::vector<Predicate> predicates) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Step;
  n->axis = axis;
  n->label = std::move(label);
  n->predicates = std::move(predicates);
  return XPathExpr(std::move(n));
}

XPathExpr XPathExpr::slash(XPathExpr lhs, XPathExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Slash;
  n->lhs.emplace(std::move(lhs));
  n->rhs.emplace(std::move(rhs));
  return XPathExpr(std::move(n));
}

XPathExpr XPathExpr::union_of(XPathExpr lhs, XPathExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->lhs.emplace(std::move(lhs));
  n->rhs.emplace(std::move(rhs));
  return XPathExpr(std::move(n));
}

XPathExpr XPathExpr::filter(XPathExpr expr, std::vector<Predicate> predicates) {
  if (predicates.empty()) return expr;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Filter;
  if (expr.kind() == Kind::Filter) {
    n->predicates.assign(expr.predicates().begin(), expr.predicates().end());
    n->predicates.insert(n->predicates.end(), predicates.begin(), predicates.end());
    n->lhs = expr.operand();
  } else {
    n->predicates = std::move(predicates);
    n->lhs.emplace(std::move(expr));
  }
  return XPathExpr(std::move(n));
}

XPathExpr::Kind XPathExpr::kind() const noexcept { return node_->kind; }
Axis XPathExpr::axis() const { return node_->axis; }
const std::string& XPathExpr::label() const { return node_->label; }
std::span<const Predicate> XPathExpr::predicates() const { return node_->predicates; }
const XPathExpr& XPathExpr::lhs() const { return *node_->lhs; }
const XPathExpr& XPathExpr::rhs() const { return *node_->rhs; }
const XPathExpr& XPathExpr::operand() const { return *node_->lhs; }

bool operator==(const XPathExpr& a, const XPathExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case XPathExpr::Kind::Step:
      return x.axis == y.axis && x.label == y.label && x.predicates == y.predicates;
    case XPathExpr::Kind::Slash:
    case XPathExpr::Kind::Union:
      return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    case XPathExpr::Kind::Filter:
      return *x.lhs == *y.lhs && x.predicates == y.predicates;
  }
  return false;
}

Qualifier Qualifier::path(XPathExpr p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Path;
  n->expr.emplace(std::move(p));
  return Qualifier(std::move(n));
}

Qualifier Qualifier::text_equals(XPathExpr p, std::string value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::TextEquals;
  n->expr.emplace(std::move(p));
  n->value = std::move(value);
  return Qualifier(std::move(n));
}

Qualifier Qualifier::conj(Qualifier a, Qualifier b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->lhs.emplace(std::move(a));
  n->rhs.emplace(std::move(b));
  return Qualifier(std::move(n));
}

Qualifier Qualifier::disj(Qualifier a, Qualifier b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->lhs.emplace(std::move(a));
  n->rhs.emplace(std::move(b));
  return Qualifier(std::move(n));
}

Qualifier Qualifier::negate(Qualifier q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->lhs.emplace(std::move(q));
  return Qualifier(std::move(n));
}

Qualifier Qualifier::node_equals(XPathExpr p, std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::NodeEquals;
  n->expr.emplace(std::move(p));
  n->value = std::move(label);
  return Qualifier(std::move(n));
}

Qualifier Qualifier::always() {
  static const Qualifier q = path(XPathExpr::step(Axis::Self, "*"));
  return q;
}

Qualifier Qualifier::never() {
  static const Qualifier q = negate(always());
  return q;
}

Qualifier::Kind Qualifier::kind() const noexcept { return node_->kind; }
const XPathExpr& Qualifier::expr() const { return *node_->expr; }
const std::string& Qualifier::value() const { return node_->value; }
const Qualifier& Qualifier::lhs() const { return *node_->lhs; }
const Qualifier& Qualifier::rhs() const { return *node_->rhs; }
const Qualifier& Qualifier::operand() const { return *node_->lhs; }

bool Qualifier::is_always() const {
  if (kind() != Kind::Path) return false;
  const XPathExpr& e = expr();
  return e.kind() == XPathExpr::Kind::Step && e.axis() == Axis::Self && e.label() == "*" && e.predicates().empty();
}

bool Qualifier::is_never() const { return kind() == Kind::Not && operand().is_always(); }

bool operator==(const Qualifier& a, const Qualifier& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Qualifier::Kind::Path:
      return *x.expr == *y.expr;
    case Qualifier::Kind::TextEquals:
    case Qualifier::Kind::NodeEquals:
      return x.value == y.value && *x.expr == *y.expr;
    case Qualifier::Kind::And:
    case Qualifier::Kind::Or:
      return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
    case Qualifier::Kind::Not:
      return *x.lhs == *y.lhs;
  }
  return false;
}

Predicate Predicate::position(std::size_t k) {
  if (k == 0) throw Error("positions start at 1");
  return Predicate(k);
}

bool operator==(const Predicate& a, const Predicate& b) {
  if (a.position_ != b.position_) return false;
  return a.is_position() || a.qualifier_ == b.qualifier_;
}

Qualifier any_of(std::span<const Qualifier> qs) {
  std::optional<Qualifier> out;
  for (const auto& q : qs) {
    if (q.is_never()) continue;
    out = out ? Qualifier::disj(std::move(*out), q) : q;
  }
  return out ? *out : Qualifier::never();
}

Qualifier all_of(std::span<const Qualifier> qs) {
  std::optional<Qualifier> out;
  for (const auto& q : qs) {
    if (q.is_always()) continue;
    if (q.is_never()) return Qualifier::never();
    out = out ? Qualifier::conj(std::move(*out), q) : q;
  }
  return out ? *out : Qualifier::always();
}

// --------------------------------------------------------------------
// Classification and size

Fragment classify(const XPathExpr& e) {
  Fragment f = Fragment::Downward;
  auto lift = [&f](Fragment g) { f = std::max(f, g); };
  switch (e.kind()) {
    case XPathExpr::Kind::Step:
      if (is_upward(e.axis())) lift(Fragment::Upward);
      break;
    case XPathExpr::Kind::Slash:
    case XPathExpr::Kind::Union:
      lift(classify(e.lhs()));
      lift(classify(e.rhs()));
      break;
    case XPathExpr::Kind::Filter:
      lift(classify(e.operand()));
      break;
  }
  for (const auto& p : e.predicates()) {
    lift(p.is_position() ? Fragment::UpwardPositional : classify(p.qualifier()));
  }
  return f;
}

Fragment classify(const Qualifier& q) {
  switch (q.kind()) {
    case Qualifier::Kind::Path:
    case Qualifier::Kind::TextEquals:
      return classify(q.expr());
    case Qualifier::Kind::NodeEquals:
      return Fragment::Full;
    case Qualifier::Kind::And:
    case Qualifier::Kind::Or:
      return std::max(classify(q.lhs()), classify(q.rhs()));
    case Qualifier::Kind::Not:
      return classify(q.operand());
  }
  return Fragment::Full;
}

std::size_t node_count(const XPathExpr& e) {
  std::size_t n = 1;
  switch (e.kind()) {
    case XPathExpr::Kind::Step:
      break;
    case XPathExpr::Kind::Slash:
    case XPathExpr::Kind::Union:
      n += node_count(e.lhs()) + node_count(e.rhs());
      break;
    case XPathExpr::Kind::Filter:
      n += node_count(e.operand());
      break;
  }
  for (const auto& p : e.predicates()) n += p.is_position() ? 1 : node_count(p.qualifier());
  return n;
}

std::size_t node_count(const Qualifier& q) {
  switch (q.kind()) {
    case Qualifier::Kind::Path:
    case Qualifier::Kind::TextEquals:
    case Qualifier::Kind::NodeEquals:
      return 1 + node_count(q.expr());
    case Qualifier::Kind::And:
    case Qualifier::Kind::Or:
      return 1 + node_count(q.lhs()) + node_count(q.rhs());
    case Qualifier::Kind::Not:
      return 1 + node_count(q.operand());
  }
  return 1;
}

void collect_labels(const XPathExpr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
    case XPathExpr::Kind::Step:
      if (e.label() != "*") out.push_back(e.label());
      break;
    case XPathExpr::Kind::Slash:
    case XPathExpr::Kind::Union:
      collect_labels(e.lhs(), out);
      collect_labels(e.rhs(), out);
      break;
    case XPathExpr::Kind::Filter:
      collect_labels(e.operand(), out);
      break;
  }
  for (const auto& p : e.predicates()) {
    if (!p.is_position()) collect_labels(p.qualifier(), out);
  }
}

void collect_labels(const Qualifier& q, std::vector<std::string>& out) {
  switch (q.kind()) {
    case Qualifier::Kind::Path:
    case Qualifier::Kind::TextEquals:
      collect_labels(q.expr(), out);
      break;
    case Qualifier::Kind::NodeEquals:
      collect_labels(q.expr(), out);
      if (q.value() != "*") out.push_back(q.value());
      break;
    case Qualifier::Kind::And:
    case Qualifier::Kind::Or:
      collect_labels(q.lhs(), out);
      collect_labels(q.rhs(), out);
      break;
    case Qualifier::Kind::Not:
      collect_labels(q.operand(), out);
      break;
  }
}

// --------------------------------------------------------------------
// Printing

namespace {

void print(const XPathExpr& e, std::string& out);
void print(const Qualifier& q, int min_precedence, std::string& out);

void print_predicates(std::span<const Predicate> preds, std::string& out) {
  for (const auto& p : preds) {
    out += '[';
    if (p.is_position()) {
      out += std::to_string(p.position_value());
    } else {
      print(p.qualifier(), 0, out);
    }
    out += ']';
  }
}

void print_grouped(const XPathExpr& e, bool group, std::string& out) {
  if (group) out += '(';
  print(e, out);
  if (group) out += ')';
}

void print(const XPathExpr& e, std::string& out) {
  using K = XPathExpr::Kind;
  switch (e.kind()) {
    case K::Step:
      out += to_string(e.axis());
      out += "::";
      out += e.label();
      print_predicates(e.predicates(), out);
      break;
    case K::Slash:
      print_grouped(e.lhs(), e.lhs().kind() == K::Union, out);
      out += '/';
      print_grouped(e.rhs(), e.rhs().kind() == K::Union || e.rhs().kind() == K::Slash, out);
      break;
    case K::Union:
      print(e.lhs(), out);
      out += " | ";
      print_grouped(e.rhs(), e.rhs().kind() == K::Union, out);
      break;
    case K::Filter:
      print_grouped(e.operand(), true, out);
      print_predicates(e.predicates(), out);
      break;
  }
}

void print_literal(const std::string& s, std::string& out) {
  out += '\'';
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
}

int precedence(const Qualifier& q) {
  switch (q.kind()) {
    case Qualifier::Kind::Or:
      return 0;
    case Qualifier::Kind::And:
      return 1;
    default:
      return 2;
  }
}

void print(const Qualifier& q, int min_precedence, std::string& out) {
  bool group = precedence(q) < min_precedence;
  if (group) out += '(';
  switch (q.kind()) {
    case Qualifier::Kind::Path:
      print(q.expr(), out);
      break;
    case Qualifier::Kind::TextEquals:
      print_grouped(q.expr(), q.expr().kind() == XPathExpr::Kind::Union, out);
      out += "/text()=";
      print_literal(q.value(), out);
      break;
    case Qualifier::Kind::NodeEquals:
      print_grouped(q.expr(), q.expr().kind() == XPathExpr::Kind::Union, out);
      out += " = self::";
      out += q.value();
      break;
    case Qualifier::Kind::And:
      print(q.lhs(), 1, out);
      out += " and ";
      print(q.rhs(), 2, out);
      break;
    case Qualifier::Kind::Or:
      print(q.lhs(), 0, out);
      out += " or ";
      print(q.rhs(), 1, out);
      break;
    case Qualifier::Kind::Not:
      out += "not(";
      print(q.operand(), 0, out);
      out += ')';
      break;
  }
  if (group) out += ')';
}

}  // namespace

std::string to_string(const XPathExpr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_string(const Qualifier& q) {
  std::string out;
  print(q, 0, out);
  return out;
}

}  // namespace secxml
