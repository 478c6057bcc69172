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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "secxml/xml_tree.hpp"

namespace secxml {

enum class Axis { Self, Child, Descendant, DescendantOrSelf, Parent, Ancestor, AncestorOrSelf };

std::string_view to_string(Axis axis);
bool is_upward(Axis axis) noexcept;

/// XPath fragments, ordered by inclusion:
///   Downward          child/descendant axes, qualifiers, union, text()='c'
///   Upward            + parent/ancestor axes
///   UpwardPositional  + position filters [k]
///   Full              + node comparison `p = self::lab`
enum class Fragment { Downward, Upward, UpwardPositional, Full };

std::string_view to_string(Fragment f);

class Predicate;

/// Path expression. Immutable value with shared structure; copies are cheap.
///
///   Step    axis::label[pred]...   (positions count in axis order)
///   Slash   lhs/rhs
///   Union   lhs | rhs
///   Filter  (expr)[pred]...        (positions count in document order)
class XPathExpr {
 public:
  enum class Kind { Step, Slash, Union, Filter };

  static XPathExpr step(Axis axis, std::string label, std::vector<Predicate> predicates = {});
  static XPathExpr slash(XPathExpr lhs, XPathExpr rhs);
  static XPathExpr union_of(XPathExpr lhs, XPathExpr rhs);
  /// Returns `expr` unchanged for an empty predicate list and merges nested
  /// filters, so `((e)[a])[b]` and `(e)[a][b]` share one representation.
  static XPathExpr filter(XPathExpr expr, std::vector<Predicate> predicates);

  Kind kind() const noexcept;
  Axis axis() const;
  /// Name test; "*" matches any element.
  const std::string& label() const;
  std::span<const Predicate> predicates() const;
  const XPathExpr& lhs() const;
  const XPathExpr& rhs() const;
  /// Filtered expression of a Filter.
  const XPathExpr& operand() const;

  /// Identity of the shared node, used as a memoisation key.
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const XPathExpr& a, const XPathExpr& b);

  struct Node;

 private:
  explicit XPathExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Boolean qualifier (filter) evaluated at a context node.
///
///   Path        p                 nonempty
///   TextEquals  p/text()='c'      some node of p has a text child equal to c
///   And, Or, Not
///   NodeEquals  p = self::lab     p yields exactly the context node, whose
///                                 label matches lab
class Qualifier {
 public:
  enum class Kind { Path, TextEquals, And, Or, Not, NodeEquals };

  static Qualifier path(XPathExpr p);
  static Qualifier text_equals(XPathExpr p, std::string value);
  static Qualifier conj(Qualifier a, Qualifier b);
  static Qualifier disj(Qualifier a, Qualifier b);
  static Qualifier negate(Qualifier q);
  static Qualifier node_equals(XPathExpr p, std::string label);

  /// `self::*`, valid everywhere.
  static Qualifier always();
  /// `not(self::*)`, valid nowhere.
  static Qualifier never();

  Kind kind() const noexcept;
  const XPathExpr& expr() const;
  /// Constant of TextEquals, label of NodeEquals.
  const std::string& value() const;
  const Qualifier& lhs() const;
  const Qualifier& rhs() const;
  const Qualifier& operand() const;

  bool is_never() const;
  bool is_always() const;

  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Qualifier& a, const Qualifier& b);

  struct Node;

 private:
  explicit Qualifier(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Bracketed item after a step or filter: a qualifier or a 1-based position.
class Predicate {
 public:
  Predicate(Qualifier q) : qualifier_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  static Predicate position(std::size_t k);

  bool is_position() const noexcept { return position_ != 0; }
  std::size_t position_value() const noexcept { return position_; }
  const Qualifier& qualifier() const { return qualifier_; }

  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  Predicate(std::size_t k) : qualifier_(Qualifier::always()), position_(k) {}
  Qualifier qualifier_;
  std::size_t position_ = 0;
};

// Disjunction / conjunction folding that drops constant operands.
Qualifier any_of(std::span<const Qualifier> qs);
Qualifier all_of(std::span<const Qualifier> qs);

/// Smallest fragment containing the expression.
Fragment classify(const XPathExpr& e);
Fragment classify(const Qualifier& q);

/// AST node count (steps, operators, predicates and qualifier connectives).
std::size_t node_count(const XPathExpr& e);
std::size_t node_count(const Qualifier& q);

/// Parses the surface syntax; throws ParseError on malformed text and
/// FragmentError when the result lies outside `max_fragment`.
XPathExpr parse_xpath(std::string_view text, Fragment max_fragment = Fragment::Full);
Qualifier parse_qualifier(std::string_view text, Fragment max_fragment = Fragment::Full);

/// Canonical text; parse_xpath(to_string(e)) == e.
std::string to_string(const XPathExpr& e);
std::string to_string(const Qualifier& q);

/// Collects every element name used in a name test (excluding "*").
void collect_labels(const XPathExpr& e, std::vector<std::string>& out);
void collect_labels(const Qualifier& q, std::vector<std::string>& out);

/// Evaluates expressions over one tree. Qualifier results are memoised per
/// (qualifier, node), so an Evaluator must not outlive a mutation of its tree.
class Evaluator {
 public:
  explicit Evaluator(const XmlTree& tree);

  /// Node set reachable from `context`. A bare step yields axis order
  /// (nearest first for parent/ancestor axes); composite expressions yield
  /// document order. No duplicates.
  NodeSet eval(const XPathExpr& e, NodeId context);
  bool holds(const Qualifier& q, NodeId context);

  /// Document-order rank of a live node.
  std::size_t rank(NodeId n) const { return rank_[n.value()]; }

 private:
  NodeSet eval_step(const XPathExpr& step, NodeId context);
  NodeSet apply_predicates(NodeSet nodes, std::span<const Predicate> preds);
  void sort_document_order(NodeSet& nodes) const;
  bool matches(NodeId n, const std::string& label) const;

  struct MemoEntry {
    Qualifier pin;  // keeps the keyed node alive
    std::vector<std::int8_t> results;  // -1 unknown, else 0/1 per NodeId
  };

  const XmlTree& tree_;
  std::vector<std::size_t> rank_;
  std::unordered_map<const void*, MemoEntry> memo_;
};

NodeSet eval(const XPathExpr& e, const XmlTree& tree, NodeId context);
bool eval_qualifier(const Qualifier& q, const XmlTree& tree, NodeId context);

}  // namespace secxml
