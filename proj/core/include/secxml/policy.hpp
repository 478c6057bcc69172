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

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secxml/dtd.hpp"
#include "secxml/xml_tree.hpp"
#include "secxml/xpath.hpp"

namespace secxml {

enum class UpdateKind { InsertInto, InsertAsFirst, InsertAsLast, InsertBefore, InsertAfter, Delete, Replace };

std::string_view to_string(UpdateKind kind);
std::optional<UpdateKind> parse_update_kind(std::string_view text);

/// Update type such as insertInto[B], delete[B] or replace[Bi,Bj]. For
/// replace, `type` is the replaced node's type and `source` the type of the
/// replacement nodes; `source` is empty for every other kind.
struct UpdateType {
  UpdateKind kind = UpdateKind::Delete;
  std::string type;
  std::string source;

  friend auto operator<=>(const UpdateType&, const UpdateType&) = default;
  friend bool operator==(const UpdateType&, const UpdateType&) = default;
};

std::string to_string(const UpdateType& ut);

/// Authorization value: Y, N, [Q], Nh or [Q]h. Conditions lie in the
/// downward fragment.
class AnnotationValue {
 public:
  enum class Kind { Allow, Deny, Conditional, DenyClosed, ConditionalClosed };

  static AnnotationValue allow() { return AnnotationValue(Kind::Allow, std::nullopt); }
  static AnnotationValue deny() { return AnnotationValue(Kind::Deny, std::nullopt); }
  static AnnotationValue deny_closed() { return AnnotationValue(Kind::DenyClosed, std::nullopt); }
  static AnnotationValue conditional(Qualifier q) { return AnnotationValue(Kind::Conditional, std::move(q)); }
  static AnnotationValue conditional_closed(Qualifier q) {
    return AnnotationValue(Kind::ConditionalClosed, std::move(q));
  }

  Kind kind() const noexcept { return kind_; }
  /// Condition of [Q] and [Q]h.
  const std::optional<Qualifier>& condition() const noexcept { return condition_; }
  bool downward_closed() const noexcept { return kind_ == Kind::DenyClosed || kind_ == Kind::ConditionalClosed; }

  friend bool operator==(const AnnotationValue&, const AnnotationValue&) = default;

 private:
  AnnotationValue(Kind kind, std::optional<Qualifier> q) : kind_(kind), condition_(std::move(q)) {}

  Kind kind_;
  std::optional<Qualifier> condition_;
};

std::string to_string(const AnnotationValue& v);

/// Parses `Y`, `N`, `Nh`, `[q]` or `[q]h`. Conditions must be in the
/// downward fragment and only name element types of `dtd`.
AnnotationValue parse_annotation_value(std::string_view text, const Dtd& dtd);

/// Validity of an annotation at node n: Y, or a condition holding at n.
bool annotation_valid(const AnnotationValue& v, Evaluator& ev, NodeId n);

struct UpdateAnnotation {
  std::string element;
  UpdateType type;
  AnnotationValue value;
};

/// Partial map (element type, update type) -> annotation value over a DTD.
class UpdateSpec {
 public:
  explicit UpdateSpec(std::shared_ptr<const Dtd> dtd);

  /// Throws SchemaError for unknown element types or a repeated key.
  void add(std::string element, UpdateType type, AnnotationValue value);

  const Dtd& dtd() const noexcept { return *dtd_; }
  const std::shared_ptr<const Dtd>& dtd_ptr() const noexcept { return dtd_; }
  std::span<const UpdateAnnotation> annotations() const noexcept { return annotations_; }
  std::size_t size() const noexcept { return annotations_.size(); }

  const AnnotationValue* find(std::string_view element, const UpdateType& type) const;
  /// Annotations of one update type (S_ut), in insertion order.
  std::vector<const UpdateAnnotation*> of_type(const UpdateType& type) const;
  /// Distinct update types carrying at least one annotation, sorted.
  std::vector<UpdateType> update_types() const;

 private:
  std::shared_ptr<const Dtd> dtd_;
  std::vector<UpdateAnnotation> annotations_;
  std::map<UpdateType, std::vector<std::size_t>> by_type_;
};

/// Policy file: one `annot <Element> <kind>[<B>(,<B2>)] = <value>` per line,
/// `#` comments and blank lines ignored.
UpdateSpec parse_policy(std::string_view text, std::shared_ptr<const Dtd> dtd);

/// Definition-level updatability by walking ancestors directly: the nearest
/// annotated ancestor-or-self must carry a valid annotation, and no strict
/// ancestor may carry an invalid downward-closed one. Nodes without any
/// annotated ancestor-or-self are not updatable.
bool oracle_updatable(const UpdateSpec& spec, const XmlTree& tree, NodeId n, const UpdateType& ut);

/// Explicit prohibition by direct walk: the nearest annotated
/// ancestor-or-self carries an invalid annotation, or a strict ancestor
/// carries an invalid downward-closed one.
bool oracle_forbidden(const UpdateSpec& spec, const XmlTree& tree, NodeId n, const UpdateType& ut);

/// Navigation used by compiled predicates. The document perspective walks
/// the tree itself; a view perspective only sees nodes satisfying an
/// accessibility qualifier and translates policy conditions accordingly.
class Perspective {
 public:
  static Perspective document();
  static Perspective view(Qualifier accessible, std::function<Qualifier(const Qualifier&)> translate);

  bool is_view() const noexcept { return accessible_.has_value(); }
  const std::optional<Qualifier>& accessible() const noexcept { return accessible_; }

  /// ancestor / ancestor-or-self step restricted to visible nodes.
  XPathExpr upward(Axis axis, std::string label, std::vector<Predicate> tail) const;
  /// Step to the (visible) parent.
  XPathExpr parent(std::vector<Predicate> tail) const;
  /// Holds at n when some (visible) child of n satisfies k.
  Qualifier some_child(Qualifier k) const;
  Qualifier translate(const Qualifier& q) const;

 private:
  Perspective(std::optional<Qualifier> accessible, std::function<Qualifier(const Qualifier&)> translate)
      : accessible_(std::move(accessible)), translate_(std::move(translate)) {}

  std::optional<Qualifier> accessible_;
  std::function<Qualifier(const Qualifier&)> translate_;
};

/// One annotation placed on the nodes matching `self::label[guard...]`.
struct AnnotatedPosition {
  std::string label;
  std::vector<Predicate> guard;
  AnnotationValue value;
};

/// `ancestor-or-self::*[concerned][1][selected]`: the nearest annotated
/// ancestor-or-self carries a valid (want_valid) or invalid annotation.
/// Never-valid when nothing can be selected.
Qualifier nearest_annotation(std::span<const AnnotatedPosition> positions, bool want_valid,
                             const Perspective& view);

/// Conjunction of `not(ancestor::A)` for Nh and `not(ancestor::A[not(Q)])`
/// for [Q]h positions; nullopt when no position is downward closed.
std::optional<Qualifier> closure_intact(std::span<const AnnotatedPosition> positions, const Perspective& view);

/// Disjunction of `ancestor::A` / `ancestor::A[not(Q)]`; nullopt when no
/// position is downward closed.
std::optional<Qualifier> closure_broken(std::span<const AnnotatedPosition> positions, const Perspective& view);

/// U = U1 and U2 for one update type.
struct Updatability {
  Qualifier nearest;                 // U1
  std::optional<Qualifier> closure;  // U2, absent when no Nh / [Q]h annotation exists

  Qualifier combined() const;
};

Updatability build_updatability_parts(const UpdateSpec& spec, const UpdateType& ut,
                                      const Perspective& view = Perspective::document());
/// Constant-false when S_ut is empty.
Qualifier build_updatability(const UpdateSpec& spec, const UpdateType& ut,
                             const Perspective& view = Perspective::document());
/// Explicit-prohibition predicate; constant-false when S_ut is empty.
Qualifier build_forbidden(const UpdateSpec& spec, const UpdateType& ut,
                          const Perspective& view = Perspective::document());
/// Conflict resolution predicate for insertInto[B] against the four
/// positional insert kinds. Constant-false disjuncts are dropped.
Qualifier build_crp(const UpdateSpec& spec, const std::string& type,
                    const Perspective& view = Perspective::document());

}  // namespace secxml
