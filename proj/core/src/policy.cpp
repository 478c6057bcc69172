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

#include "secxml/policy.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>

#include "secxml/error.hpp"
#include "text_util.hpp"

namespace secxml {

namespace {

constexpr std::pair<UpdateKind, std::string_view> kKindNames[] = {
    {UpdateKind::InsertInto, "insertInto"},     {UpdateKind::InsertAsFirst, "insertAsFirst"},
    {UpdateKind::InsertAsLast, "insertAsLast"}, {UpdateKind::InsertBefore, "insertBefore"},
    {UpdateKind::InsertAfter, "insertAfter"},   {UpdateKind::Delete, "delete"},
    {UpdateKind::Replace, "replace"},
};

}  // namespace

std::string_view to_string(UpdateKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<UpdateKind> parse_update_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string to_string(const UpdateType& ut) {
  std::string out(to_string(ut.kind));
  out += '[';
  out += ut.type;
  if (!ut.source.empty()) {
    out += ',';
    out += ut.source;
  }
  out += ']';
  return out;
}

// --------------------------------------------------------------------
// Annotation values

std::string to_string(const AnnotationValue& v) {
  switch (v.kind()) {
    case AnnotationValue::Kind::Allow:
      return "Y";
    case AnnotationValue::Kind::Deny:
      return "N";
    case AnnotationValue::Kind::DenyClosed:
      return "Nh";
    case AnnotationValue::Kind::Conditional:
      return "[" + to_string(*v.condition()) + "]";
    case AnnotationValue::Kind::ConditionalClosed:
      return "[" + to_string(*v.condition()) + "]h";
  }
  return "?";
}

AnnotationValue parse_annotation_value(std::string_view text, const Dtd& dtd) {
  text = detail::trim(text);
  if (text == "Y") return AnnotationValue::allow();
  if (text == "N") return AnnotationValue::deny();
  if (text == "Nh") return AnnotationValue::deny_closed();
  bool closed = text.size() >= 3 && text.front() == '[' && text.ends_with("]h");
  bool open = text.size() >= 2 && text.front() == '[' && text.back() == ']';
  if (!closed && !open) throw ParseError("annotation value must be Y, N, Nh, [q] or [q]h: '" + std::string(text) + "'");
  std::string_view inner = text.substr(1, text.size() - (closed ? 3 : 2));
  Qualifier q = parse_qualifier(inner, Fragment::Downward);
  std::vector<std::string> labels;
  collect_labels(q, labels);
  for (const auto& l : labels) {
    if (!dtd.contains(l)) throw SchemaError("condition names unknown element type '" + l + "'");
  }
  return closed ? AnnotationValue::conditional_closed(std::move(q)) : AnnotationValue::conditional(std::move(q));
}

bool annotation_valid(const AnnotationValue& v, Evaluator& ev, NodeId n) {
  switch (v.kind()) {
    case AnnotationValue::Kind::Allow:
      return true;
    case AnnotationValue::Kind::Deny:
    case AnnotationValue::Kind::DenyClosed:
      return false;
    case AnnotationValue::Kind::Conditional:
    case AnnotationValue::Kind::ConditionalClosed:
      return ev.holds(*v.condition(), n);
  }
  return false;
}

// --------------------------------------------------------------------
// UpdateSpec

UpdateSpec::UpdateSpec(std::shared_ptr<const Dtd> dtd) : dtd_(std::move(dtd)) {
  if (!dtd_) throw Error("update specification needs a DTD");
}

void UpdateSpec::add(std::string element, UpdateType type, AnnotationValue value) {
  auto known = [this](const std::string& name, const char* role) {
    if (!dtd_->contains(name)) throw SchemaError(std::string(role) + " '" + name + "' is not a declared element type");
  };
  known(element, "annotated type");
  known(type.type, "update type parameter");
  if (type.kind == UpdateKind::Replace) {
    if (type.source.empty()) throw SchemaError("replace needs two type parameters");
    known(type.source, "update type parameter");
  } else if (!type.source.empty()) {
    throw SchemaError(std::string(to_string(type.kind)) + " takes one type parameter");
  }
  if (find(element, type)) {
    throw SchemaError("duplicate annotation for (" + element + ", " + to_string(type) + ")");
  }
  by_type_[type].push_back(annotations_.size());
  annotations_.push_back({std::move(element), std::move(type), std::move(value)});
}

const AnnotationValue* UpdateSpec::find(std::string_view element, const UpdateType& type) const {
  auto it = by_type_.find(type);
  if (it == by_type_.end()) return nullptr;
  for (std::size_t i : it->second) {
    if (annotations_[i].element == element) return &annotations_[i].value;
  }
  return nullptr;
}

std::vector<const UpdateAnnotation*> UpdateSpec::of_type(const UpdateType& type) const {
  std::vector<const UpdateAnnotation*> out;
  if (auto it = by_type_.find(type); it != by_type_.end()) {
    out.reserve(it->second.size());
    for (std::size_t i : it->second) out.push_back(&annotations_[i]);
  }
  return out;
}

std::vector<UpdateType> UpdateSpec::update_types() const {
  std::vector<UpdateType> out;
  out.reserve(by_type_.size());
  for (const auto& [type, _] : by_type_) out.push_back(type);
  return out;
}

namespace {

UpdateType parse_update_type(std::string_view text, std::size_t line) {
  text = detail::trim(text);
  std::size_t open = text.find('[');
  if (open == std::string_view::npos || text.back() != ']') {
    throw ParseError("update type must look like kind[B] or replace[B1,B2]", line);
  }
  auto kind = parse_update_kind(detail::trim(text.substr(0, open)));
  if (!kind) throw ParseError("unknown update kind '" + std::string(text.substr(0, open)) + "'", line);
  std::string_view params = text.substr(open + 1, text.size() - open - 2);
  UpdateType ut;
  ut.kind = *kind;
  std::size_t comma = params.find(',');
  ut.type = std::string(detail::trim(params.substr(0, comma)));
  if (comma != std::string_view::npos) ut.source = std::string(detail::trim(params.substr(comma + 1)));
  if (!detail::is_identifier(ut.type) || (comma != std::string_view::npos && !detail::is_identifier(ut.source))) {
    throw ParseError("malformed type parameters in '" + std::string(text) + "'", line);
  }
  if ((ut.kind == UpdateKind::Replace) != (comma != std::string_view::npos)) {
    throw ParseError("replace takes two type parameters, every other kind takes one", line);
  }
  return ut;
}

template <typename F>
auto at_line(std::size_t line, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line, e.column());
  } catch (const FragmentError& e) {
    throw FragmentError("line " + std::to_string(line) + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

UpdateSpec parse_policy(std::string_view text, std::shared_ptr<const Dtd> dtd) {
  UpdateSpec spec(std::move(dtd));
  detail::for_each_line(text, [&](std::size_t line, std::string_view content) {
    at_line(line, [&] {
      if (!content.starts_with("annot") || content.size() < 6 || !std::isspace(static_cast<unsigned char>(content[5]))) {
        throw ParseError("expected 'annot <Element> <kind>[<B>] = <value>'", line);
      }
      content = detail::trim(content.substr(5));
      std::size_t space = content.find_first_of(" \t");
      std::size_t eq = content.find('=');
      if (space == std::string_view::npos || eq == std::string_view::npos || eq < space) {
        throw ParseError("expected 'annot <Element> <kind>[<B>] = <value>'", line);
      }
      std::string element(content.substr(0, space));
      if (!detail::is_identifier(element)) throw ParseError("malformed element name '" + element + "'", line);
      UpdateType ut = parse_update_type(content.substr(space, eq - space), line);
      AnnotationValue value = parse_annotation_value(content.substr(eq + 1), spec.dtd());
      spec.add(std::move(element), std::move(ut), std::move(value));
      return 0;
    });
  });
  return spec;
}

// --------------------------------------------------------------------
// Direct oracles

namespace {

struct Walk {
  std::optional<NodeId> nearest;  // nearest annotated ancestor-or-self
  const AnnotationValue* nearest_value = nullptr;
  bool closure_broken = false;  // some strict ancestor has an invalid downward-closed value
  bool nearest_valid = false;
};

Walk walk(const UpdateSpec& spec, const XmlTree& tree, NodeId n, const UpdateType& ut) {
  std::unordered_map<std::string_view, const AnnotationValue*> by_label;
  for (const auto* a : spec.of_type(ut)) by_label.emplace(a->element, &a->value);
  Walk w;
  if (by_label.empty()) return w;
  Evaluator ev(tree);
  for (std::optional<NodeId> m = n; m; m = tree.parent(*m)) {
    if (tree.is_text(*m)) continue;
    auto it = by_label.find(tree.label(*m));
    if (it == by_label.end()) continue;
    if (!w.nearest) {
      w.nearest = *m;
      w.nearest_value = it->second;
      w.nearest_valid = annotation_valid(*it->second, ev, *m);
    }
    if (*m != n && it->second->downward_closed() && !annotation_valid(*it->second, ev, *m)) w.closure_broken = true;
  }
  return w;
}

}  // namespace

bool oracle_updatable(const UpdateSpec& spec, const XmlTree& tree, NodeId n, const UpdateType& ut) {
  Walk w = walk(spec, tree, n, ut);
  return w.nearest && w.nearest_valid && !w.closure_broken;
}

bool oracle_forbidden(const UpdateSpec& spec, const XmlTree& tree, NodeId n, const UpdateType& ut) {
  Walk w = walk(spec, tree, n, ut);
  return (w.nearest && !w.nearest_valid) || w.closure_broken;
}

// --------------------------------------------------------------------
// Perspective

Perspective Perspective::document() { return Perspective(std::nullopt, nullptr); }

Perspective Perspective::view(Qualifier accessible, std::function<Qualifier(const Qualifier&)> translate) {
  return Perspective(std::move(accessible), std::move(translate));
}

XPathExpr Perspective::upward(Axis axis, std::string label, std::vector<Predicate> tail) const {
  if (accessible_) tail.insert(tail.begin(), Predicate(*accessible_));
  return XPathExpr::step(axis, std::move(label), std::move(tail));
}

XPathExpr Perspective::parent(std::vector<Predicate> tail) const {
  if (!accessible_) return XPathExpr::step(Axis::Parent, "*", std::move(tail));
  tail.insert(tail.begin(), {Predicate(*accessible_), Predicate::position(1)});
  return XPathExpr::step(Axis::Ancestor, "*", std::move(tail));
}

Qualifier Perspective::some_child(Qualifier k) const {
  if (!accessible_) return Qualifier::path(XPathExpr::step(Axis::Child, "*", {std::move(k)}));
  // A visible child of n is a visible descendant whose nearest visible
  // ancestor is n. Every such ancestor lies in descendant-or-self(n), where n
  // comes first in document order.
  XPathExpr below = XPathExpr::step(Axis::Descendant, "*", {*accessible_, std::move(k)});
  XPathExpr up = XPathExpr::step(Axis::Ancestor, "*", {*accessible_, Predicate::position(1)});
  XPathExpr first = XPathExpr::filter(XPathExpr::slash(std::move(below), std::move(up)), {Predicate::position(1)});
  return Qualifier::node_equals(std::move(first), "*");
}

Qualifier Perspective::translate(const Qualifier& q) const { return translate_ ? translate_(q) : q; }

// --------------------------------------------------------------------
// Predicate construction

namespace {

Qualifier concerned(const AnnotatedPosition& p) {
  return Qualifier::path(XPathExpr::step(Axis::Self, p.label, p.guard));
}

Qualifier concerned_where(const AnnotatedPosition& p, Qualifier extra) {
  std::vector<Predicate> preds = p.guard;
  preds.emplace_back(std::move(extra));
  return Qualifier::path(XPathExpr::step(Axis::Self, p.label, std::move(preds)));
}

}  // namespace

Qualifier nearest_annotation(std::span<const AnnotatedPosition> positions, bool want_valid, const Perspective& view) {
  std::vector<Qualifier> any;
  std::vector<Qualifier> selected;
  any.reserve(positions.size());
  for (const auto& p : positions) {
    any.push_back(concerned(p));
    switch (p.value.kind()) {
      case AnnotationValue::Kind::Allow:
        if (want_valid) selected.push_back(concerned(p));
        break;
      case AnnotationValue::Kind::Deny:
      case AnnotationValue::Kind::DenyClosed:
        if (!want_valid) selected.push_back(concerned(p));
        break;
      case AnnotationValue::Kind::Conditional:
      case AnnotationValue::Kind::ConditionalClosed: {
        Qualifier q = view.translate(*p.value.condition());
        selected.push_back(concerned_where(p, want_valid ? std::move(q) : Qualifier::negate(std::move(q))));
        break;
      }
    }
  }
  Qualifier pick = any_of(selected);
  if (pick.is_never()) return Qualifier::never();
  return Qualifier::path(
      view.upward(Axis::AncestorOrSelf, "*", {any_of(any), Predicate::position(1), std::move(pick)}));
}

namespace {

// Ancestor tests for downward-closed positions: `ancestor::A` for Nh and
// `ancestor::A[not(Q)]` for [Q]h.
std::vector<Qualifier> closed_ancestors(std::span<const AnnotatedPosition> positions, const Perspective& view) {
  std::vector<Qualifier> out;
  for (const auto& p : positions) {
    if (!p.value.downward_closed()) continue;
    std::vector<Predicate> preds = p.guard;
    if (p.value.kind() == AnnotationValue::Kind::ConditionalClosed) {
      preds.emplace_back(Qualifier::negate(view.translate(*p.value.condition())));
    }
    out.push_back(Qualifier::path(view.upward(Axis::Ancestor, p.label, std::move(preds))));
  }
  return out;
}

}  // namespace

std::optional<Qualifier> closure_intact(std::span<const AnnotatedPosition> positions, const Perspective& view) {
  std::vector<Qualifier> tests = closed_ancestors(positions, view);
  if (tests.empty()) return std::nullopt;
  for (auto& t : tests) t = Qualifier::negate(std::move(t));
  return all_of(tests);
}

std::optional<Qualifier> closure_broken(std::span<const AnnotatedPosition> positions, const Perspective& view) {
  std::vector<Qualifier> tests = closed_ancestors(positions, view);
  if (tests.empty()) return std::nullopt;
  return any_of(tests);
}

Qualifier Updatability::combined() const { return closure ? Qualifier::conj(nearest, *closure) : nearest; }

namespace {

std::vector<AnnotatedPosition> positions_of(const UpdateSpec& spec, const UpdateType& ut) {
  std::vector<AnnotatedPosition> out;
  for (const auto* a : spec.of_type(ut)) out.push_back({a->element, {}, a->value});
  return out;
}

}  // namespace

Updatability build_updatability_parts(const UpdateSpec& spec, const UpdateType& ut, const Perspective& view) {
  auto positions = positions_of(spec, ut);
  return {nearest_annotation(positions, true, view), closure_intact(positions, view)};
}

Qualifier build_updatability(const UpdateSpec& spec, const UpdateType& ut, const Perspective& view) {
  auto positions = positions_of(spec, ut);
  if (positions.empty()) return Qualifier::never();
  Qualifier u1 = nearest_annotation(positions, true, view);
  if (u1.is_never()) return u1;
  auto u2 = closure_intact(positions, view);
  return u2 ? Qualifier::conj(std::move(u1), std::move(*u2)) : u1;
}

Qualifier build_forbidden(const UpdateSpec& spec, const UpdateType& ut, const Perspective& view) {
  auto positions = positions_of(spec, ut);
  if (positions.empty()) return Qualifier::never();
  std::vector<Qualifier> parts{nearest_annotation(positions, false, view)};
  if (auto c = closure_broken(positions, view)) parts.push_back(std::move(*c));
  return any_of(parts);
}

Qualifier build_crp(const UpdateSpec& spec, const std::string& type, const Perspective& view) {
  auto forbidden = [&](UpdateKind k) { return build_forbidden(spec, UpdateType{k, type, {}}, view); };
  std::vector<Qualifier> parts{forbidden(UpdateKind::InsertAsFirst), forbidden(UpdateKind::InsertAsLast)};
  for (UpdateKind k : {UpdateKind::InsertBefore, UpdateKind::InsertAfter}) {
    Qualifier f = forbidden(k);
    if (!f.is_never()) parts.push_back(view.some_child(std::move(f)));
  }
  return any_of(parts);
}

}  // namespace secxml
