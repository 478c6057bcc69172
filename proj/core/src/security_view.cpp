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

#include "secxml/security_view.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>

#include "secxml/error.hpp"
#include "text_util.hpp"

namespace secxml {

// --------------------------------------------------------------------
// AccessSpec

AccessSpec::AccessSpec(std::shared_ptr<const Dtd> dtd) : dtd_(std::move(dtd)) {
  if (!dtd_) throw Error("access specification needs a DTD");
}

void AccessSpec::add(std::string parent, std::string child, AnnotationValue value) {
  if (!dtd_->contains(parent)) throw SchemaError("'" + parent + "' is not a declared element type");
  const auto& kids = dtd_->child_types(parent);
  if (std::find(kids.begin(), kids.end(), child) == kids.end()) {
    throw SchemaError("'" + child + "' does not occur in the content model of '" + parent + "'");
  }
  if (find(parent, child)) throw SchemaError("duplicate access annotation for " + parent + "/" + child);
  annotations_.push_back({std::move(parent), std::move(child), std::move(value)});
}

const AnnotationValue* AccessSpec::find(std::string_view parent, std::string_view child) const {
  for (const auto& a : annotations_) {
    if (a.parent == parent && a.child == child) return &a.value;
  }
  return nullptr;
}

AccessSpec parse_access_spec(std::string_view text, std::shared_ptr<const Dtd> dtd) {
  AccessSpec spec(std::move(dtd));
  detail::for_each_line(text, [&](std::size_t line, std::string_view content) {
    auto where = [line](const std::string& msg) { return "line " + std::to_string(line) + ": " + msg; };
    try {
      constexpr std::string_view kUsage = "expected 'access <Parent>/<Child> = <value>'";
      if (!content.starts_with("access") || content.size() < 7 ||
          !std::isspace(static_cast<unsigned char>(content[6]))) {
        throw ParseError(std::string(kUsage), line);
      }
      content = detail::trim(content.substr(6));
      std::size_t eq = content.find('=');
      if (eq == std::string_view::npos) throw ParseError(std::string(kUsage), line);
      std::string_view pair = detail::trim(content.substr(0, eq));
      std::size_t slash = pair.find('/');
      if (slash == std::string_view::npos) throw ParseError(std::string(kUsage), line);
      std::string parent(detail::trim(pair.substr(0, slash)));
      std::string child(detail::trim(pair.substr(slash + 1)));
      if (!detail::is_identifier(parent) || !detail::is_identifier(child)) {
        throw ParseError("malformed element pair '" + std::string(pair) + "'", line);
      }
      AnnotationValue value = parse_annotation_value(content.substr(eq + 1), spec.dtd());
      spec.add(std::move(parent), std::move(child), std::move(value));
    } catch (const ParseError& e) {
      throw ParseError(where(e.what()), line, e.column());
    } catch (const FragmentError& e) {
      throw FragmentError(where(e.what()));
    } catch (const SchemaError& e) {
      throw SchemaError(where(e.what()));
    }
  });
  return spec;
}

// --------------------------------------------------------------------
// Direct semantics

std::vector<bool> oracle_accessible_all(const AccessSpec& spec, const XmlTree& tree) {
  std::vector<bool> accessible(tree.id_bound(), false);
  std::vector<bool> nearest_valid(tree.id_bound(), false);
  // True when some ancestor-or-self carries a falsified downward-closed value.
  std::vector<bool> closed_below(tree.id_bound(), false);
  Evaluator ev(tree);
  for (NodeId n : tree.preorder()) {
    auto p = tree.parent(n);
    if (!p) {
      accessible[n.value()] = nearest_valid[n.value()] = true;
      continue;
    }
    std::size_t i = n.value();
    std::size_t j = p->value();
    if (tree.is_text(n)) {
      accessible[i] = accessible[j];
      continue;
    }
    const AnnotationValue* v = spec.find(tree.label(*p), tree.label(n));
    bool valid = v ? annotation_valid(*v, ev, n) : nearest_valid[j];
    nearest_valid[i] = valid;
    closed_below[i] = closed_below[j] || (v && v->downward_closed() && !valid);
    accessible[i] = valid && !closed_below[j];
  }
  return accessible;
}

bool oracle_accessible(const AccessSpec& spec, const XmlTree& tree, NodeId n) {
  if (!tree.contains(n)) throw DynamicError("unknown node");
  return oracle_accessible_all(spec, tree)[n.value()];
}

// --------------------------------------------------------------------
// Accessibility predicates

namespace {

std::vector<AnnotatedPosition> access_positions(const AccessSpec& spec) {
  std::vector<AnnotatedPosition> out;
  out.reserve(spec.size());
  for (const auto& a : spec.annotations()) {
    out.push_back({a.child, {Qualifier::path(XPathExpr::step(Axis::Parent, a.parent))}, a.value});
  }
  return out;
}

}  // namespace

Qualifier build_accessibility(const AccessSpec& spec) {
  auto positions = access_positions(spec);
  std::vector<Qualifier> parts;
  Qualifier denied = nearest_annotation(positions, false, Perspective::document());
  if (!denied.is_never()) parts.push_back(Qualifier::negate(std::move(denied)));
  if (auto closure = closure_intact(positions, Perspective::document())) parts.push_back(std::move(*closure));
  return all_of(parts);
}

XPathExpr build_accessible_ancestors(const AccessSpec& spec) {
  return XPathExpr::step(Axis::Ancestor, "*", {build_accessibility(spec)});
}

// --------------------------------------------------------------------
// Materialised view

NodeSet ViewMapping::document_nodes(const NodeSet& view_nodes) const {
  NodeSet out;
  out.reserve(view_nodes.size());
  for (NodeId v : view_nodes) out.push_back(to_document.at(v));
  return out;
}

MaterializedView extract_view(const AccessSpec& spec, const XmlTree& tree) {
  std::vector<bool> accessible = oracle_accessible_all(spec, tree);
  MaterializedView view{XmlTree(tree.label(tree.root())), {}};
  ViewMapping& m = view.mapping;
  m.to_view.emplace(tree.root(), view.tree.root());
  m.to_document.emplace(view.tree.root(), tree.root());
  for (NodeId n : tree.preorder()) {
    if (!accessible[n.value()]) continue;
    m.accessible.push_back(n);
    if (n == tree.root()) continue;
    NodeId up = *tree.parent(n);
    while (!accessible[up.value()]) up = *tree.parent(up);
    m.view_parent.emplace(n, up);
    NodeId vp = m.to_view.at(up);
    NodeId v = tree.is_text(n) ? view.tree.append_text(vp, tree.text(n)) : view.tree.append_element(vp, tree.label(n));
    m.to_view.emplace(n, v);
    m.to_document.emplace(v, n);
  }
  return view;
}

namespace {

// Abstract state of a node for schema-level reasoning.
struct State {
  std::string type;
  bool accessible;
  bool nearest_valid;
  bool closed_below;

  friend auto operator<=>(const State&, const State&) = default;
};

std::vector<bool> possible_validity(const AnnotationValue& v) {
  switch (v.kind()) {
    case AnnotationValue::Kind::Allow:
      return {true};
    case AnnotationValue::Kind::Deny:
    case AnnotationValue::Kind::DenyClosed:
      return {false};
    default:
      return {true, false};
  }
}

std::vector<State> child_states(const AccessSpec& spec, const State& s) {
  std::vector<State> out;
  for (const auto& b : spec.dtd().child_types(s.type)) {
    const AnnotationValue* v = spec.find(s.type, b);
    if (!v) {
      out.push_back({b, s.nearest_valid && !s.closed_below, s.nearest_valid, s.closed_below});
      continue;
    }
    for (bool valid : possible_validity(*v)) {
      out.push_back({b, valid && !s.closed_below, valid, s.closed_below || (v->downward_closed() && !valid)});
    }
  }
  return out;
}

}  // namespace

Dtd derive_view_dtd(const AccessSpec& spec) {
  const Dtd& dtd = spec.dtd();
  std::set<State> reached;
  std::vector<State> work{{dtd.root(), true, true, false}};
  while (!work.empty()) {
    State s = std::move(work.back());
    work.pop_back();
    if (!reached.insert(s).second) continue;
    for (auto& c : child_states(spec, s)) work.push_back(std::move(c));
  }

  std::set<std::string> visible;
  for (const auto& s : reached) {
    if (s.accessible) visible.insert(s.type);
  }

  std::vector<std::pair<std::string, ContentModel>> productions;
  for (const auto& type : dtd.elements()) {
    if (!visible.count(type)) continue;
    bool exact = true;
    for (const auto& b : dtd.child_types(type)) {
      const AnnotationValue* v = spec.find(type, b);
      if (v && v->kind() != AnnotationValue::Kind::Allow) exact = false;
    }
    if (exact) {
      productions.emplace_back(type, dtd.content_model(type));
      continue;
    }
    // Visible types reachable from an accessible `type` node through hidden
    // intermediates.
    std::set<std::string> below;
    std::set<State> seen;
    std::vector<State> stack;
    for (const auto& s : reached) {
      if (s.type == type && s.accessible) {
        for (auto& c : child_states(spec, s)) stack.push_back(std::move(c));
      }
    }
    while (!stack.empty()) {
      State s = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(s).second) continue;
      if (s.accessible) {
        below.insert(s.type);
        continue;
      }
      for (auto& c : child_states(spec, s)) stack.push_back(std::move(c));
    }
    if (below.empty()) {
      productions.emplace_back(type, ContentModel::epsilon());
      continue;
    }
    std::optional<ContentModel> alt;
    for (const auto& b : below) alt = alt ? ContentModel::alt(std::move(*alt), ContentModel::name(b)) : ContentModel::name(b);
    productions.emplace_back(type, ContentModel::star(std::move(*alt)));
  }
  return Dtd(dtd.root(), std::move(productions));
}

// --------------------------------------------------------------------
// Query rewriting

struct SecurityView::Translator {
  Qualifier acc;

  [[noreturn]] static void unsupported(const std::string& what) {
    throw UnsupportedError("cannot rewrite " + what + " over a security view");
  }

  std::vector<Predicate> rewrite_predicates(std::span<const Predicate> preds) const {
    std::vector<Predicate> out;
    for (const auto& p : preds) {
      if (p.is_position()) unsupported("a positional predicate");
      out.emplace_back(qualifier(p.qualifier()));
    }
    return out;
  }

  // Holds at accessible node n iff q holds at n's image in the view.
  Qualifier qualifier(const Qualifier& q) const {
    switch (q.kind()) {
      case Qualifier::Kind::Path:
        return exists(q.expr(), Qualifier::always());
      case Qualifier::Kind::TextEquals:
        return exists(q.expr(), Qualifier::text_equals(XPathExpr::step(Axis::Self, "*"), q.value()));
      case Qualifier::Kind::And:
        return Qualifier::conj(qualifier(q.lhs()), qualifier(q.rhs()));
      case Qualifier::Kind::Or:
        return Qualifier::disj(qualifier(q.lhs()), qualifier(q.rhs()));
      case Qualifier::Kind::Not:
        return Qualifier::negate(qualifier(q.operand()));
      case Qualifier::Kind::NodeEquals:
        unsupported("a node comparison");
    }
    unsupported("this qualifier");
  }

  // Holds at accessible n iff some node reached from n by view path p
  // satisfies k.
  Qualifier exists(const XPathExpr& p, const Qualifier& k) const {
    switch (p.kind()) {
      case XPathExpr::Kind::Step: {
        std::vector<Predicate> preds = rewrite_predicates(p.predicates());
        if (!k.is_always()) preds.emplace_back(k);
        switch (p.axis()) {
          case Axis::Self:
            return Qualifier::path(XPathExpr::step(Axis::Self, p.label(), std::move(preds)));
          case Axis::Descendant:
          case Axis::DescendantOrSelf:
            preds.insert(preds.begin(), Predicate(acc));
            return Qualifier::path(XPathExpr::step(p.axis(), p.label(), std::move(preds)));
          case Axis::Child: {
            // A view child is an accessible descendant whose nearest
            // accessible ancestor is n; n precedes every other candidate
            // parent in document order.
            preds.insert(preds.begin(), Predicate(acc));
            XPathExpr below = XPathExpr::step(Axis::Descendant, p.label(), std::move(preds));
            XPathExpr up = XPathExpr::step(Axis::Ancestor, "*", {acc, Predicate::position(1)});
            return Qualifier::node_equals(
                XPathExpr::filter(XPathExpr::slash(std::move(below), std::move(up)), {Predicate::position(1)}), "*");
          }
          default:
            unsupported("an upward axis");
        }
      }
      case XPathExpr::Kind::Slash:
        return exists(p.lhs(), exists(p.rhs(), k));
      case XPathExpr::Kind::Union:
        return Qualifier::disj(exists(p.lhs(), k), exists(p.rhs(), k));
      case XPathExpr::Kind::Filter: {
        std::vector<Qualifier> parts;
        for (const auto& pred : p.predicates()) {
          if (pred.is_position()) unsupported("a positional predicate");
          parts.push_back(qualifier(pred.qualifier()));
        }
        parts.push_back(k);
        return exists(p.operand(), all_of(parts));
      }
    }
    unsupported("this expression");
  }

  // Holds at accessible m iff m is reached by view path p from some
  // accessible context satisfying `from`.
  Qualifier ends_at(const XPathExpr& p, const Qualifier& from) const {
    switch (p.kind()) {
      case XPathExpr::Kind::Step: {
        std::vector<Predicate> preds = rewrite_predicates(p.predicates());
        switch (p.axis()) {
          case Axis::Self:
            if (!from.is_always()) preds.emplace_back(from);
            break;
          case Axis::Child:
            preds.emplace_back(Qualifier::path(XPathExpr::step(Axis::Ancestor, "*", {acc, Predicate::position(1), from})));
            break;
          case Axis::Descendant:
            preds.emplace_back(Qualifier::path(XPathExpr::step(Axis::Ancestor, "*", {acc, from})));
            break;
          case Axis::DescendantOrSelf:
            preds.emplace_back(Qualifier::path(XPathExpr::step(Axis::AncestorOrSelf, "*", {acc, from})));
            break;
          default:
            unsupported("an upward axis");
        }
        return Qualifier::path(XPathExpr::step(Axis::Self, p.label(), std::move(preds)));
      }
      case XPathExpr::Kind::Slash:
        return ends_at(p.rhs(), ends_at(p.lhs(), from));
      case XPathExpr::Kind::Union:
        return Qualifier::disj(ends_at(p.lhs(), from), ends_at(p.rhs(), from));
      case XPathExpr::Kind::Filter: {
        std::vector<Qualifier> parts{ends_at(p.operand(), from)};
        for (const auto& pred : p.predicates()) {
          if (pred.is_position()) unsupported("a positional predicate");
          parts.push_back(qualifier(pred.qualifier()));
        }
        return all_of(parts);
      }
    }
    unsupported("this expression");
  }

  static const std::string& final_label(const XPathExpr& p) {
    static const std::string any = "*";
    switch (p.kind()) {
      case XPathExpr::Kind::Step:
        return p.label();
      case XPathExpr::Kind::Slash:
        return final_label(p.rhs());
      default:
        return any;
    }
  }

  XPathExpr query(const XPathExpr& q) const {
    Qualifier at_root = Qualifier::negate(Qualifier::path(XPathExpr::step(Axis::Parent, "*")));
    return XPathExpr::step(Axis::DescendantOrSelf, final_label(q), {acc, ends_at(q, at_root)});
  }
};

SecurityView::SecurityView(AccessSpec spec)
    : spec_(std::move(spec)),
      view_dtd_(std::make_shared<const Dtd>(derive_view_dtd(spec_))),
      accessible_(build_accessibility(spec_)) {}

XPathExpr SecurityView::rewrite_query(const XPathExpr& q) const {
  if (classify(q) != Fragment::Downward) throw FragmentError("view queries must lie in the downward fragment");
  return Translator{accessible_}.query(q);
}

Qualifier SecurityView::rewrite_qualifier(const Qualifier& q) const {
  if (classify(q) != Fragment::Downward) throw FragmentError("view qualifiers must lie in the downward fragment");
  return Translator{accessible_}.qualifier(q);
}

Perspective SecurityView::perspective() const {
  Translator t{accessible_};
  return Perspective::view(accessible_, [t](const Qualifier& q) { return t.qualifier(q); });
}

XPathExpr rewrite_query(const AccessSpec& spec, const XPathExpr& q) { return SecurityView(spec).rewrite_query(q); }

RewrittenOp secure_update(const SecurityView& view, const UpdateSpec& update, const UpdateOp& op) {
  const Dtd& vd = view.view_dtd();
  auto visible = [&vd](const std::string& type, const std::string& what) {
    if (!type.empty() && !vd.contains(type)) {
      throw SchemaError(what + " '" + type + "' is not part of the view schema");
    }
  };
  for (const auto& a : update.annotations()) {
    visible(a.element, "annotated type");
    visible(a.type.type, "update type parameter");
    visible(a.type.source, "update type parameter");
    if (const auto& q = a.value.condition()) {
      std::vector<std::string> labels;
      collect_labels(*q, labels);
      for (const auto& l : labels) visible(l, "condition label");
    }
  }
  visible(op.source_type, "source type");

  RewrittenOp out{op, op.target, update_guard(update, op, view.perspective())};
  out.op.target = append_qualifier(view.rewrite_query(op.target), out.guard);
  return out;
}

RewrittenOp secure_update(const AccessSpec& access, const UpdateSpec& update, const UpdateOp& op) {
  return secure_update(SecurityView(access), update, op);
}

}  // namespace secxml
