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

#include "secxml/rewriter.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "secxml/error.hpp"
#include "secxml/xml_io.hpp"
#include "text_util.hpp"

namespace secxml {

namespace {

bool starts_with_word(std::string_view text, std::string_view word) {
  if (!text.starts_with(word)) return false;
  return text.size() == word.size() || std::isspace(static_cast<unsigned char>(text[word.size()]));
}

XPathExpr parse_target(std::string_view text) {
  text = detail::trim(text);
  if (text.empty()) throw ParseError("missing target expression");
  return parse_xpath(text, Fragment::Downward);
}

std::string common_root_type(const std::vector<XmlTree>& source) {
  if (source.empty()) throw ParseError("expected at least one source fragment");
  const std::string& type = source.front().label(source.front().root());
  for (const auto& f : source) {
    if (f.label(f.root()) != type) {
      throw ParseError("source fragments must share one root type, found '" + type + "' and '" +
                       f.label(f.root()) + "'");
    }
  }
  return type;
}

// Position of the `with` keyword of a replace, outside quotes and brackets.
std::optional<std::size_t> find_with(std::string_view text) {
  char quote = 0;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    switch (c) {
      case '\'':
      case '"':
        quote = c;
        break;
      case '[':
      case '(':
        ++depth;
        break;
      case ']':
      case ')':
        --depth;
        break;
      default:
        if (depth == 0 && i > 0 && std::isspace(static_cast<unsigned char>(text[i - 1])) &&
            starts_with_word(text.substr(i), "with")) {
          return i;
        }
    }
  }
  return std::nullopt;
}

}  // namespace

UpdateOp parse_update(std::string_view text) {
  text = detail::trim(text);
  UpdateOp op;
  if (starts_with_word(text, "delete")) {
    op.kind = UpdateKind::Delete;
    op.target = parse_target(text.substr(6));
    return op;
  }
  if (starts_with_word(text, "replace")) {
    std::string_view rest = text.substr(7);
    auto with = find_with(rest);
    if (!with) throw ParseError("expected 'replace <xpath> with <fragment>...'");
    op.kind = UpdateKind::Replace;
    op.target = parse_target(rest.substr(0, *with));
    std::string_view frags = detail::trim(rest.substr(*with + 4));
    op.source = parse_fragments(frags);
    op.source_type = common_root_type(op.source);
    return op;
  }
  if (starts_with_word(text, "insert")) {
    std::string_view rest = text.substr(6);
    std::size_t pos = 0;
    op.source = parse_fragments(rest, pos);
    op.source_type = common_root_type(op.source);
    rest = detail::trim(rest.substr(pos));
    static constexpr std::pair<std::string_view, UpdateKind> kPlacements[] = {
        {"as first into", UpdateKind::InsertAsFirst}, {"as last into", UpdateKind::InsertAsLast},
        {"into", UpdateKind::InsertInto},             {"before", UpdateKind::InsertBefore},
        {"after", UpdateKind::InsertAfter},
    };
    for (const auto& [words, kind] : kPlacements) {
      if (starts_with_word(rest, words)) {
        op.kind = kind;
        op.target = parse_target(rest.substr(words.size()));
        return op;
      }
    }
    throw ParseError("expected 'into', 'as first into', 'as last into', 'before' or 'after' after the source");
  }
  throw ParseError("operation must start with insert, delete or replace");
}

std::string to_string(const UpdateOp& op) {
  std::string frags;
  for (const auto& f : op.source) frags += serialize_compact(f);
  std::string target = to_string(op.target);
  switch (op.kind) {
    case UpdateKind::Delete:
      return "delete " + target;
    case UpdateKind::Replace:
      return "replace " + target + " with " + frags;
    case UpdateKind::InsertInto:
      return "insert " + frags + " into " + target;
    case UpdateKind::InsertAsFirst:
      return "insert " + frags + " as first into " + target;
    case UpdateKind::InsertAsLast:
      return "insert " + frags + " as last into " + target;
    case UpdateKind::InsertBefore:
      return "insert " + frags + " before " + target;
    case UpdateKind::InsertAfter:
      return "insert " + frags + " after " + target;
  }
  return target;
}

XPathExpr append_qualifier(const XPathExpr& e, const Qualifier& q) {
  switch (e.kind()) {
    case XPathExpr::Kind::Step: {
      std::vector<Predicate> preds(e.predicates().begin(), e.predicates().end());
      preds.emplace_back(q);
      return XPathExpr::step(e.axis(), e.label(), std::move(preds));
    }
    case XPathExpr::Kind::Slash:
      return XPathExpr::slash(e.lhs(), append_qualifier(e.rhs(), q));
    case XPathExpr::Kind::Union:
    case XPathExpr::Kind::Filter:
      break;
  }
  return XPathExpr::filter(e, {q});
}

Qualifier update_guard(const UpdateSpec& spec, const UpdateOp& op, const Perspective& view) {
  switch (op.kind) {
    case UpdateKind::Delete:
    case UpdateKind::Replace: {
      // Each selected node must sit under a parent updatable for its type.
      std::vector<Qualifier> disjuncts;
      for (const UpdateType& ut : spec.update_types()) {
        if (ut.kind != op.kind || (op.kind == UpdateKind::Replace && ut.source != op.source_type)) continue;
        Qualifier u = build_updatability(spec, ut, view);
        if (u.is_never()) continue;
        disjuncts.push_back(Qualifier::path(XPathExpr::step(Axis::Self, ut.type, {Qualifier::path(view.parent({u}))})));
      }
      return any_of(disjuncts);
    }
    case UpdateKind::InsertInto: {
      Qualifier u = build_updatability(spec, {UpdateKind::InsertInto, op.source_type, {}}, view);
      if (u.is_never()) return u;
      Qualifier crp = build_crp(spec, op.source_type, view);
      return crp.is_never() ? u : Qualifier::conj(std::move(u), Qualifier::negate(std::move(crp)));
    }
    case UpdateKind::InsertAsFirst:
    case UpdateKind::InsertAsLast:
    case UpdateKind::InsertBefore:
    case UpdateKind::InsertAfter:
      return build_updatability(spec, {op.kind, op.source_type, {}}, view);
  }
  return Qualifier::never();
}

RewrittenOp rewrite_update(const UpdateSpec& spec, const UpdateOp& op) {
  RewrittenOp out{op, op.target, update_guard(spec, op)};
  out.op.target = append_qualifier(op.target, out.guard);
  return out;
}

std::string_view to_string(ApplyStatus s) {
  switch (s) {
    case ApplyStatus::Accepted:
      return "accepted";
    case ApplyStatus::AcceptedNoOp:
      return "accepted-no-op";
    case ApplyStatus::DynamicError:
      return "dynamic-error";
    case ApplyStatus::RejectedInvalid:
      return "rejected-invalid";
  }
  return "?";
}

namespace {

XmlTree edit(const XmlTree& tree, const UpdateOp& op, const NodeSet& targets) {
  switch (op.kind) {
    case UpdateKind::Delete: {
      // A target inside another target's subtree disappears with it.
      std::vector<char> selected(tree.id_bound(), 0);
      for (NodeId t : targets) selected[t.value()] = 1;
      XmlTree out = tree;
      for (NodeId t : targets) {
        bool covered = false;
        for (auto p = tree.parent(t); p && !covered; p = tree.parent(*p)) covered = selected[p->value()] != 0;
        if (!covered) out = mutate(out, DeleteSubtree{t});
      }
      return out;
    }
    case UpdateKind::Replace:
      return mutate(tree, ReplaceSubtree{targets.front(), op.source});
    case UpdateKind::InsertInto:
    case UpdateKind::InsertAsLast:
      return mutate(tree, InsertChildren{targets.front(), op.source, Last{}});
    case UpdateKind::InsertAsFirst:
      return mutate(tree, InsertChildren{targets.front(), op.source, First{}});
    case UpdateKind::InsertBefore:
      return mutate(tree, InsertSiblings{targets.front(), op.source, Side::Before});
    case UpdateKind::InsertAfter:
      return mutate(tree, InsertSiblings{targets.front(), op.source, Side::After});
  }
  return tree;
}

}  // namespace

ApplyResult apply_update(const Dtd& dtd, const XmlTree& tree, const RewrittenOp& rop) {
  ApplyResult result{tree, {}};
  ApplyReport& report = result.report;
  report.targets = Evaluator(tree).eval(rop.op.target, tree.root());
  if (report.targets.empty()) {
    report.status = ApplyStatus::AcceptedNoOp;
    report.reason = "target selects no node";
    return result;
  }
  if (rop.op.kind != UpdateKind::Delete && report.targets.size() > 1) {
    report.status = ApplyStatus::DynamicError;
    report.reason = std::string(to_string(rop.op.kind)) + " needs exactly one target node, found " +
                    std::to_string(report.targets.size());
    return result;
  }
  XmlTree edited = tree;
  try {
    edited = edit(tree, rop.op, report.targets);
  } catch (const DynamicError& e) {
    report.status = ApplyStatus::DynamicError;
    report.reason = e.what();
    return result;
  }
  ValidationReport check = validate(edited, dtd);
  if (!check.conforming()) {
    report.status = ApplyStatus::RejectedInvalid;
    report.reason = "result does not conform to the DTD";
    report.violations = std::move(check.issues);
    return result;
  }
  std::uint32_t old_bound = tree.id_bound();
  for (NodeId n : edited.preorder()) {
    auto p = edited.parent(n);
    if (n.value() >= old_bound && p && p->value() < old_bound) report.inserted.push_back(n);
  }
  report.status = ApplyStatus::Accepted;
  result.tree = std::move(edited);
  return result;
}

}  // namespace secxml
