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
#include <string>
#include <string_view>
#include <vector>

#include "secxml/policy.hpp"
#include "secxml/xml_tree.hpp"
#include "secxml/xpath.hpp"

namespace secxml {

/// insert / delete / replace operation with a downward target.
struct UpdateOp {
  UpdateKind kind = UpdateKind::Delete;
  XPathExpr target = XPathExpr::step(Axis::Self, "*");
  std::vector<XmlTree> source;
  /// Common root type of the source fragments; empty for delete.
  std::string source_type;
};

/// Parses
///   insert <frag>... (into | as first into | as last into | before | after) <xpath>
///   delete <xpath>
///   replace <xpath> with <frag>...
/// Throws ParseError on malformed text or mixed source root types, and
/// FragmentError when the target leaves the downward fragment.
UpdateOp parse_update(std::string_view text);

std::string to_string(const UpdateOp& op);

/// Operation whose target carries one appended safety qualifier.
struct RewrittenOp {
  UpdateOp op;
  XPathExpr original_target = XPathExpr::step(Axis::Self, "*");
  Qualifier guard = Qualifier::never();
};

/// Attaches q to the last step of e (or wraps a union in a filter).
XPathExpr append_qualifier(const XPathExpr& e, const Qualifier& q);

/// Safety qualifier for `op` under `spec`, seen through `view`.
Qualifier update_guard(const UpdateSpec& spec, const UpdateOp& op, const Perspective& view = Perspective::document());

/// Rewrites the target of op so that it only selects nodes the spec allows
/// the operation on.
RewrittenOp rewrite_update(const UpdateSpec& spec, const UpdateOp& op);

enum class ApplyStatus { Accepted, AcceptedNoOp, DynamicError, RejectedInvalid };

std::string_view to_string(ApplyStatus s);

struct ApplyReport {
  ApplyStatus status = ApplyStatus::AcceptedNoOp;
  /// Nodes selected by the rewritten target (in the input tree).
  NodeSet targets;
  /// Roots of inserted fragments (in the output tree).
  NodeSet inserted;
  std::string reason;
  std::vector<ValidationIssue> violations;

  bool accepted() const noexcept {
    return status == ApplyStatus::Accepted || status == ApplyStatus::AcceptedNoOp;
  }
};

struct ApplyResult {
  XmlTree tree;
  ApplyReport report;
};

/// Evaluates the rewritten target at the root and applies the edit.
/// delete accepts any number of targets; the other kinds need exactly one
/// (zero selected is a no-op). The result is revalidated against `dtd`;
/// on a dynamic error or a validation failure the input tree is returned.
ApplyResult apply_update(const Dtd& dtd, const XmlTree& tree, const RewrittenOp& op);

}  // namespace secxml
