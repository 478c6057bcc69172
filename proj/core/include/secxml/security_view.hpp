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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "secxml/dtd.hpp"
#include "secxml/policy.hpp"
#include "secxml/rewriter.hpp"
#include "secxml/xml_tree.hpp"
#include "secxml/xpath.hpp"

namespace secxml {

struct AccessAnnotation {
  std::string parent;
  std::string child;
  AnnotationValue value;
};

/// Partial map (parent type, child type) -> annotation value describing
/// which nodes a user class may read.
class AccessSpec {
 public:
  explicit AccessSpec(std::shared_ptr<const Dtd> dtd);

  /// Throws SchemaError when `child` does not occur in rg(parent) or the
  /// pair is already annotated.
  void add(std::string parent, std::string child, AnnotationValue value);

  const Dtd& dtd() const noexcept { return *dtd_; }
  const std::shared_ptr<const Dtd>& dtd_ptr() const noexcept { return dtd_; }
  std::span<const AccessAnnotation> annotations() const noexcept { return annotations_; }
  std::size_t size() const noexcept { return annotations_.size(); }
  const AnnotationValue* find(std::string_view parent, std::string_view child) const;

 private:
  std::shared_ptr<const Dtd> dtd_;
  std::vector<AccessAnnotation> annotations_;
};

/// Access file: one `access <Parent>/<Child> = <value>` per line.
AccessSpec parse_access_spec(std::string_view text, std::shared_ptr<const Dtd> dtd);

/// Accessibility by top-down propagation from the (always accessible) root.
/// Conditions are evaluated at the child node the annotation governs.
bool oracle_accessible(const AccessSpec& spec, const XmlTree& tree, NodeId n);
/// The same walk for every node; indexed by NodeId value.
std::vector<bool> oracle_accessible_all(const AccessSpec& spec, const XmlTree& tree);

/// Qualifier valid exactly at accessible nodes; constant-true for an empty
/// spec.
Qualifier build_accessibility(const AccessSpec& spec);

/// `ancestor::*[acc]`: accessible ancestors, nearest first.
XPathExpr build_accessible_ancestors(const AccessSpec& spec);

/// Correspondence between a document and its materialised view.
struct ViewMapping {
  /// Accessible nodes of the document, in document order.
  NodeSet accessible;
  /// Nearest accessible strict ancestor of each accessible non-root node.
  std::unordered_map<NodeId, NodeId> view_parent;
  std::unordered_map<NodeId, NodeId> to_view;
  std::unordered_map<NodeId, NodeId> to_document;

  NodeSet document_nodes(const NodeSet& view_nodes) const;
};

struct MaterializedView {
  XmlTree tree;
  ViewMapping mapping;
};

/// Tree of the accessible nodes, each attached under its nearest accessible
/// ancestor, in document order.
MaterializedView extract_view(const AccessSpec& spec, const XmlTree& tree);

/// Schema of the view: element types that can be accessible, with content
/// models kept when every child edge stays visible and widened to
/// `(B1 | ... | Bk)*` otherwise.
Dtd derive_view_dtd(const AccessSpec& spec);

/// Security view: view schema plus the access annotations.
class SecurityView {
 public:
  explicit SecurityView(AccessSpec spec);

  const AccessSpec& spec() const noexcept { return spec_; }
  const Dtd& view_dtd() const noexcept { return *view_dtd_; }
  const std::shared_ptr<const Dtd>& view_dtd_ptr() const noexcept { return view_dtd_; }
  const Qualifier& accessible() const noexcept { return accessible_; }

  /// Translates a downward query over the view into one over the document
  /// selecting the same nodes when evaluated at the document root.
  XPathExpr rewrite_query(const XPathExpr& q) const;
  /// Translates a view qualifier; the result is meant for accessible
  /// context nodes of the document.
  Qualifier rewrite_qualifier(const Qualifier& q) const;

  /// Perspective navigating accessible nodes only.
  Perspective perspective() const;

 private:
  struct Translator;

  AccessSpec spec_;
  std::shared_ptr<const Dtd> view_dtd_;
  Qualifier accessible_;
};

XPathExpr rewrite_query(const AccessSpec& spec, const XPathExpr& q);

/// Two-step pipeline: the target is first rewritten against read access,
/// then guarded by the update policy (defined over the view schema) as seen
/// from the view.
RewrittenOp secure_update(const SecurityView& view, const UpdateSpec& update, const UpdateOp& op);
RewrittenOp secure_update(const AccessSpec& access, const UpdateSpec& update, const UpdateOp& op);

}  // namespace secxml
