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
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "secxml/dtd.hpp"

namespace secxml {

/// Opaque node identity. Identities are never reused within one tree, and
/// nodes that survive a mutation keep theirs.
class NodeId {
 public:
  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const noexcept { return value_; }
  constexpr bool valid() const noexcept { return value_ != kInvalid; }

  friend constexpr auto operator<=>(NodeId, NodeId) = default;

 private:
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = kInvalid;
};

using NodeSet = std::vector<NodeId>;

/// Ordered labelled tree of element and text nodes.
///
/// Nodes live in an append-only arena indexed by NodeId; removed nodes are
/// tombstoned so identities stay stable. Copying a tree copies the arena.
class XmlTree {
 public:
  /// Creates a tree made of a single element node.
  explicit XmlTree(std::string root_label);

  NodeId root() const noexcept { return root_; }
  bool contains(NodeId n) const noexcept;
  bool is_text(NodeId n) const;
  /// Element-type name, or kTextSymbol for text nodes.
  const std::string& label(NodeId n) const;
  /// String value of a text node; empty for elements.
  const std::string& text(NodeId n) const;
  std::optional<NodeId> parent(NodeId n) const;
  std::span<const NodeId> children(NodeId n) const;
  /// Position of n among its parent's children.
  std::size_t index_in_parent(NodeId n) const;

  /// Live node count.
  std::size_t size() const noexcept { return live_; }
  /// One past the largest identity ever handed out.
  std::uint32_t id_bound() const noexcept { return static_cast<std::uint32_t>(nodes_.size()); }

  /// Live nodes in document (pre-)order.
  NodeSet preorder() const;
  NodeSet preorder(NodeId from) const;

  NodeId append_element(NodeId parent, std::string label);
  NodeId append_text(NodeId parent, std::string value);

  /// Copies `fragment` (all of it) under `parent` before child `position`
  /// (children(parent).size() appends). Returns the new identity of the
  /// fragment root.
  NodeId graft(NodeId parent, std::size_t position, const XmlTree& fragment);
  /// Tombstones n and its descendants and unlinks n from its parent.
  void remove_subtree(NodeId n);

  /// Same shape, labels, text, order and identities.
  friend bool operator==(const XmlTree& a, const XmlTree& b);

 private:
  struct Node {
    bool text = false;
    bool alive = true;
    std::string label;
    std::string value;
    NodeId parent;
    std::vector<NodeId> children;
  };

  const Node& node(NodeId n) const;
  Node& node(NodeId n);
  NodeId add(Node node);
  NodeId graft_node(NodeId parent, std::size_t position, const XmlTree& from, NodeId src);

  std::vector<Node> nodes_;
  NodeId root_;
  std::size_t live_ = 0;
};

/// Position for inserting children.
struct First {};
struct Last {};
struct AtIndex {
  std::size_t index;
};
using ChildPosition = std::variant<First, Last, AtIndex>;

enum class Side { Before, After };

struct DeleteSubtree {
  NodeId node;
};
struct ReplaceSubtree {
  NodeId node;
  std::vector<XmlTree> fragments;
};
struct InsertChildren {
  NodeId node;
  std::vector<XmlTree> fragments;
  ChildPosition position;
};
struct InsertSiblings {
  NodeId node;
  std::vector<XmlTree> fragments;
  Side side;
};
using TreeEdit = std::variant<DeleteSubtree, ReplaceSubtree, InsertChildren, InsertSiblings>;

/// Returns a copy of `tree` with `edit` applied. Fragments are inserted in
/// order with fresh identities. Throws DynamicError for an unknown node, or
/// when a sibling insertion or replacement targets the root; `tree` itself
/// is never modified.
XmlTree mutate(const XmlTree& tree, const TreeEdit& edit);

enum class Violation {
  RootLabel,     // root not labelled with the DTD root type
  UnknownLabel,  // element label not declared
  ContentModel,  // child word outside rg(label)
  TextNotLeaf,   // text node with children
};

struct ValidationIssue {
  NodeId node;
  Violation kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool conforming() const noexcept { return issues.empty(); }
};

ValidationReport validate(const XmlTree& tree, const Dtd& dtd);

std::string_view to_string(Violation v);

}  // namespace secxml

template <>
struct std::hash<secxml::NodeId> {
  std::size_t operator()(secxml::NodeId n) const noexcept { return std::hash<std::uint32_t>{}(n.value()); }
};
