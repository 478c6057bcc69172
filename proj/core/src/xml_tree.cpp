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

#include "secxml/xml_tree.hpp"

#include <algorithm>
#include <string>
#include <type_traits>
#include <variant>

#include "secxml/error.hpp"

namespace secxml {

XmlTree::XmlTree(std::string root_label) {
  Node n;
  n.label = std::move(root_label);
  root_ = add(std::move(n));
}

NodeId XmlTree::add(Node n) {
  nodes_.push_back(std::move(n));
  ++live_;
  return NodeId(static_cast<std::uint32_t>(nodes_.size() - 1));
}

bool XmlTree::contains(NodeId n) const noexcept {
  return n.valid() && n.value() < nodes_.size() && nodes_[n.value()].alive;
}

const XmlTree::Node& XmlTree::node(NodeId n) const {
  if (!contains(n)) throw DynamicError("unknown node " + std::to_string(n.value()));
  return nodes_[n.value()];
}

XmlTree::Node& XmlTree::node(NodeId n) {
  if (!contains(n)) throw DynamicError("unknown node " + std::to_string(n.value()));
  return nodes_[n.value()];
}

bool XmlTree::is_text(NodeId n) const { return node(n).text; }

const std::string& XmlTree::label(NodeId n) const {
  static const std::string text_label(kTextSymbol);
  const Node& nd = node(n);
  return nd.text ? text_label : nd.label;
}

const std::string& XmlTree::text(NodeId n) const { return node(n).value; }

std::optional<NodeId> XmlTree::parent(NodeId n) const {
  const Node& nd = node(n);
  if (!nd.parent.valid()) return std::nullopt;
  return nd.parent;
}

std::span<const NodeId> XmlTree::children(NodeId n) const { return node(n).children; }

std::size_t XmlTree::index_in_parent(NodeId n) const {
  const Node& nd = node(n);
  if (!nd.parent.valid()) return 0;
  const auto& siblings = node(nd.parent).children;
  return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), n) - siblings.begin());
}

NodeSet XmlTree::preorder() const { return preorder(root_); }

NodeSet XmlTree::preorder(NodeId from) const {
  NodeSet out;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    out.push_back(n);
    const auto& kids = node(n).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

NodeId XmlTree::append_element(NodeId parent, std::string label) {
  if (node(parent).text) throw DynamicError("text nodes cannot have children");
  Node n;
  n.label = std::move(label);
  n.parent = parent;
  NodeId id = add(std::move(n));
  nodes_[parent.value()].children.push_back(id);
  return id;
}

NodeId XmlTree::append_text(NodeId parent, std::string value) {
  if (node(parent).text) throw DynamicError("text nodes cannot have children");
  Node n;
  n.text = true;
  n.value = std::move(value);
  n.parent = parent;
  NodeId id = add(std::move(n));
  nodes_[parent.value()].children.push_back(id);
  return id;
}

NodeId XmlTree::graft_node(NodeId parent, std::size_t position, const XmlTree& from, NodeId src) {
  const Node& s = from.node(src);
  Node n;
  n.text = s.text;
  n.label = s.label;
  n.value = s.value;
  n.parent = parent;
  NodeId id = add(std::move(n));
  auto& siblings = nodes_[parent.value()].children;
  siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(position), id);
  std::size_t i = 0;
  for (NodeId child : from.node(src).children) graft_node(id, i++, from, child);
  return id;
}

NodeId XmlTree::graft(NodeId parent, std::size_t position, const XmlTree& fragment) {
  if (node(parent).text) throw DynamicError("text nodes cannot have children");
  if (position > node(parent).children.size()) throw DynamicError("insertion index out of range");
  return graft_node(parent, position, fragment, fragment.root());
}

void XmlTree::remove_subtree(NodeId n) {
  Node& nd = node(n);
  if (nd.parent.valid()) {
    auto& siblings = nodes_[nd.parent.value()].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), n));
  }
  for (NodeId d : preorder(n)) {
    nodes_[d.value()].alive = false;
    --live_;
  }
}

bool operator==(const XmlTree& a, const XmlTree& b) {
  if (a.root_ != b.root_ || a.live_ != b.live_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (NodeId n : a.preorder()) {
    if (!b.contains(n)) return false;
    const auto& x = a.nodes_[n.value()];
    const auto& y = b.nodes_[n.value()];
    if (x.text != y.text || x.label != y.label || x.value != y.value || x.parent != y.parent ||
        x.children != y.children) {
      return false;
    }
  }
  return true;
}

// --------------------------------------------------------------------

namespace {

struct EditApplier {
  XmlTree& tree;

  void insert_all(NodeId parent, std::size_t at, const std::vector<XmlTree>& fragments) {
    for (const auto& f : fragments) tree.graft(parent, at++, f);
  }

  NodeId parent_of(NodeId n, const char* what) {
    auto p = tree.parent(n);
    if (!p) throw DynamicError(std::string(what) + " target node has no parent");
    return *p;
  }

  void operator()(const DeleteSubtree& e) {
    parent_of(e.node, "delete");
    tree.remove_subtree(e.node);
  }

  void operator()(const ReplaceSubtree& e) {
    NodeId parent = parent_of(e.node, "replace");
    std::size_t at = tree.index_in_parent(e.node);
    tree.remove_subtree(e.node);
    insert_all(parent, at, e.fragments);
  }

  void operator()(const InsertChildren& e) {
    if (tree.is_text(e.node)) throw DynamicError("cannot insert children into a text node");
    std::size_t count = tree.children(e.node).size();
    std::size_t at = std::visit(
        [&](const auto& p) -> std::size_t {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, First>) {
            return 0;
          } else if constexpr (std::is_same_v<P, Last>) {
            return count;
          } else {
            if (p.index > count) throw DynamicError("insertion index out of range");
            return p.index;
          }
        },
        e.position);
    insert_all(e.node, at, e.fragments);
  }

  void operator()(const InsertSiblings& e) {
    NodeId parent = parent_of(e.node, "sibling insertion");
    std::size_t at = tree.index_in_parent(e.node) + (e.side == Side::After ? 1 : 0);
    insert_all(parent, at, e.fragments);
  }
};

}  // namespace

XmlTree mutate(const XmlTree& tree, const TreeEdit& edit) {
  XmlTree out = tree;
  std::visit(EditApplier{out}, edit);
  return out;
}

// --------------------------------------------------------------------

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::RootLabel:
      return "root-label";
    case Violation::UnknownLabel:
      return "unknown-label";
    case Violation::ContentModel:
      return "content-model";
    case Violation::TextNotLeaf:
      return "text-not-leaf";
  }
  return "?";
}

ValidationReport validate(const XmlTree& tree, const Dtd& dtd) {
  ValidationReport report;
  auto issue = [&](NodeId n, Violation kind, std::string message) {
    report.issues.push_back({n, kind, std::move(message)});
  };

  if (tree.is_text(tree.root()) || tree.label(tree.root()) != dtd.root()) {
    issue(tree.root(), Violation::RootLabel,
          "root is '" + tree.label(tree.root()) + "', expected '" + dtd.root() + "'");
  }
  std::vector<std::string> word;
  for (NodeId n : tree.preorder()) {
    if (tree.is_text(n)) {
      if (!tree.children(n).empty()) issue(n, Violation::TextNotLeaf, "text node has children");
      continue;
    }
    const std::string& label = tree.label(n);
    if (!dtd.contains(label)) {
      issue(n, Violation::UnknownLabel, "element type '" + label + "' is not declared");
      continue;
    }
    word.clear();
    for (NodeId c : tree.children(n)) word.push_back(tree.label(c));
    if (!dtd.accepts(label, word)) {
      std::string got;
      for (const auto& w : word) got += (got.empty() ? "" : " ") + w;
      issue(n, Violation::ContentModel,
            "children of '" + label + "' [" + got + "] do not match " + dtd.content_model(label).to_string());
    }
  }
  return report;
}

}  // namespace secxml
