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
#include <vector>

#include "secxml/xpath.hpp"

namespace secxml {

Evaluator::Evaluator(const XmlTree& tree) : tree_(tree), rank_(tree.id_bound(), 0) {
  std::size_t r = 0;
  for (NodeId n : tree.preorder()) rank_[n.value()] = r++;
}

void Evaluator::sort_document_order(NodeSet& nodes) const {
  std::sort(nodes.begin(), nodes.end(), [this](NodeId a, NodeId b) { return rank(a) < rank(b); });
}

bool Evaluator::matches(NodeId n, const std::string& label) const {
  if (tree_.is_text(n)) return false;
  return label == "*" || tree_.label(n) == label;
}

NodeSet Evaluator::eval(const XPathExpr& e, NodeId context) {
  using K = XPathExpr::Kind;
  switch (e.kind()) {
    case K::Step:
      return eval_step(e, context);
    case K::Slash: {
      std::vector<char> seen(tree_.id_bound(), 0);
      NodeSet out;
      for (NodeId n : eval(e.lhs(), context)) {
        for (NodeId m : eval(e.rhs(), n)) {
          if (!seen[m.value()]) {
            seen[m.value()] = 1;
            out.push_back(m);
          }
        }
      }
      sort_document_order(out);
      return out;
    }
    case K::Union: {
      NodeSet out = eval(e.lhs(), context);
      NodeSet rhs = eval(e.rhs(), context);
      out.insert(out.end(), rhs.begin(), rhs.end());
      sort_document_order(out);
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case K::Filter: {
      NodeSet base = eval(e.operand(), context);
      sort_document_order(base);
      return apply_predicates(std::move(base), e.predicates());
    }
  }
  return {};
}

NodeSet Evaluator::eval_step(const XPathExpr& step, NodeId context) {
  NodeSet candidates;
  switch (step.axis()) {
    case Axis::Self:
      candidates.push_back(context);
      break;
    case Axis::Child: {
      auto kids = tree_.children(context);
      candidates.assign(kids.begin(), kids.end());
      break;
    }
    case Axis::Descendant:
      candidates = tree_.preorder(context);
      candidates.erase(candidates.begin());
      break;
    case Axis::DescendantOrSelf:
      candidates = tree_.preorder(context);
      break;
    case Axis::Parent:
      if (auto p = tree_.parent(context)) candidates.push_back(*p);
      break;
    case Axis::AncestorOrSelf:
      candidates.push_back(context);
      [[fallthrough]];
    case Axis::Ancestor:
      for (auto p = tree_.parent(context); p; p = tree_.parent(*p)) candidates.push_back(*p);
      break;
  }
  std::erase_if(candidates, [&](NodeId n) { return !matches(n, step.label()); });
  return apply_predicates(std::move(candidates), step.predicates());
}

NodeSet Evaluator::apply_predicates(NodeSet nodes, std::span<const Predicate> preds) {
  for (const Predicate& p : preds) {
    if (p.is_position()) {
      std::size_t k = p.position_value();
      if (k <= nodes.size()) {
        NodeId chosen = nodes[k - 1];
        nodes.assign(1, chosen);
      } else {
        nodes.clear();
      }
    } else {
      std::erase_if(nodes, [&](NodeId n) { return !holds(p.qualifier(), n); });
    }
    if (nodes.empty()) break;
  }
  return nodes;
}

bool Evaluator::holds(const Qualifier& q, NodeId context) {
  auto [it, inserted] = memo_.try_emplace(q.identity(), MemoEntry{q, {}});
  if (inserted) it->second.results.assign(tree_.id_bound(), -1);
  if (std::int8_t cached = it->second.results[context.value()]; cached >= 0) return cached != 0;

  bool result = false;
  switch (q.kind()) {
    case Qualifier::Kind::Path:
      result = !eval(q.expr(), context).empty();
      break;
    case Qualifier::Kind::TextEquals:
      for (NodeId n : eval(q.expr(), context)) {
        for (NodeId c : tree_.children(n)) {
          if (tree_.is_text(c) && tree_.text(c) == q.value()) {
            result = true;
            break;
          }
        }
        if (result) break;
      }
      break;
    case Qualifier::Kind::And:
      result = holds(q.lhs(), context) && holds(q.rhs(), context);
      break;
    case Qualifier::Kind::Or:
      result = holds(q.lhs(), context) || holds(q.rhs(), context);
      break;
    case Qualifier::Kind::Not:
      result = !holds(q.operand(), context);
      break;
    case Qualifier::Kind::NodeEquals: {
      NodeSet r = eval(q.expr(), context);
      result = r.size() == 1 && r.front() == context && matches(context, q.value());
      break;
    }
  }
  // The map may have rehashed during recursion.
  memo_.find(q.identity())->second.results[context.value()] = result ? 1 : 0;
  return result;
}

NodeSet eval(const XPathExpr& e, const XmlTree& tree, NodeId context) { return Evaluator(tree).eval(e, context); }

bool eval_qualifier(const Qualifier& q, const XmlTree& tree, NodeId context) {
  return Evaluator(tree).holds(q, context);
}

}  // namespace secxml
