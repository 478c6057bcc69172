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

#include <optional>
#include <string>
#include <vector>

#include "secxml/xpath.hpp"

namespace secxml {

struct XPathExpr::Node {
  XPathExpr::Kind kind = XPathExpr::Kind::Step;
  Axis axis = Axis::Self;
  std::string label;
  std::vector<Predicate> predicates;
  std::optional<XPathExpr> lhs;  // also the operand of a Filter
  std::optional<XPathExpr> rhs;
};

struct Qualifier::Node {
  Qualifier::Kind kind = Qualifier::Kind::Path;
  std::optional<XPathExpr> expr;
  std::string value;
  std::optional<Qualifier> lhs;  // also the operand of Not
  std::optional<Qualifier> rhs;
};

}  // namespace secxml
