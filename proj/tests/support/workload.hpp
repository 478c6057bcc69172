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

// Scaling workload: a recursive chain schema t0 -> t1* -> ... -> t0 with
// one delete annotation per type, so the delete rewriting touches n
// distinct update types.

#include <memory>
#include <string>

#include "secxml/dtd.hpp"
#include "secxml/policy.hpp"
#include "secxml/rewriter.hpp"

namespace secxml::testing {

inline std::string chain_type(std::size_t i) { return "t" + std::to_string(i); }

inline std::shared_ptr<const Dtd> chain_dtd(std::size_t n) {
  std::vector<std::pair<std::string, ContentModel>> productions;
  ContentModel top = ContentModel::name(chain_type(0));
  productions.emplace_back("r", ContentModel::star(std::move(top)));
  for (std::size_t i = 0; i < n; ++i) {
    productions.emplace_back(chain_type(i), ContentModel::star(ContentModel::name(chain_type((i + 1) % n))));
  }
  return std::make_shared<const Dtd>("r", std::move(productions));
}

/// n annotations `annot t_i delete[t_{i+1}] = v_i`, cycling through every
/// value form.
inline UpdateSpec chain_policy(std::size_t n) {
  auto dtd = chain_dtd(n);
  UpdateSpec spec(dtd);
  for (std::size_t i = 0; i < n; ++i) {
    std::string next = chain_type((i + 1) % n);
    Qualifier q = Qualifier::path(XPathExpr::step(Axis::Child, next));
    AnnotationValue v = AnnotationValue::allow();
    switch (i % 5) {
      case 0:
        v = AnnotationValue::allow();
        break;
      case 1:
        v = AnnotationValue::conditional(q);
        break;
      case 2:
        v = AnnotationValue::conditional_closed(q);
        break;
      case 3:
        v = AnnotationValue::deny_closed();
        break;
      default:
        v = AnnotationValue::deny();
        break;
    }
    spec.add(chain_type(i), {UpdateKind::Delete, next, {}}, std::move(v));
  }
  return spec;
}

inline UpdateOp chain_delete() {
  UpdateOp op;
  op.kind = UpdateKind::Delete;
  op.target = XPathExpr::step(Axis::Descendant, "*");
  return op;
}

}  // namespace secxml::testing
