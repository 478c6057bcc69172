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

#include <memory>
#include <string>
#include <string_view>

#include "secxml/dtd.hpp"
#include "secxml/xml_tree.hpp"

namespace secxml::testing {

std::string fixture_path(std::string_view name);
std::string read_fixture(std::string_view name);

std::shared_ptr<const Dtd> hospital_dtd();
XmlTree hospital_doc();

/// Element nodes with the given label, in document order.
NodeSet nodes_labelled(const XmlTree& tree, std::string_view label);
/// k-th (1-based, document order) node with the given label.
NodeId nth(const XmlTree& tree, std::string_view label, std::size_t k);
/// The patient whose pname text is `name`.
NodeId patient_named(const XmlTree& tree, std::string_view name);
/// First child of n with the given label.
NodeId child_labelled(const XmlTree& tree, NodeId n, std::string_view label);

}  // namespace secxml::testing
