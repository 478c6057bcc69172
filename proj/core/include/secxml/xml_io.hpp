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

#include "secxml/xml_tree.hpp"

namespace secxml {

/// Parses a well-formed document made of elements and text only. An XML
/// declaration is skipped; attributes, comments, processing instructions,
/// CDATA sections and DOCTYPE declarations raise ParseError. Whitespace-only
/// text is dropped; non-blank text next to element children is rejected as
/// mixed content.
XmlTree parse_xml(std::string_view text);

/// Parses a sequence of sibling elements starting at `pos`, stopping at the
/// first non-blank character that does not open an element. `pos` is left
/// on that character.
std::vector<XmlTree> parse_fragments(std::string_view text, std::size_t& pos);

/// Parses a whole string as a sequence of sibling elements.
std::vector<XmlTree> parse_fragments(std::string_view text);

/// Deterministic rendering: two-space indentation, one element per line,
/// elements whose only child is text kept on one line, `<x/>` for empty
/// elements. Ends with a newline.
std::string serialize(const XmlTree& tree);
std::string serialize(const XmlTree& tree, NodeId from);

/// Compact single-line rendering, used for fragments in operation text.
std::string serialize_compact(const XmlTree& tree);

/// Location path such as `/hospital[1]/dept[2]/dname[1]`, counting
/// same-label siblings. Text nodes end in `text()[k]`.
std::string node_path(const XmlTree& tree, NodeId n);

}  // namespace secxml
