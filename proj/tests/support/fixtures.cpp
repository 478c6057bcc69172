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

#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "secxml/xml_io.hpp"

#ifndef SECXML_FIXTURE_DIR
#error "SECXML_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace secxml::testing {

std::string fixture_path(std::string_view name) { return std::string(SECXML_FIXTURE_DIR) + "/" + std::string(name); }

std::string read_fixture(std::string_view name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + std::string(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const Dtd> hospital_dtd() {
  static const auto dtd = std::make_shared<const Dtd>(parse_dtd(read_fixture("hospital.dtd")));
  return dtd;
}

XmlTree hospital_doc() { return parse_xml(read_fixture("hospital.xml")); }

NodeSet nodes_labelled(const XmlTree& tree, std::string_view label) {
  NodeSet out;
  for (NodeId n : tree.preorder()) {
    if (!tree.is_text(n) && tree.label(n) == label) out.push_back(n);
  }
  return out;
}

NodeId nth(const XmlTree& tree, std::string_view label, std::size_t k) {
  NodeSet all = nodes_labelled(tree, label);
  if (k == 0 || k > all.size()) throw std::out_of_range("no " + std::string(label) + " #" + std::to_string(k));
  return all[k - 1];
}

NodeId child_labelled(const XmlTree& tree, NodeId n, std::string_view label) {
  for (NodeId c : tree.children(n)) {
    if (!tree.is_text(c) && tree.label(c) == label) return c;
  }
  throw std::out_of_range("no child " + std::string(label));
}

NodeId patient_named(const XmlTree& tree, std::string_view name) {
  for (NodeId p : nodes_labelled(tree, "patient")) {
    NodeId pname = child_labelled(tree, p, "pname");
    auto kids = tree.children(pname);
    if (!kids.empty() && tree.text(kids.front()) == name) return p;
  }
  throw std::out_of_range("no patient " + std::string(name));
}

}  // namespace secxml::testing
