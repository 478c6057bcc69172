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

#include "secxml/xml_io.hpp"

#include <cctype>
#include <cstdint>
#include <string>

#include "secxml/error.hpp"

namespace secxml {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}
bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class XmlParser {
 public:
  XmlParser(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  XmlTree document() {
    skip_prolog();
    if (!at('<')) fail("expected a root element");
    XmlTree tree = element();
    skip_blank();
    if (pos_ < text_.size()) {
      if (at("<!--")) fail("comments are not supported");
      if (at("<?")) fail("processing instructions are not supported");
      fail("content after the root element");
    }
    return tree;
  }

  std::vector<XmlTree> fragments() {
    std::vector<XmlTree> out;
    for (;;) {
      std::size_t save = pos_;
      skip_blank();
      if (!at('<') || at("</")) {
        pos_ = save;
        break;
      }
      reject_markup();
      out.push_back(element());
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("XML: " + what, line, col);
  }

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  bool at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void skip_blank() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void skip_prolog() {
    if (text_.substr(pos_, 3) == "\xEF\xBB\xBF") pos_ += 3;
    skip_blank();
    if (at("<?xml") && pos_ + 5 < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_ + 5]))) {
      auto end = text_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_blank();
    reject_markup();
  }

  void reject_markup() {
    if (at("<!--")) fail("comments are not supported");
    if (at("<![CDATA[")) fail("CDATA sections are not supported");
    if (at("<!")) fail("DOCTYPE and other declarations are not supported");
    if (at("<?")) fail("processing instructions are not supported");
  }

  std::string name() {
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected a name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    std::string n(text_.substr(start, pos_ - start));
    if (n.find(':') != std::string::npos) fail("namespaces are not supported ('" + n + "')");
    return n;
  }

  XmlTree element() {
    ++pos_;  // '<'
    XmlTree tree(name());
    content(tree, tree.root());
    return tree;
  }

  // Parses the rest of a start tag, the content and the end tag of `self`.
  void content(XmlTree& tree, NodeId self) {
    const std::string label = tree.label(self);
    skip_blank();
    if (at("/>")) {
      pos_ += 2;
      return;
    }
    if (!at('>')) {
      if (pos_ < text_.size() && is_name_start(text_[pos_])) fail("attributes are not supported");
      fail("malformed start tag of '" + label + "'");
    }
    ++pos_;

    std::string pending;
    bool has_elements = false;
    bool has_text = false;
    auto flush = [&] {
      if (!pending.empty() && !is_blank(pending)) {
        if (has_elements) fail("mixed content in '" + label + "' is not supported");
        has_text = true;
        tree.append_text(self, pending);
      }
      pending.clear();
    };

    for (;;) {
      if (pos_ >= text_.size()) fail("unterminated element '" + label + "'");
      if (at("</")) {
        pos_ += 2;
        std::string closing = name();
        if (closing != label) fail("mismatched end tag '" + closing + "' for '" + label + "'");
        skip_blank();
        if (!at('>')) fail("malformed end tag");
        ++pos_;
        flush();
        return;
      }
      if (at('<')) {
        reject_markup();
        if (!is_blank(pending) || has_text) fail("mixed content in '" + label + "' is not supported");
        pending.clear();
        has_elements = true;
        ++pos_;
        NodeId child = tree.append_element(self, name());
        content(tree, child);
        continue;
      }
      if (at('&')) {
        reference(pending);
        continue;
      }
      pending += text_[pos_++];
    }
  }

  void reference(std::string& out) {
    auto end = text_.find(';', pos_);
    if (end == std::string_view::npos) fail("unterminated character reference");
    std::string_view ref = text_.substr(pos_ + 1, end - pos_ - 1);
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref[1] == 'x';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        int d;
        if (std::isdigit(static_cast<unsigned char>(c))) {
          d = c - '0';
        } else if (hex && std::isxdigit(static_cast<unsigned char>(c))) {
          d = std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
        } else {
          fail("malformed character reference");
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("entity references are not supported ('&" + std::string(ref) + ";')");
    }
    pos_ = end + 1;
  }

  std::string_view text_;
  std::size_t pos_;
};

void escape(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
}

bool single_text_child(const XmlTree& tree, NodeId n) {
  auto kids = tree.children(n);
  return kids.size() == 1 && tree.is_text(kids[0]);
}

void write(const XmlTree& tree, NodeId n, std::size_t depth, bool pretty, std::string& out) {
  auto indent = [&](std::size_t d) {
    if (pretty) out.append(2 * d, ' ');
  };
  indent(depth);
  if (tree.is_text(n)) {
    escape(out, tree.text(n));
    if (pretty) out += '\n';
    return;
  }
  const std::string& label = tree.label(n);
  auto kids = tree.children(n);
  if (kids.empty()) {
    out += '<' + label + "/>";
  } else if (single_text_child(tree, n)) {
    out += '<' + label + '>';
    escape(out, tree.text(kids[0]));
    out += "</" + label + '>';
  } else {
    out += '<' + label + '>';
    if (pretty) out += '\n';
    for (NodeId c : kids) write(tree, c, depth + 1, pretty, out);
    indent(depth);
    out += "</" + label + '>';
  }
  if (pretty) out += '\n';
}

}  // namespace

XmlTree parse_xml(std::string_view text) { return XmlParser(text, 0).document(); }

std::vector<XmlTree> parse_fragments(std::string_view text, std::size_t& pos) {
  XmlParser parser(text, pos);
  auto out = parser.fragments();
  pos = parser.pos();
  return out;
}

std::vector<XmlTree> parse_fragments(std::string_view text) {
  std::size_t pos = 0;
  auto out = parse_fragments(text, pos);
  if (!is_blank(text.substr(pos))) throw ParseError("XML: unexpected content after fragments");
  return out;
}

std::string serialize(const XmlTree& tree) { return serialize(tree, tree.root()); }

std::string serialize(const XmlTree& tree, NodeId from) {
  std::string out;
  write(tree, from, 0, true, out);
  return out;
}

std::string serialize_compact(const XmlTree& tree) {
  std::string out;
  write(tree, tree.root(), 0, false, out);
  return out;
}

std::string node_path(const XmlTree& tree, NodeId n) {
  std::vector<NodeId> chain;
  for (std::optional<NodeId> cur = n; cur; cur = tree.parent(*cur)) chain.push_back(*cur);
  std::string out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    NodeId node = *it;
    std::size_t ordinal = 1;
    if (auto p = tree.parent(node)) {
      for (NodeId sib : tree.children(*p)) {
        if (sib == node) break;
        if (tree.is_text(sib) == tree.is_text(node) && tree.label(sib) == tree.label(node)) ++ordinal;
      }
    }
    out += '/';
    out += tree.is_text(node) ? std::string("text()") : tree.label(node);
    out += '[' + std::to_string(ordinal) + ']';
  }
  return out;
}

}  // namespace secxml
