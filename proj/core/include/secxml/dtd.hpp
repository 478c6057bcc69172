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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace secxml {

/// Alphabet symbol standing for a text child (PCDATA) in content models and
/// child words. It cannot collide with an element-type name.
inline constexpr std::string_view kTextSymbol = "#text";

/// Regular expression over element-type names and text.
class ContentModel {
 public:
  enum class Kind { Str, Epsilon, Name, Seq, Alt, Star };

  static ContentModel str();
  static ContentModel epsilon();
  static ContentModel name(std::string type);
  static ContentModel seq(ContentModel first, ContentModel second);
  static ContentModel alt(ContentModel first, ContentModel second);
  static ContentModel star(ContentModel body);

  Kind kind() const noexcept { return kind_; }
  /// Element-type name; only meaningful for Kind::Name.
  const std::string& type_name() const noexcept { return name_; }
  const std::vector<ContentModel>& operands() const noexcept { return operands_; }

  /// Number of constructors in the expression.
  std::size_t size() const;
  bool mentions_text() const;
  void collect_types(std::set<std::string>& out) const;

  /// Renders in the DTD file syntax (`EPSILON`, `STR`, `,`, `|`, `*`).
  std::string to_string() const;

  friend bool operator==(const ContentModel&, const ContentModel&) = default;

 private:
  ContentModel(Kind kind, std::string name, std::vector<ContentModel> operands)
      : kind_(kind), name_(std::move(name)), operands_(std::move(operands)) {}

  Kind kind_;
  std::string name_;
  std::vector<ContentModel> operands_;
};

/// Deterministic automaton recognising the language of one content model.
class ContentAutomaton {
 public:
  explicit ContentAutomaton(const ContentModel& model);

  /// Membership test, linear in the word length.
  bool accepts(std::span<const std::string> word) const;
  std::size_t state_count() const noexcept { return transitions_.size(); }

 private:
  std::vector<std::map<std::string, std::size_t, std::less<>>> transitions_;
  std::vector<bool> accepting_;
};

/// Document type definition: element types, one content model per type and
/// the root type. Immutable once constructed.
class Dtd {
 public:
  /// Productions are kept in the given order. Throws SchemaError when the
  /// root is undeclared, a type is declared twice, or a content model
  /// references an undeclared type.
  Dtd(std::string root, std::vector<std::pair<std::string, ContentModel>> productions);

  const std::string& root() const noexcept { return root_; }
  /// Element types in declaration order.
  const std::vector<std::string>& elements() const noexcept { return order_; }
  bool contains(std::string_view type) const;
  const ContentModel& content_model(std::string_view type) const;

  /// Element types occurring in the content model of `type`, in first
  /// occurrence order.
  const std::vector<std::string>& child_types(std::string_view type) const;

  /// True when the word of child labels belongs to the language of
  /// rg(type). Text children appear as kTextSymbol.
  bool accepts(std::string_view type, std::span<const std::string> word) const;

  bool is_recursive() const noexcept { return recursive_; }

  /// Renders in the DTD file syntax accepted by parse_dtd.
  std::string to_string() const;

 private:
  struct Production {
    ContentModel model;
    ContentAutomaton automaton;
    std::vector<std::string> child_types;
  };

  const Production& production(std::string_view type) const;

  std::string root_;
  std::vector<std::string> order_;
  std::map<std::string, Production, std::less<>> productions_;
  bool recursive_ = false;
};

/// Parses the line-based DTD format:
///
///     root hospital;
///     hospital -> dept*;
///     dname -> STR;
///
/// Content models use `,` `|` `*`, parentheses, `EPSILON` and `STR`. `STR`
/// must be the whole content model (mixed content is not supported). `#`
/// starts a comment running to the end of the line.
Dtd parse_dtd(std::string_view text);

}  // namespace secxml
