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
#include <stdexcept>
#include <string>

namespace secxml {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; zero means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An XPath expression uses constructs above the permitted fragment.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// Schema-level mistakes: unknown element types, duplicate declarations.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Update-time failure mandated by the update semantics (no parent, several
/// target nodes for a single-target operation, unknown node).
class DynamicError : public Error {
 public:
  using Error::Error;
};

/// A construct the query rewriter refuses to translate.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace secxml
