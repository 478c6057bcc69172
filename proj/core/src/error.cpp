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

#include "secxml/error.hpp"

#include <string>

namespace secxml {

namespace {

std::string with_position(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  return what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

}  // namespace secxml
