// Copyright 2026 The vcbridge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

/// The JSONPath subset used by login policies and presentation definitions:
/// the root `$`, child access in dot (`.name`) or bracket (`['name']`, `[0]`)
/// form, and the wildcard (`.*`, `[*]`). Filters, slices, unions and
/// recursive descent are rejected at parse time.
namespace vcbridge::jsonpath {

using json = nlohmann::json;

struct Segment {
  enum class Kind { name, index, wildcard };
  Kind kind;
  std::string name;       // Kind::name
  std::size_t index = 0;  // Kind::index

  friend bool operator==(const Segment&, const Segment&) = default;
};

class Path {
 public:
  /// Throws Error(schema_error) for anything outside the subset.
  static Path parse(std::string_view text);

  const std::string& text() const { return text_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// No wildcard: the path addresses at most one location.
  bool is_definite() const;
  bool empty() const { return segments_.empty(); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.segments_ == b.segments_;
  }

 private:
  std::string text_;
  std::vector<Segment> segments_;
};

/// One selected location: the value and its ultimate path element (member
/// name, or array index rendered in decimal).
struct Node {
  std::string key;
  const json* value;
};

/// Evaluates `path` against `doc`. Missing members yield an empty selection.
std::vector<Node> select(const json& doc, const Path& path);

}  // namespace vcbridge::jsonpath
