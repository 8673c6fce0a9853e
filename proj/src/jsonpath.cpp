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

#include "vcbridge/jsonpath.hpp"

#include <algorithm>
#include <cctype>

#include "vcbridge/error.hpp"

namespace vcbridge::jsonpath {
namespace {

[[noreturn]] void reject(std::string_view text, const std::string& why) {
  throw Error(Errc::schema_error,
              "unsupported JSONPath '" + std::string(text) + "': " + why);
}

bool is_name_char(char c) {
  return !(c == '.' || c == '[' || c == ']' || c == '\'' || c == '"' ||
           c == '*' || c == '?' || c == '(' || c == ')' ||
           std::isspace(static_cast<unsigned char>(c)));
}

}  // namespace

Path Path::parse(std::string_view text) {
  Path p;
  p.text_ = std::string(text);
  if (text.empty() || text.front() != '$') reject(text, "must start at the root $");
  std::size_t i = 1;
  while (i < text.size()) {
    if (text[i] == '.') {
      ++i;
      if (i >= text.size()) reject(text, "trailing dot");
      if (text[i] == '.') reject(text, "recursive descent");
      if (text[i] == '*') {
        p.segments_.push_back({Segment::Kind::wildcard, {}, 0});
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < text.size() && is_name_char(text[i])) ++i;
      if (i == start) reject(text, "empty member name");
      p.segments_.push_back(
          {Segment::Kind::name, std::string(text.substr(start, i - start)), 0});
    } else if (text[i] == '[') {
      ++i;
      if (i >= text.size()) reject(text, "unterminated bracket");
      char c = text[i];
      if (c == '*') {
        ++i;
        p.segments_.push_back({Segment::Kind::wildcard, {}, 0});
      } else if (c == '\'' || c == '"') {
        char quote = c;
        ++i;
        std::string name;
        while (i < text.size() && text[i] != quote) {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          name.push_back(text[i++]);
        }
        if (i >= text.size()) reject(text, "unterminated string");
        ++i;
        p.segments_.push_back({Segment::Kind::name, std::move(name), 0});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        auto digits = text.substr(start, i - start);
        if (digits.size() > 9) reject(text, "index too large");
        p.segments_.push_back(
            {Segment::Kind::index, {}, std::stoul(std::string(digits))});
      } else if (c == '?') {
        reject(text, "filter expressions");
      } else {
        reject(text, "unsupported bracket expression");
      }
      if (i >= text.size() || text[i] != ']') {
        reject(text, i < text.size() && (text[i] == ':' || text[i] == ',')
                         ? "slices and unions"
                         : "expected ]");
      }
      ++i;
    } else {
      reject(text, "unexpected character");
    }
  }
  return p;
}

bool Path::is_definite() const {
  return std::none_of(segments_.begin(), segments_.end(), [](const Segment& s) {
    return s.kind == Segment::Kind::wildcard;
  });
}

std::vector<Node> select(const json& doc, const Path& path) {
  std::vector<Node> current{{"$", &doc}};
  for (const auto& seg : path.segments()) {
    std::vector<Node> next;
    for (const auto& node : current) {
      const json& v = *node.value;
      switch (seg.kind) {
        case Segment::Kind::name:
          if (v.is_object()) {
            auto it = v.find(seg.name);
            if (it != v.end()) next.push_back({seg.name, &*it});
          }
          break;
        case Segment::Kind::index:
          if (v.is_array() && seg.index < v.size()) {
            next.push_back({std::to_string(seg.index), &v[seg.index]});
          }
          break;
        case Segment::Kind::wildcard:
          if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) {
              next.push_back({it.key(), &it.value()});
            }
          } else if (v.is_array()) {
            for (std::size_t k = 0; k < v.size(); ++k) {
              next.push_back({std::to_string(k), &v[k]});
            }
          }
          break;
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace vcbridge::jsonpath
