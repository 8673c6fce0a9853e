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

#include "vcbridge/claims.hpp"

#include <array>

#include "vcbridge/error.hpp"

namespace vcbridge::claims {
namespace {

using jsonpath::Segment;

constexpr std::array<std::string_view, 7> kReserved{"iss", "sub", "aud", "exp",
                                                    "iat", "nonce", "auth_time"};

[[noreturn]] void conflict(const std::string& what) {
  throw Error(Errc::path_conflict, what);
}

// Writes `value` at a definite, name-only path. With `strict`, any existing
// value is a conflict; otherwise equal values are accepted.
void write_at(json& root, const jsonpath::Path& path, json value, bool strict) {
  const auto& segs = path.segments();
  if (segs.empty()) conflict("cannot write to the token root");
  if (is_reserved(segs.front().name)) {
    conflict("claim targets reserved token member '" + segs.front().name + "'");
  }
  json* cur = &root;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    json& next = (*cur)[segs[i].name];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) conflict("target " + path.text() + " crosses a non-object value");
    cur = &next;
  }
  const std::string& leaf = segs.back().name;
  auto it = cur->find(leaf);
  if (it != cur->end()) {
    if (strict || *it != value) conflict("two claims write to " + path.text());
    return;
  }
  (*cur)[leaf] = std::move(value);
}

void deep_merge(json& into, const json& from, const std::string& where) {
  for (auto it = from.begin(); it != from.end(); ++it) {
    auto existing = into.find(it.key());
    if (existing == into.end()) {
      into[it.key()] = it.value();
    } else if (existing->is_object() && it->is_object()) {
      deep_merge(*existing, *it, where + "." + it.key());
    } else if (*existing != *it) {
      conflict("conflicting values at " + where + "." + it.key());
    }
  }
}

}  // namespace

json TokenPair::to_json() const {
  return {{"id_token", id_token_claims}, {"access_token", access_token_claims}};
}

TokenPair TokenPair::from_json(const json& j) {
  return {j.at("id_token"), j.at("access_token")};
}

bool is_reserved(std::string_view key) {
  for (auto r : kReserved) {
    if (r == key) return true;
  }
  return false;
}

Target resolve_target(const policy::ClaimEntry& entry) {
  if (entry.new_path) return {entry.token, *entry.new_path};
  if (!entry.claim_path.is_definite()) {
    throw Error(Errc::missing_new_path,
                "claimPath " + entry.claim_path.text() +
                    " selects multiple values, a newPath is required");
  }
  const auto& segs = entry.claim_path.segments();
  if (segs.empty()) {
    throw Error(Errc::missing_new_path, "claimPath $ has no last element, a newPath is required");
  }
  const Segment& last = segs.back();
  std::string key = last.kind == Segment::Kind::name ? last.name : std::to_string(last.index);
  return {entry.token, jsonpath::Path::parse("$['" + key + "']")};
}

TokenPair extract_claims(const json& vc_payload, const policy::Pattern& pattern) {
  TokenPair out;
  for (const auto& entry : pattern.claims) {
    Target target = resolve_target(entry);
    auto nodes = jsonpath::select(vc_payload, entry.claim_path);
    if (nodes.empty()) {
      if (entry.required) {
        throw Error(Errc::no_match, "required claim " + entry.claim_path.text() + " is absent");
      }
      continue;
    }
    json value;
    if (entry.claim_path.is_definite()) {
      value = *nodes.front().value;
    } else {
      value = json::object();
      for (const auto& node : nodes) {
        if (value.contains(node.key)) {
          conflict("aggregation key '" + node.key + "' selected twice by " +
                   entry.claim_path.text());
        }
        value[node.key] = *node.value;
      }
    }
    json& token = target.token == policy::TokenTarget::id_token ? out.id_token_claims
                                                               : out.access_token_claims;
    write_at(token, target.path, std::move(value), true);
  }
  return out;
}

TokenPair merge_fragments(std::span<const TokenPair> fragments) {
  TokenPair out;
  for (const auto& f : fragments) {
    deep_merge(out.id_token_claims, f.id_token_claims, "id_token");
    deep_merge(out.access_token_claims, f.access_token_claims, "access_token");
  }
  for (const json* token : {&out.id_token_claims, &out.access_token_claims}) {
    for (auto it = token->begin(); it != token->end(); ++it) {
      if (is_reserved(it.key())) conflict("reserved token member '" + it.key() + "'");
    }
  }
  return out;
}

}  // namespace vcbridge::claims
