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

#include <span>
#include <string_view>

#include "vcbridge/jsonpath.hpp"
#include "vcbridge/policy.hpp"

/// Turns the claims of matched credentials into id_token / access_token
/// payload fragments.
namespace vcbridge::claims {

using json = nlohmann::json;

struct TokenPair {
  json id_token_claims = json::object();
  json access_token_claims = json::object();

  json to_json() const;
  static TokenPair from_json(const json& j);

  friend bool operator==(const TokenPair&, const TokenPair&) = default;
};

/// Top-level keys owned by the provider. Claims may never write them.
bool is_reserved(std::string_view key);

struct Target {
  policy::TokenTarget token;
  jsonpath::Path path;
};

/// Where a claim ends up: its newPath, else `$.<last element of claimPath>`.
/// Throws Error(missing_new_path) for a wildcard claimPath without newPath.
Target resolve_target(const policy::ClaimEntry& entry);

/// Copies every claim of `pattern` found in `vc_payload` to its target.
/// Wildcard selections are aggregated into one object keyed by each node's
/// last path element. Throws Error(path_conflict) when two entries collide,
/// a reserved key is targeted or aggregation keys tie.
TokenPair extract_claims(const json& vc_payload, const policy::Pattern& pattern);

/// Deep-merges fragments per token. Equal values merge idempotently;
/// differing values throw Error(path_conflict).
TokenPair merge_fragments(std::span<const TokenPair> fragments);

}  // namespace vcbridge::claims
