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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcbridge/jsonpath.hpp"

/// The login policy: which credentials to ask for, which issuers to trust
/// for each, which claims must be present and where they end up.
namespace vcbridge::policy {

using json = nlohmann::json;

enum class TokenTarget { id_token, access_token };

std::string_view to_string(TokenTarget t);

struct ClaimEntry {
  jsonpath::Path claim_path;
  std::optional<jsonpath::Path> new_path;
  TokenTarget token = TokenTarget::access_token;
  bool required = true;

  friend bool operator==(const ClaimEntry&, const ClaimEntry&) = default;
};

struct Pattern {
  std::string issuer;
  std::vector<ClaimEntry> claims;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct ExpectedCredential {
  std::string credential_id;
  std::vector<Pattern> patterns;

  friend bool operator==(const ExpectedCredential&, const ExpectedCredential&) = default;
};

struct LoginPolicy {
  std::vector<ExpectedCredential> expected_credentials;

  friend bool operator==(const LoginPolicy&, const LoginPolicy&) = default;
};

/// Parses and validates a policy document. Unknown members are rejected and
/// defaults (token=access_token, required=true) are filled in.
/// Throws Error(syntax_error) for malformed JSON, Error(schema_error) for
/// structural problems.
LoginPolicy parse_policy(std::string_view text);
LoginPolicy load_policy(const std::filesystem::path& path);

/// Serializes with all defaults written out; parse_policy accepts the result.
json to_json(const LoginPolicy& policy);

/// The issuer DID of a decoded credential: `issuer` as a string, or its
/// `id` member when it is an object. Empty when neither is present.
std::string issuer_of(const json& vc_payload);

/// True iff the issuer matches and every required claim path selects at
/// least one value.
bool evaluate_pattern(const json& vc_payload, const Pattern& pattern);

struct MatchedCredential {
  std::string credential_id;
  std::size_t credential_index;  // position within the presentation
  std::size_t pattern_index;     // lowest matching pattern
};

/// A complete assignment of presented credentials to expected credentials,
/// listed in policy order.
struct PolicyMatch {
  std::vector<MatchedCredential> assignment;

  const MatchedCredential* find(std::string_view credential_id) const;
};

/// Finds the bijection between `vc_payloads` and the expected credentials.
/// Among all complete assignments, the one giving earlier expected
/// credentials the lowest-index credentials wins.
/// Throws Error(no_match) when none exists (including count mismatch) and
/// Error(duplicate_credential) when the same payload appears twice.
PolicyMatch match_credentials(std::span<const json> vc_payloads,
                              const LoginPolicy& policy);

}  // namespace vcbridge::policy
