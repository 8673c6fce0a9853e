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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vcbridge/encoding.hpp"

/// StatusList2021 bitstrings: bit k (most significant bit of byte 0 first)
/// set means the credential with index k is revoked.
namespace vcbridge::status {

using json = nlohmann::json;

enum class Status { active, revoked };

std::string_view to_string(Status s);

struct StatusListReference {
  std::string status_list_credential_url;
  std::uint64_t status_list_index = 0;
  std::string purpose = "revocation";
};

/// Reads a StatusList2021Entry from a decoded credential's
/// `credentialStatus`. Returns nullopt when the credential has none.
/// Throws Error(malformed_credential) for entries that cannot be honoured.
std::optional<StatusListReference> reference_from(const json& vc_payload);

/// Status entry member for an issued credential.
json make_entry(const std::string& list_url, std::uint64_t index);

/// GZIP-compresses and base64url-encodes a bitstring.
std::string encode_list(std::span<const std::uint8_t> bitstring);
/// Reverses encode_list. Throws Error(malformed_credential).
Bytes decode_list(std::string_view encoded);

bool bit_at(std::span<const std::uint8_t> bitstring, std::uint64_t index);
void set_bit(std::span<std::uint8_t> bitstring, std::uint64_t index);

/// Unsigned VC payload of a status list credential.
json make_list_credential(const std::string& issuer, const std::string& list_url,
                          const std::string& encoded_list);

}  // namespace vcbridge::status
