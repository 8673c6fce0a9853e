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

#include <string>
#include <string_view>

#include "vcbridge/crypto.hpp"

/// Compact JWS (RFC 7515) with the EdDSA and ES256 algorithms.
namespace vcbridge::jws {

using json = nlohmann::json;

/// A compact JWS split into its parts. The payload is kept as raw bytes so a
/// signature check can run before anything interprets it.
struct CompactJws {
  json header;
  Bytes payload;
  Bytes signature;
  std::string signing_input;  // "<b64 header>.<b64 payload>"

  /// Parses the payload as JSON. Throws Error(malformed_jws) on failure.
  json payload_json() const;
};

/// Splits and decodes `compact`. Throws Error(malformed_jws) when the text is
/// not three base64url segments or the header is not a JSON object.
CompactJws parse(std::string_view compact);

/// Signs `payload` with `key`; `header` gets `alg` filled in.
std::string sign(json header, const json& payload, const crypto::SigningKey& key);

/// True iff the header `alg` matches the key type and the signature verifies.
bool verify(const CompactJws& jws, const crypto::PublicKey& key);

}  // namespace vcbridge::jws
