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
#include <string>
#include <vector>

#include "vcbridge/crypto.hpp"

/// JWT encoding of W3C credentials and presentations (issuer and holder
/// side). Verification lives in vc_verifier.hpp.
namespace vcbridge::vc {

using json = nlohmann::json;

struct CredentialSpec {
  std::string issuer_did;
  /// Verification method id placed in the JWS `kid`.
  std::string key_id;
  std::string subject_did;
  /// Members of credentialSubject besides `id`.
  json subject_claims = json::object();
  std::vector<std::string> types{"VerifiableCredential"};
  std::int64_t issued_at = 0;
  std::optional<std::int64_t> expires_at;
  /// A full `credentialStatus` member, see status::make_entry.
  std::optional<json> credential_status;
  /// Overrides the generated `vc` object entirely (status list credentials).
  std::optional<json> vc_override;
};

/// Signs a VC-JWT: `iss`, `sub`, `nbf`, `exp`, `jti` and the `vc` object.
std::string issue_credential(const CredentialSpec& spec, const crypto::SigningKey& key);

struct PresentationSpec {
  std::string holder_did;
  std::string key_id;
  std::vector<std::string> credentials;  // VC-JWT envelopes
  std::string audience;
  std::string nonce;
  std::int64_t issued_at = 0;
  std::int64_t lifetime_seconds = 300;
};

/// Signs a VP-JWT carrying `nonce`, `aud` and the `vp` object.
std::string sign_presentation(const PresentationSpec& spec, const crypto::SigningKey& key);

/// RFC 3339 UTC rendering of a Unix time, e.g. 2024-01-01T00:00:00Z.
std::string format_time(std::int64_t unix_seconds);
/// Parses RFC 3339 date-times with optional fraction and offset.
std::optional<std::int64_t> parse_time(std::string_view text);

}  // namespace vcbridge::vc
