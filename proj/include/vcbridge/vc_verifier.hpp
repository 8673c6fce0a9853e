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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcbridge/clock.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/http_fetch.hpp"
#include "vcbridge/status_list.hpp"

namespace vcbridge::vc {

using json = nlohmann::json;

struct VerifiedPresentation {
  std::string holder_did;
  /// Decoded `vc` objects, with `issuer` and `credentialSubject.id` filled
  /// in from the JWT claims where the object omits them.
  std::vector<json> credentials;
  std::string challenge;
  std::string audience;
};

/// Signature, binding, validity-window and revocation checks for JWT
/// encoded credentials and presentations.
class Verifier {
 public:
  Verifier(std::shared_ptr<did::Resolver> resolver, std::shared_ptr<http::Fetcher> fetcher,
           Clock clock = system_clock());

  /// Verifies a VC-JWT against its issuer's key and the validity window
  /// (with clock skew leeway). Returns the decoded credential.
  /// Throws Error(bad_signature | expired | not_yet_valid |
  /// malformed_credential | malformed_jws | resolution_failure |
  /// unsupported_method).
  json verify_vc(std::string_view envelope) const;
  json verify_vc(std::string_view envelope, std::int64_t now) const;

  /// Verifies a VP-JWT: holder signature, nonce, audience, each embedded
  /// credential, and that every credential subject is the holder.
  /// Throws Error(bad_signature | challenge_mismatch | audience_mismatch |
  /// nested_vc_error | holder_binding_violation | expired | ...).
  VerifiedPresentation verify_vp(std::string_view envelope, std::string_view expected_challenge,
                                 std::string_view expected_audience) const;

  /// Fetches and verifies the status list credential, then tests the bit.
  /// When `expected_issuer` is given the list must be signed by it.
  /// Throws Error(fetch_failure | bad_status_list_signature |
  /// index_out_of_range).
  status::Status check_status(const status::StatusListReference& ref,
                              std::optional<std::string_view> expected_issuer = std::nullopt) const;

 private:
  std::shared_ptr<did::Resolver> resolver_;
  std::shared_ptr<http::Fetcher> fetcher_;
  Clock clock_;
};

}  // namespace vcbridge::vc
