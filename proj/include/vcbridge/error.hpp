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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcbridge {

/// Every failure the bridge can report. The names double as the wire-level
/// rejection codes returned by the HTTP endpoints.
enum class Errc {
  // configuration and input parsing
  syntax_error,
  schema_error,
  // policy compliance and claim processing
  no_match,
  duplicate_credential,
  missing_new_path,
  path_conflict,
  // DID resolution and credential verification
  unsupported_method,
  resolution_failure,
  malformed_did,
  malformed_jws,
  bad_signature,
  challenge_mismatch,
  audience_mismatch,
  holder_binding_violation,
  nested_vc_error,
  expired,
  not_yet_valid,
  malformed_credential,
  fetch_failure,
  bad_status_list_signature,
  index_out_of_range,
  revoked,
  // session state
  storage_failure,
  absent,
  unknown_challenge,
  wrong_state,
  unknown_login_id,
  missing_claims,
  // OAuth 2.0 / OIDC protocol errors
  invalid_request,
  unsupported_response_type,
  invalid_scope,
  invalid_grant,
  invalid_client,
  unsupported_grant_type,
  // holder-side tooling
  malformed_uri,
  no_suitable_credential,
  protocol_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  /// Wraps a failure raised while processing a nested object, e.g. a VC
  /// inside a VP. `cause()` keeps the inner code.
  Error(Errc code, Errc cause, const std::string& message)
      : std::runtime_error(message), code_(code), cause_(cause) {}

  Errc code() const noexcept { return code_; }
  std::optional<Errc> cause() const noexcept { return cause_; }

 private:
  Errc code_;
  std::optional<Errc> cause_;
};

}  // namespace vcbridge
