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

#include "vcbridge/error.hpp"

namespace vcbridge {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::schema_error: return "SchemaError";
    case Errc::no_match: return "NoMatch";
    case Errc::duplicate_credential: return "DuplicateCredential";
    case Errc::missing_new_path: return "MissingNewPath";
    case Errc::path_conflict: return "PathConflict";
    case Errc::unsupported_method: return "UnsupportedMethod";
    case Errc::resolution_failure: return "ResolutionFailure";
    case Errc::malformed_did: return "MalformedDid";
    case Errc::malformed_jws: return "MalformedJws";
    case Errc::bad_signature: return "BadSignature";
    case Errc::challenge_mismatch: return "ChallengeMismatch";
    case Errc::audience_mismatch: return "AudienceMismatch";
    case Errc::holder_binding_violation: return "HolderBindingViolation";
    case Errc::nested_vc_error: return "NestedVcError";
    case Errc::expired: return "Expired";
    case Errc::not_yet_valid: return "NotYetValid";
    case Errc::malformed_credential: return "MalformedCredential";
    case Errc::fetch_failure: return "FetchFailure";
    case Errc::bad_status_list_signature: return "BadStatusListSignature";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::revoked: return "Revoked";
    case Errc::storage_failure: return "StorageFailure";
    case Errc::absent: return "Absent";
    case Errc::unknown_challenge: return "UnknownChallenge";
    case Errc::wrong_state: return "WrongState";
    case Errc::unknown_login_id: return "UnknownLoginId";
    case Errc::missing_claims: return "MissingClaims";
    case Errc::invalid_request: return "invalid_request";
    case Errc::unsupported_response_type: return "unsupported_response_type";
    case Errc::invalid_scope: return "invalid_scope";
    case Errc::invalid_grant: return "invalid_grant";
    case Errc::invalid_client: return "invalid_client";
    case Errc::unsupported_grant_type: return "unsupported_grant_type";
    case Errc::malformed_uri: return "MalformedUri";
    case Errc::no_suitable_credential: return "NoSuitableCredential";
    case Errc::protocol_error: return "ProtocolError";
  }
  return "Unknown";
}

}  // namespace vcbridge
