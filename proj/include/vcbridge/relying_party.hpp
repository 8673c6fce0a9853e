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

#include "vcbridge/clock.hpp"
#include "vcbridge/crypto.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/oidc_provider.hpp"
#include "vcbridge/policy.hpp"
#include "vcbridge/session_store.hpp"
#include "vcbridge/vc_verifier.hpp"

namespace vcbridge::rp {

using json = nlohmann::json;

inline constexpr std::size_t kMaxInvocationUriLength = 400;
inline constexpr std::string_view kSelfIssuedAudience = "https://self-issued.me/v2";

struct RelyingPartyConfig {
  std::string external_url;
  /// The bridge's DID key; its did:key is the OID4VP client_id.
  crypto::SigningKey did_key;
  policy::LoginPolicy policy;
  std::optional<json> descriptor_override;
  std::int64_t request_lifetime_seconds = 300;
};

struct Invocation {
  std::string login_id;
  std::string uri;
};

struct Submission {
  std::string holder_did;
  std::string login_challenge;
  claims::TokenPair tokens;
};

class RelyingParty {
 public:
  RelyingParty(RelyingPartyConfig config, std::shared_ptr<oidc::Provider> provider,
               std::shared_ptr<vc::Verifier> verifier, std::shared_ptr<session::Store> store,
               Clock clock = system_clock());

  const std::string& client_did() const { return client_did_; }

  /// Mints a login_id for a pending login and the `openid-vc://` URI the
  /// wallet scans. Throws Error(unknown_challenge).
  Invocation begin_login(const std::string& login_challenge);
  std::string invocation_uri(const std::string& login_id) const;

  /// The signed request object for a login_id. Throws Error(unknown_login_id).
  std::string presentation_request(const std::string& login_id);

  /// Processes a direct_post form. The login_id is consumed whether or not
  /// the submission is accepted.
  Submission submit_presentation(const Params& form);

  /// The browser's next hop once the wallet lane has finished; consumed on
  /// the first successful poll.
  std::optional<std::string> poll_redirect(const std::string& login_challenge);

  /// Throws Error(unknown_challenge | missing_claims).
  std::string complete_consent(const std::string& consent_challenge);

 private:
  RelyingPartyConfig config_;
  std::string client_did_;
  std::string client_kid_;
  std::shared_ptr<oidc::Provider> provider_;
  std::shared_ptr<vc::Verifier> verifier_;
  std::shared_ptr<session::Store> store_;
  Clock clock_;
};

}  // namespace vcbridge::rp
