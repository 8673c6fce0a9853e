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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcbridge/claims.hpp"
#include "vcbridge/clock.hpp"
#include "vcbridge/crypto.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/session_store.hpp"

/// The client-facing OpenID Connect provider: authorization code flow with
/// separate login and consent phases, id_token and access_token minting,
/// never a refresh token.
namespace vcbridge::oidc {

using json = nlohmann::json;

struct ClientConfig {
  std::string client_id;
  std::string client_secret;
  std::vector<std::string> redirect_uris;
};

/// A JSON array of `{client_id, client_secret, redirect_uris}`.
std::vector<ClientConfig> parse_clients(std::string_view text);
std::vector<ClientConfig> load_clients(const std::filesystem::path& path);

enum class SessionStatus { awaiting_login, awaiting_consent, code_issued };

struct AuthorizationSession {
  std::string login_challenge;
  std::string client_id;
  std::string redirect_uri;
  bool redirect_uri_supplied = true;
  std::string state;
  std::optional<std::string> nonce;
  std::vector<std::string> scope;
  std::optional<std::string> subject_did;
  std::optional<std::string> consent_challenge;
  SessionStatus status = SessionStatus::awaiting_login;
  std::int64_t expires_at = 0;

  json to_json() const;
  static AuthorizationSession from_json(const json& j);
};

/// Outcome of the authorization endpoint: a redirect (to the login page, or
/// back to the client carrying an error) or an error page when the client
/// or redirect URI cannot be trusted.
struct AuthorizeResult {
  bool redirect = false;
  std::string location;
  std::string error;
  std::string error_description;
};

struct TokenSet {
  std::string id_token;
  std::string access_token;
  std::string token_type = "bearer";
  std::int64_t expires_in = 0;

  json to_json() const;
};

struct ProviderConfig {
  /// Public base URL; the discovery `issuer`.
  std::string external_url;
  std::int64_t token_lifetime_seconds = 3600;
};

class Provider {
 public:
  Provider(ProviderConfig config, std::vector<ClientConfig> clients, crypto::SigningKey signing_key,
           std::shared_ptr<session::Store> store, Clock clock = system_clock());

  json discovery() const;
  json jwks() const;
  const std::string& key_id() const { return key_id_; }
  const std::string& issuer() const { return config_.external_url; }

  AuthorizeResult authorize(const Params& query);

  /// The pending login for a challenge. Throws Error(unknown_challenge).
  AuthorizationSession login_request(const std::string& login_challenge);
  /// Marks the login as authenticated by `subject_did` and opens the consent
  /// phase. Returns the browser's next hop, the consent URL.
  /// Throws Error(unknown_challenge | wrong_state).
  std::string accept_login(const std::string& login_challenge, const std::string& subject_did);

  /// The pending consent for a challenge. Throws Error(unknown_challenge)
  /// unless the session awaits consent.
  AuthorizationSession consent_request(const std::string& consent_challenge);
  /// Issues a single-use authorization code carrying `tokens` and returns
  /// `<redirect_uri>?code=...&state=...`.
  /// Throws Error(unknown_challenge | wrong_state | path_conflict).
  std::string accept_consent(const std::string& consent_challenge, const claims::TokenPair& tokens);

  /// Token endpoint. `authorization` is the raw Authorization header, if any.
  /// Throws Error(invalid_request | invalid_client | invalid_grant |
  /// unsupported_grant_type).
  TokenSet token(const Params& form, const std::optional<std::string>& authorization);

 private:
  const ClientConfig* find_client(const std::string& client_id) const;
  const ClientConfig& authenticate(const Params& form, const std::optional<std::string>& authorization) const;
  std::optional<AuthorizationSession> load_session(const std::string& login_challenge, bool take);
  void store_session(const AuthorizationSession& session);
  std::string endpoint(std::string_view path) const;

  ProviderConfig config_;
  std::vector<ClientConfig> clients_;
  crypto::SigningKey signing_key_;
  std::string key_id_;
  std::shared_ptr<session::Store> store_;
  Clock clock_;
};

}  // namespace vcbridge::oidc
