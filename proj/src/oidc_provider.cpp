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

#include "vcbridge/oidc_provider.hpp"

#include <openssl/crypto.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"

namespace vcbridge::oidc {
namespace {

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::awaiting_login: return "awaiting_login";
    case SessionStatus::awaiting_consent: return "awaiting_consent";
    case SessionStatus::code_issued: return "code_issued";
  }
  return "";
}

SessionStatus status_from(const std::string& s) {
  if (s == "awaiting_login") return SessionStatus::awaiting_login;
  if (s == "awaiting_consent") return SessionStatus::awaiting_consent;
  if (s == "code_issued") return SessionStatus::code_issued;
  throw Error(Errc::storage_failure, "corrupt session status " + s);
}

std::string append_query(const std::string& uri, const Params& params) {
  return uri + (uri.find('?') == std::string::npos ? "?" : "&") + encode_form(params);
}

bool secret_equal(const std::string& a, const std::string& b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::vector<std::string> split_scope(const std::string& scope) {
  std::vector<std::string> out;
  std::istringstream in(scope);
  for (std::string s; in >> s;) out.push_back(s);
  return out;
}

}  // namespace

std::vector<ClientConfig> parse_clients(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::syntax_error, "client configuration is not valid JSON");
  if (!doc.is_array()) throw Error(Errc::schema_error, "client configuration must be an array");
  std::vector<ClientConfig> out;
  for (const auto& c : doc) {
    if (!c.is_object() || !c.contains("client_id") || !c.at("client_id").is_string() ||
        !c.contains("client_secret") || !c.at("client_secret").is_string() ||
        !c.contains("redirect_uris") || !c.at("redirect_uris").is_array()) {
      throw Error(Errc::schema_error,
                  "each client needs client_id, client_secret and redirect_uris");
    }
    ClientConfig cfg{c.at("client_id").get<std::string>(), c.at("client_secret").get<std::string>(), {}};
    for (const auto& uri : c.at("redirect_uris")) {
      if (!uri.is_string() || uri.get<std::string>().find("://") == std::string::npos) {
        throw Error(Errc::schema_error, "redirect URIs must be absolute: client " + cfg.client_id);
      }
      cfg.redirect_uris.push_back(uri.get<std::string>());
    }
    for (const auto& existing : out) {
      if (existing.client_id == cfg.client_id) {
        throw Error(Errc::schema_error, "duplicate client_id " + cfg.client_id);
      }
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

std::vector<ClientConfig> load_clients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::syntax_error, "cannot read client configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_clients(ss.str());
}

json AuthorizationSession::to_json() const {
  json j{{"login_challenge", login_challenge},
         {"client_id", client_id},
         {"redirect_uri", redirect_uri},
         {"redirect_uri_supplied", redirect_uri_supplied},
         {"state", state},
         {"scope", scope},
         {"status", oidc::to_string(status)},
         {"expires_at", expires_at}};
  if (nonce) j["nonce"] = *nonce;
  if (subject_did) j["subject_did"] = *subject_did;
  if (consent_challenge) j["consent_challenge"] = *consent_challenge;
  return j;
}

AuthorizationSession AuthorizationSession::from_json(const json& j) {
  AuthorizationSession s;
  s.login_challenge = j.at("login_challenge").get<std::string>();
  s.client_id = j.at("client_id").get<std::string>();
  s.redirect_uri = j.at("redirect_uri").get<std::string>();
  s.redirect_uri_supplied = j.at("redirect_uri_supplied").get<bool>();
  s.state = j.at("state").get<std::string>();
  s.scope = j.at("scope").get<std::vector<std::string>>();
  s.status = status_from(j.at("status").get<std::string>());
  s.expires_at = j.at("expires_at").get<std::int64_t>();
  if (j.contains("nonce")) s.nonce = j.at("nonce").get<std::string>();
  if (j.contains("subject_did")) s.subject_did = j.at("subject_did").get<std::string>();
  if (j.contains("consent_challenge")) s.consent_challenge = j.at("consent_challenge").get<std::string>();
  return s;
}

json TokenSet::to_json() const {
  return {{"id_token", id_token},
          {"access_token", access_token},
          {"token_type", token_type},
          {"expires_in", expires_in}};
}

Provider::Provider(ProviderConfig config, std::vector<ClientConfig> clients,
                   crypto::SigningKey signing_key, std::shared_ptr<session::Store> store, Clock clock)
    : config_(std::move(config)),
      clients_(std::move(clients)),
      signing_key_(std::move(signing_key)),
      key_id_(signing_key_.public_key().thumbprint()),
      store_(std::move(store)),
      clock_(std::move(clock)) {
  while (config_.external_url.size() > 1 && config_.external_url.back() == '/') {
    config_.external_url.pop_back();
  }
}

std::string Provider::endpoint(std::string_view path) const {
  return config_.external_url + std::string(path);
}

json Provider::discovery() const {
  return {{"issuer", config_.external_url},
          {"authorization_endpoint", endpoint("/authorize")},
          {"token_endpoint", endpoint("/token")},
          {"jwks_uri", endpoint("/jwks")},
          {"response_types_supported", {"code"}},
          {"response_modes_supported", {"query"}},
          {"grant_types_supported", {"authorization_code"}},
          {"subject_types_supported", {"public"}},
          {"scopes_supported", {"openid"}},
          {"id_token_signing_alg_values_supported", {crypto::jws_alg(signing_key_.type())}},
          {"token_endpoint_auth_methods_supported", {"client_secret_basic", "client_secret_post"}},
          {"claims_parameter_supported", false},
          {"request_parameter_supported", false}};
}

json Provider::jwks() const {
  json key = signing_key_.public_key().to_jwk();
  key["kid"] = key_id_;
  key["use"] = "sig";
  key["alg"] = crypto::jws_alg(signing_key_.type());
  return {{"keys", {key}}};
}

const ClientConfig* Provider::find_client(const std::string& client_id) const {
  auto it = std::find_if(clients_.begin(), clients_.end(),
                         [&](const ClientConfig& c) { return c.client_id == client_id; });
  return it == clients_.end() ? nullptr : &*it;
}

AuthorizeResult Provider::authorize(const Params& query) {
  const ClientConfig* client = find_client(param(query, "client_id"));
  if (client == nullptr) {
    return {false, {}, "invalid_request", "unknown client_id"};
  }
  std::string redirect_uri = param(query, "redirect_uri");
  bool supplied = !redirect_uri.empty();
  if (!supplied) {
    if (client->redirect_uris.size() != 1) {
      return {false, {}, "invalid_request", "redirect_uri is required"};
    }
    redirect_uri = client->redirect_uris.front();
  } else if (std::find(client->redirect_uris.begin(), client->redirect_uris.end(), redirect_uri) ==
             client->redirect_uris.end()) {
    return {false, {}, "invalid_request", "redirect_uri is not registered for this client"};
  }

  const std::string state = param(query, "state");
  auto error_redirect = [&](std::string error, std::string description) {
    Params p{{"error", error}, {"error_description", description}};
    if (!state.empty()) p.emplace("state", state);
    return AuthorizeResult{true, append_query(redirect_uri, p), std::move(error),
                           std::move(description)};
  };

  const std::string response_type = param(query, "response_type");
  if (response_type.empty()) return error_redirect("invalid_request", "response_type is required");
  if (response_type != "code") {
    return error_redirect("unsupported_response_type", "only the code flow is supported");
  }
  auto scopes = split_scope(param(query, "scope"));
  if (std::find(scopes.begin(), scopes.end(), "openid") == scopes.end()) {
    return error_redirect("invalid_scope", "the openid scope is required");
  }

  AuthorizationSession session;
  session.login_challenge = crypto::random_token(32);
  session.client_id = client->client_id;
  session.redirect_uri = redirect_uri;
  session.redirect_uri_supplied = supplied;
  session.state = state;
  if (query.count("nonce")) session.nonce = param(query, "nonce");
  // Further scopes are accepted and ignored: claims come from the login policy.
  session.scope = {"openid"};
  session.expires_at = clock_() + session::kDefaultTtlSeconds;
  store_session(session);
  return {true, endpoint("/login?login_challenge=" + url_encode(session.login_challenge)), {}, {}};
}

std::optional<AuthorizationSession> Provider::load_session(const std::string& login_challenge,
                                                           bool take) {
  auto value = take ? store_->take(session::Namespace::login_session, login_challenge)
                    : store_->get(session::Namespace::login_session, login_challenge);
  if (!value) return std::nullopt;
  auto session = AuthorizationSession::from_json(*value);
  if (clock_() >= session.expires_at) return std::nullopt;
  return session;
}

void Provider::store_session(const AuthorizationSession& session) {
  auto remaining = session.expires_at - clock_();
  if (remaining <= 0) return;
  store_->put(session::Namespace::login_session, session.login_challenge, session.to_json(), remaining);
}

AuthorizationSession Provider::login_request(const std::string& login_challenge) {
  auto session = load_session(login_challenge, false);
  if (!session || session->status != SessionStatus::awaiting_login) {
    throw Error(Errc::unknown_challenge, "no pending login for this challenge");
  }
  return *session;
}

std::string Provider::accept_login(const std::string& login_challenge, const std::string& subject_did) {
  auto session = load_session(login_challenge, true);
  if (!session) throw Error(Errc::unknown_challenge, "unknown or expired login challenge");
  if (session->status != SessionStatus::awaiting_login) {
    store_session(*session);
    throw Error(Errc::wrong_state, "login was already accepted");
  }
  session->subject_did = subject_did;
  session->consent_challenge = crypto::random_token(32);
  session->status = SessionStatus::awaiting_consent;
  store_->put(session::Namespace::consent_session, *session->consent_challenge, login_challenge,
              std::max<std::int64_t>(1, session->expires_at - clock_()));
  store_session(*session);
  return endpoint("/consent?consent_challenge=" + url_encode(*session->consent_challenge));
}

AuthorizationSession Provider::consent_request(const std::string& consent_challenge) {
  auto login_challenge = store_->get(session::Namespace::consent_session, consent_challenge);
  if (!login_challenge) throw Error(Errc::unknown_challenge, "unknown or expired consent challenge");
  auto session = load_session(login_challenge->get<std::string>(), false);
  if (!session || session->status != SessionStatus::awaiting_consent ||
      session->consent_challenge != consent_challenge) {
    throw Error(Errc::unknown_challenge, "no pending consent for this challenge");
  }
  return *session;
}

std::string Provider::accept_consent(const std::string& consent_challenge,
                                     const claims::TokenPair& tokens) {
  auto login_challenge = store_->get(session::Namespace::consent_session, consent_challenge);
  if (!login_challenge) throw Error(Errc::unknown_challenge, "unknown or expired consent challenge");
  auto session = load_session(login_challenge->get<std::string>(), true);
  if (!session) throw Error(Errc::unknown_challenge, "authorization session expired");
  if (session->status != SessionStatus::awaiting_consent ||
      session->consent_challenge != consent_challenge) {
    store_session(*session);
    throw Error(Errc::wrong_state, "consent was already given");
  }
  for (const json* token : {&tokens.id_token_claims, &tokens.access_token_claims}) {
    for (auto it = token->begin(); it != token->end(); ++it) {
      if (claims::is_reserved(it.key())) {
        store_session(*session);
        throw Error(Errc::path_conflict, "token claims may not set '" + it.key() + "'");
      }
    }
  }

  const std::string code = crypto::random_token(32);
  json grant{{"client_id", session->client_id},
             {"redirect_uri", session->redirect_uri},
             {"redirect_uri_supplied", session->redirect_uri_supplied},
             {"subject", *session->subject_did},
             {"claims", tokens.to_json()}};
  if (session->nonce) grant["nonce"] = *session->nonce;
  store_->put(session::Namespace::auth_code, code, grant, session::kAuthCodeTtlSeconds);

  session->status = SessionStatus::code_issued;
  store_session(*session);

  Params p{{"code", code}};
  if (!session->state.empty()) p.emplace("state", session->state);
  return append_query(session->redirect_uri, p);
}

const ClientConfig& Provider::authenticate(const Params& form,
                                           const std::optional<std::string>& authorization) const {
  std::string id, secret;
  const bool basic = authorization && authorization->starts_with("Basic ");
  if (basic) {
    if (form.count("client_secret")) {
      throw Error(Errc::invalid_request, "multiple client authentication methods");
    }
    std::string decoded;
    try {
      decoded = vcbridge::to_string(base64_decode(authorization->substr(6)));
    } catch (const Error&) {
      throw Error(Errc::invalid_client, "malformed Basic credentials");
    }
    auto colon = decoded.find(':');
    if (colon == std::string::npos) throw Error(Errc::invalid_client, "malformed Basic credentials");
    id = url_decode(decoded.substr(0, colon), true);
    secret = url_decode(decoded.substr(colon + 1), true);
  } else {
    id = param(form, "client_id");
    secret = param(form, "client_secret");
  }
  const ClientConfig* client = find_client(id);
  if (client == nullptr || !secret_equal(client->client_secret, secret)) {
    throw Error(Errc::invalid_client, "client authentication failed");
  }
  return *client;
}

TokenSet Provider::token(const Params& form, const std::optional<std::string>& authorization) {
  const ClientConfig& client = authenticate(form, authorization);
  if (param(form, "grant_type") != "authorization_code") {
    throw Error(Errc::unsupported_grant_type, "only authorization_code is supported");
  }
  const std::string code = param(form, "code");
  if (code.empty()) throw Error(Errc::invalid_request, "code is required");
  auto grant = store_->take(session::Namespace::auth_code, code);
  if (!grant) throw Error(Errc::invalid_grant, "authorization code is invalid, expired or used");
  if ((*grant)["client_id"] != client.client_id) {
    throw Error(Errc::invalid_grant, "code was issued to another client");
  }
  const std::string redirect_uri = param(form, "redirect_uri");
  const bool required = (*grant)["redirect_uri_supplied"].get<bool>();
  if ((required || !redirect_uri.empty()) && (*grant)["redirect_uri"] != redirect_uri) {
    throw Error(Errc::invalid_grant, "redirect_uri does not match the authorization request");
  }

  auto pair = claims::TokenPair::from_json((*grant)["claims"]);
  const auto now = clock_();
  const auto exp = now + config_.token_lifetime_seconds;
  const std::string subject = (*grant)["subject"].get<std::string>();

  json id_claims = pair.id_token_claims;
  id_claims["iss"] = config_.external_url;
  id_claims["sub"] = subject;
  id_claims["aud"] = client.client_id;
  id_claims["iat"] = now;
  id_claims["exp"] = exp;
  if (grant->contains("nonce")) id_claims["nonce"] = (*grant)["nonce"];

  json access_claims = pair.access_token_claims;
  access_claims["iss"] = config_.external_url;
  access_claims["sub"] = subject;
  access_claims["aud"] = client.client_id;
  access_claims["iat"] = now;
  access_claims["exp"] = exp;

  TokenSet out;
  out.id_token = jws::sign({{"typ", "JWT"}, {"kid", key_id_}}, id_claims, signing_key_);
  out.access_token = jws::sign({{"typ", "at+jwt"}, {"kid", key_id_}}, access_claims, signing_key_);
  out.expires_in = config_.token_lifetime_seconds;
  return out;
}

}  // namespace vcbridge::oidc
