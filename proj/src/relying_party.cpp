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

#include "vcbridge/relying_party.hpp"

#include <vector>

#include "vcbridge/claims.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"
#include "vcbridge/pex.hpp"
#include "vcbridge/status_list.hpp"

namespace vcbridge::rp {
namespace {

std::string trim_slash(std::string url) {
  while (url.size() > 1 && url.back() == '/') url.pop_back();
  return url;
}

// vp_token is normally a compact JWS; a JSON string or one-element array is
// tolerated as well.
std::string vp_envelope(const std::string& vp_token) {
  if (vp_token.empty()) throw Error(Errc::malformed_jws, "vp_token is missing");
  if (vp_token.front() != '"' && vp_token.front() != '[') return vp_token;
  json j = json::parse(vp_token, nullptr, false);
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array() && j.size() == 1 && j[0].is_string()) return j[0].get<std::string>();
  throw Error(Errc::malformed_jws, "vp_token must hold a single presentation");
}

// Correlation key when the wallet omits `state`: the unverified nonce. The
// signature is checked against this value afterwards anyway.
std::string unverified_nonce(const std::string& envelope) {
  try {
    auto payload = jws::parse(envelope).payload_json();
    if (payload.contains("nonce") && payload["nonce"].is_string()) {
      return payload["nonce"].get<std::string>();
    }
  } catch (const Error&) {
  }
  return {};
}

}  // namespace

RelyingParty::RelyingParty(RelyingPartyConfig config, std::shared_ptr<oidc::Provider> provider,
                           std::shared_ptr<vc::Verifier> verifier,
                           std::shared_ptr<session::Store> store, Clock clock)
    : config_(std::move(config)),
      client_did_(did::did_key(config_.did_key.public_key())),
      client_kid_(did::did_key_id(config_.did_key.public_key())),
      provider_(std::move(provider)),
      verifier_(std::move(verifier)),
      store_(std::move(store)),
      clock_(std::move(clock)) {
  config_.external_url = trim_slash(config_.external_url);
}

std::string RelyingParty::invocation_uri(const std::string& login_id) const {
  const std::string request_uri =
      config_.external_url + "/api/presentCredential?login_id=" + url_encode(login_id);
  return "openid-vc://?client_id=" + client_did_ + "&request_uri=" + url_encode(request_uri);
}

Invocation RelyingParty::begin_login(const std::string& login_challenge) {
  auto session = provider_->login_request(login_challenge);
  Invocation inv;
  inv.login_id = crypto::uuid_v4();
  inv.uri = invocation_uri(inv.login_id);
  auto ttl = std::max<std::int64_t>(1, session.expires_at - clock_());
  store_->put(session::Namespace::login_id_to_challenge, inv.login_id, login_challenge, ttl);
  return inv;
}

std::string RelyingParty::presentation_request(const std::string& login_id) {
  if (!store_->get(session::Namespace::login_id_to_challenge, login_id)) {
    throw Error(Errc::unknown_login_id, "login_id is unknown or expired");
  }
  const auto now = clock_();
  json payload{{"iss", client_did_},
               {"aud", kSelfIssuedAudience},
               {"client_id", client_did_},
               {"client_id_scheme", "did"},
               {"response_uri", config_.external_url + "/api/presentCredential"},
               {"response_mode", "direct_post"},
               {"response_type", "vp_token"},
               {"nonce", login_id},
               {"state", login_id},
               {"presentation_definition",
                pex::request_definition(config_.policy, config_.descriptor_override)},
               {"iat", now},
               {"exp", now + config_.request_lifetime_seconds}};
  json header{{"typ", "oauth-authz-req+jwt"}, {"kid", client_kid_}};
  return jws::sign(header, payload, config_.did_key);
}

Submission RelyingParty::submit_presentation(const Params& form) {
  const std::string envelope = vp_envelope(param(form, "vp_token"));
  std::string login_id = param(form, "state");
  if (login_id.empty()) login_id = unverified_nonce(envelope);

  auto challenge = login_id.empty()
                       ? std::nullopt
                       : store_->take(session::Namespace::login_id_to_challenge, login_id);
  if (!challenge) {
    throw Error(Errc::challenge_mismatch, "login_id is unknown, expired or already used");
  }
  Submission out;
  out.login_challenge = challenge->get<std::string>();

  auto vp = verifier_->verify_vp(envelope, login_id, client_did_);
  auto match = policy::match_credentials(vp.credentials, config_.policy);

  std::vector<claims::TokenPair> fragments;
  // The assignment lists one entry per expected credential, in policy order.
  for (std::size_t i = 0; i < match.assignment.size(); ++i) {
    const auto& m = match.assignment[i];
    const json& credential = vp.credentials[m.credential_index];
    if (auto ref = status::reference_from(credential)) {
      auto issuer = policy::issuer_of(credential);
      if (verifier_->check_status(*ref, issuer) == status::Status::revoked) {
        throw Error(Errc::revoked, "credential " + m.credential_id + " has been revoked");
      }
    }
    const auto& pattern =
        config_.policy.expected_credentials[i].patterns[m.pattern_index];
    fragments.push_back(claims::extract_claims(credential, pattern));
  }
  out.tokens = claims::merge_fragments(fragments);
  out.holder_did = vp.holder_did;

  const std::string next_hop = provider_->accept_login(out.login_challenge, out.holder_did);
  store_->put(session::Namespace::subject_to_claims, out.holder_did, out.tokens.to_json(),
              session::kDefaultTtlSeconds);
  store_->put(session::Namespace::challenge_to_redirect, out.login_challenge, next_hop,
              session::kDefaultTtlSeconds);
  return out;
}

std::optional<std::string> RelyingParty::poll_redirect(const std::string& login_challenge) {
  auto value = store_->take(session::Namespace::challenge_to_redirect, login_challenge);
  if (!value || !value->is_string()) return std::nullopt;
  return value->get<std::string>();
}

std::string RelyingParty::complete_consent(const std::string& consent_challenge) {
  auto session = provider_->consent_request(consent_challenge);
  auto stored = store_->take(session::Namespace::subject_to_claims, session.subject_did.value());
  if (!stored) throw Error(Errc::missing_claims, "processed claims expired before consent");
  return provider_->accept_consent(consent_challenge, claims::TokenPair::from_json(*stored));
}

}  // namespace vcbridge::rp
