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

#include "vcbridge/vc_verifier.hpp"

#include <algorithm>

#include "vcbridge/credential.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"
#include "vcbridge/policy.hpp"

namespace vcbridge::vc {
namespace {

// The DID that signed `jws`: the DID part of `kid`, else the payload `iss`.
// An unreadable payload leaves the signer unknown, which counts as a bad
// signature rather than a structural problem.
std::string signer_of(const jws::CompactJws& jws, std::optional<std::string>& kid) {
  if (jws.header.contains("kid") && jws.header.at("kid").is_string()) {
    kid = jws.header.at("kid").get<std::string>();
    if (!kid->empty() && kid->front() != '#') return did::without_fragment(*kid);
  }
  try {
    json payload = jws.payload_json();
    if (payload.is_object() && payload.contains("iss") && payload.at("iss").is_string()) {
      return payload.at("iss").get<std::string>();
    }
  } catch (const Error&) {
  }
  throw Error(Errc::bad_signature, "cannot determine the signer of the envelope");
}

void check_signature(const jws::CompactJws& jws, const did::DidDocumentKey& key) {
  if (!jws::verify(jws, key.public_key)) {
    throw Error(Errc::bad_signature, "signature does not verify against " + key.key_id);
  }
}

void check_window(const json& claims, std::int64_t now, const char* what) {
  auto numeric = [&](const char* name) -> std::optional<std::int64_t> {
    if (claims.contains(name) && claims.at(name).is_number()) {
      return claims.at(name).get<std::int64_t>();
    }
    return std::nullopt;
  };
  if (auto exp = numeric("exp"); exp && now > *exp + kClockSkewSeconds) {
    throw Error(Errc::expired, std::string(what) + " expired");
  }
  if (auto nbf = numeric("nbf"); nbf && now + kClockSkewSeconds < *nbf) {
    throw Error(Errc::not_yet_valid, std::string(what) + " is not yet valid");
  }
}

void check_dates(const json& vc, std::int64_t now) {
  auto date = [&](const char* name) -> std::optional<std::int64_t> {
    if (!vc.contains(name)) return std::nullopt;
    const json& v = vc.at(name);
    auto t = v.is_string() ? parse_time(v.get<std::string>()) : std::nullopt;
    if (!t) throw Error(Errc::malformed_credential, std::string(name) + " is not an RFC 3339 date");
    return t;
  };
  for (const char* name : {"expirationDate", "validUntil"}) {
    if (auto t = date(name); t && now > *t + kClockSkewSeconds) {
      throw Error(Errc::expired, "credential expired");
    }
  }
  for (const char* name : {"issuanceDate", "validFrom"}) {
    if (auto t = date(name); t && now + kClockSkewSeconds < *t) {
      throw Error(Errc::not_yet_valid, "credential is not yet valid");
    }
  }
}

std::vector<std::string> subject_ids(const json& vc) {
  std::vector<std::string> ids;
  const json& subject = vc.at("credentialSubject");
  auto add = [&](const json& s) {
    ids.push_back(s.is_object() && s.contains("id") && s.at("id").is_string()
                      ? s.at("id").get<std::string>()
                      : std::string{});
  };
  if (subject.is_array()) {
    for (const auto& s : subject) add(s);
  } else {
    add(subject);
  }
  return ids;
}

}  // namespace

Verifier::Verifier(std::shared_ptr<did::Resolver> resolver, std::shared_ptr<http::Fetcher> fetcher,
                   Clock clock)
    : resolver_(std::move(resolver)), fetcher_(std::move(fetcher)), clock_(std::move(clock)) {}

json Verifier::verify_vc(std::string_view envelope) const { return verify_vc(envelope, clock_()); }

json Verifier::verify_vc(std::string_view envelope, std::int64_t now) const {
  auto jws = jws::parse(envelope);
  std::optional<std::string> kid;
  std::string signer = signer_of(jws, kid);
  auto key = resolver_->resolve(signer, kid, did::Purpose::assertion);
  check_signature(jws, key);

  json payload = jws.payload_json();
  if (!payload.is_object() || !payload.contains("vc") || !payload.at("vc").is_object()) {
    throw Error(Errc::malformed_credential, "JWT payload carries no vc object");
  }
  if (payload.value("iss", "") != signer) {
    throw Error(Errc::bad_signature, "credential iss does not match the signing DID");
  }
  json vc = payload.at("vc");
  std::string issuer = policy::issuer_of(vc);
  if (issuer.empty()) {
    vc["issuer"] = signer;
  } else if (issuer != signer) {
    throw Error(Errc::malformed_credential, "vc.issuer disagrees with iss");
  }
  if (!vc.contains("credentialSubject") ||
      !(vc.at("credentialSubject").is_object() || vc.at("credentialSubject").is_array())) {
    throw Error(Errc::malformed_credential, "credential has no credentialSubject");
  }
  if (payload.contains("sub") && payload.at("sub").is_string()) {
    const auto sub = payload.at("sub").get<std::string>();
    json& subject = vc.at("credentialSubject");
    if (subject.is_object()) {
      if (!subject.contains("id")) {
        subject["id"] = sub;
      } else if (subject.at("id") != sub) {
        throw Error(Errc::malformed_credential, "credentialSubject.id disagrees with sub");
      }
    }
  }
  check_window(payload, now, "credential");
  check_dates(vc, now);
  return vc;
}

VerifiedPresentation Verifier::verify_vp(std::string_view envelope,
                                         std::string_view expected_challenge,
                                         std::string_view expected_audience) const {
  auto jws = jws::parse(envelope);
  std::optional<std::string> kid;
  std::string holder = signer_of(jws, kid);
  auto key = resolver_->resolve(holder, kid, did::Purpose::authentication);
  check_signature(jws, key);

  json payload = jws.payload_json();
  if (!payload.is_object() || !payload.contains("vp") || !payload.at("vp").is_object()) {
    throw Error(Errc::malformed_jws, "JWT payload carries no vp object");
  }
  if (payload.value("iss", "") != holder) {
    throw Error(Errc::bad_signature, "presentation iss does not match the signing DID");
  }
  const json& vp = payload.at("vp");
  if (vp.contains("holder") && vp.at("holder") != holder) {
    throw Error(Errc::holder_binding_violation, "vp.holder is not the signing DID");
  }

  VerifiedPresentation out;
  out.holder_did = holder;
  out.challenge = payload.value("nonce", "");
  if (out.challenge != expected_challenge) {
    throw Error(Errc::challenge_mismatch, "presentation nonce does not match the login_id");
  }
  const json& aud = payload.value("aud", json());
  bool audience_ok = aud.is_string() ? aud == expected_audience
                                     : aud.is_array() && std::find(aud.begin(), aud.end(),
                                                                   expected_audience) != aud.end();
  if (!audience_ok) throw Error(Errc::audience_mismatch, "presentation audience mismatch");
  out.audience = std::string(expected_audience);

  const auto now = clock_();
  check_window(payload, now, "presentation");

  const json& creds = vp.value("verifiableCredential", json::array());
  if (!creds.is_array()) {
    throw Error(Errc::nested_vc_error, Errc::malformed_credential,
                "verifiableCredential must be an array");
  }
  for (std::size_t i = 0; i < creds.size(); ++i) {
    if (!creds[i].is_string()) {
      throw Error(Errc::nested_vc_error, Errc::malformed_credential,
                  "credential " + std::to_string(i) + " is not a JWT");
    }
    try {
      out.credentials.push_back(verify_vc(creds[i].get<std::string>(), now));
    } catch (const Error& e) {
      throw Error(Errc::nested_vc_error, e.code(),
                  "credential " + std::to_string(i) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < out.credentials.size(); ++i) {
    for (const auto& id : subject_ids(out.credentials[i])) {
      if (id != holder) {
        throw Error(Errc::holder_binding_violation,
                    "credential " + std::to_string(i) + " was issued to " +
                        (id.empty() ? std::string("<no subject id>") : id) + ", not " + holder);
      }
    }
  }
  return out;
}

status::Status Verifier::check_status(const status::StatusListReference& ref,
                                      std::optional<std::string_view> expected_issuer) const {
  http::Response response = fetcher_->get(ref.status_list_credential_url);
  std::string body = response.body;
  body.erase(0, body.find_first_not_of(" \t\r\n\""));
  body.erase(body.find_last_not_of(" \t\r\n\"") + 1);

  json list;
  try {
    list = verify_vc(body);
  } catch (const Error& e) {
    throw Error(Errc::bad_status_list_signature, e.code(),
                std::string("status list credential rejected: ") + e.what());
  }
  if (expected_issuer && policy::issuer_of(list) != *expected_issuer) {
    throw Error(Errc::bad_status_list_signature,
                "status list is not signed by the credential issuer");
  }
  const json& subject = list.at("credentialSubject");
  if (!subject.is_object() || subject.value("type", "") != "StatusList2021" ||
      !subject.contains("encodedList") || !subject.at("encodedList").is_string()) {
    throw Error(Errc::bad_status_list_signature, Errc::malformed_credential,
                "not a StatusList2021 credential");
  }
  if (subject.value("statusPurpose", ref.purpose) != ref.purpose) {
    throw Error(Errc::bad_status_list_signature, Errc::malformed_credential,
                "status list purpose mismatch");
  }
  Bytes bits;
  try {
    bits = status::decode_list(subject.at("encodedList").get<std::string>());
  } catch (const Error& e) {
    throw Error(Errc::bad_status_list_signature, e.code(), e.what());
  }
  return status::bit_at(bits, ref.status_list_index) ? status::Status::revoked
                                                     : status::Status::active;
}

}  // namespace vcbridge::vc
