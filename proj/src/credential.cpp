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

#include "vcbridge/credential.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>

#include "vcbridge/jws.hpp"

namespace vcbridge::vc {

std::string issue_credential(const CredentialSpec& spec, const crypto::SigningKey& key) {
  json vc;
  if (spec.vc_override) {
    vc = *spec.vc_override;
  } else {
    json subject = spec.subject_claims;
    subject["id"] = spec.subject_did;
    vc = {{"@context", {"https://www.w3.org/2018/credentials/v1"}},
          {"type", spec.types},
          {"issuer", spec.issuer_did},
          {"issuanceDate", format_time(spec.issued_at)},
          {"credentialSubject", std::move(subject)}};
    if (spec.expires_at) vc["expirationDate"] = format_time(*spec.expires_at);
    if (spec.credential_status) vc["credentialStatus"] = *spec.credential_status;
  }
  json payload{{"iss", spec.issuer_did},
               {"nbf", spec.issued_at},
               {"jti", "urn:uuid:" + crypto::uuid_v4()},
               {"vc", std::move(vc)}};
  if (!spec.subject_did.empty()) payload["sub"] = spec.subject_did;
  if (spec.expires_at) payload["exp"] = *spec.expires_at;
  return jws::sign({{"typ", "JWT"}, {"kid", spec.key_id}}, payload, key);
}

std::string sign_presentation(const PresentationSpec& spec, const crypto::SigningKey& key) {
  json payload{{"iss", spec.holder_did},
               {"aud", spec.audience},
               {"nonce", spec.nonce},
               {"iat", spec.issued_at},
               {"nbf", spec.issued_at},
               {"exp", spec.issued_at + spec.lifetime_seconds},
               {"vp",
                {{"@context", {"https://www.w3.org/2018/credentials/v1"}},
                 {"type", {"VerifiablePresentation"}},
                 {"holder", spec.holder_did},
                 {"verifiableCredential", spec.credentials}}}};
  return jws::sign({{"typ", "JWT"}, {"kid", spec.key_id}}, payload, key);
}

std::string format_time(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::int64_t> parse_time(std::string_view text) {
  std::string s(text);
  std::tm tm{};
  const char* rest = strptime(s.c_str(), "%Y-%m-%dT%H:%M:%S", &tm);
  if (rest == nullptr) return std::nullopt;
  if (*rest == '.') {
    ++rest;
    if (!std::isdigit(static_cast<unsigned char>(*rest))) return std::nullopt;
    while (std::isdigit(static_cast<unsigned char>(*rest))) ++rest;
  }
  std::int64_t offset = 0;
  if (*rest == 'Z' || *rest == 'z') {
    ++rest;
  } else if (*rest == '+' || *rest == '-') {
    int sign = *rest == '+' ? 1 : -1;
    int hh = 0, mm = 0;
    if (std::sscanf(rest + 1, "%2d:%2d", &hh, &mm) != 2) return std::nullopt;
    offset = sign * (hh * 3600 + mm * 60);
    rest += 6;
  } else {
    return std::nullopt;
  }
  if (*rest != '\0') return std::nullopt;
  return static_cast<std::int64_t>(timegm(&tm)) - offset;
}

}  // namespace vcbridge::vc
