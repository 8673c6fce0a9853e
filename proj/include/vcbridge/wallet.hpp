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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcbridge/clock.hpp"
#include "vcbridge/crypto.hpp"
#include "vcbridge/http_agent.hpp"

namespace vcbridge::wallet {

using json = nlohmann::json;

/// A directory holding `holder.jwk` and credential envelopes (`*.jwt`),
/// presented in file-name order.
struct Vault {
  crypto::SigningKey holder_key;
  std::vector<std::string> credentials;

  std::string holder_did() const;
  std::string holder_key_id() const;

  /// Throws Error(malformed_jws) for envelopes that are not compact JWS.
  static Vault load(const std::filesystem::path& dir);
  /// Writes `holder.jwk` and the credentials as `NNN.jwt`.
  void save(const std::filesystem::path& dir) const;
};

struct Invocation {
  std::string client_id;
  std::string request_uri;
};

/// Throws Error(malformed_uri).
Invocation parse_invocation(std::string_view uri);

struct Selection {
  std::string descriptor_id;
  std::size_t vault_index;
};

/// One credential per submission requirement (per descriptor when the
/// definition has none), first suitable vault entry wins. Only credentials
/// issued to `holder_did` are considered unless `enforce_holder_binding` is
/// false. Throws Error(no_suitable_credential).
std::vector<Selection> select_credentials(const json& definition,
                                          const std::vector<std::string>& credentials,
                                          const std::string& holder_did,
                                          bool enforce_holder_binding = true);

/// True when every non-optional field of `descriptor` is satisfied by the
/// decoded credential JWT payload.
bool satisfies(const json& descriptor, const json& credential_payload);

struct PresentOptions {
  bool wrong_nonce = false;
  bool violate_holder_binding = false;
  bool tamper_vp = false;
  bool resubmit = false;
  bool expired = false;
  std::string ca_file;
  std::shared_ptr<http::Transcript> transcript;
  Clock clock = system_clock();
};

struct PresentResult {
  int status = 0;
  json response;
  json request_payload;
  std::string vp_token;
};

/// Runs the holder lane: fetch and authenticate the request object, select,
/// sign, post. HTTP-level rejection is reported in the result; transport,
/// request-authenticity and selection failures throw.
PresentResult present(std::string_view uri, const Vault& vault, const PresentOptions& options = {});

/// Flips one bit of the decoded payload and re-encodes it, keeping the
/// original signature.
std::string tamper_payload(const std::string& compact);

}  // namespace vcbridge::wallet
