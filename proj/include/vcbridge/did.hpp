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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "vcbridge/clock.hpp"
#include "vcbridge/crypto.hpp"
#include "vcbridge/http_fetch.hpp"

namespace vcbridge::did {

using json = nlohmann::json;

struct ParsedDid {
  std::string method;
  std::string specific_id;
};

/// `did:<method>:<method-specific-id>` per the DID core ABNF.
bool is_valid(std::string_view did);
/// Throws Error(malformed_did).
ParsedDid parse(std::string_view did);
/// Drops a `#fragment` (and any query) from a DID URL.
std::string without_fragment(std::string_view did_url);

/// did:key for a public key (multibase base58btc over the multicodec
/// prefixed key).
std::string did_key(const crypto::PublicKey& key);
/// The verification method id of a did:key: `<did>#<method-specific-id>`.
std::string did_key_id(const crypto::PublicKey& key);
/// Decodes a did:key locally. Throws Error(malformed_did) or
/// Error(unsupported_method) for unknown multicodecs.
crypto::PublicKey decode_did_key(std::string_view did);

/// HTTPS location of a did:web document: `/.well-known/did.json` for a bare
/// domain, otherwise the colon-separated path with `/did.json` appended.
std::string web_document_url(std::string_view did);

/// Minimal DID document with one verification method usable for both
/// assertion and authentication. Used by fixtures and the wallet tooling.
json make_document(std::string_view did, const crypto::PublicKey& key,
                   std::string_view fragment = "key-1");

struct DidDocumentKey {
  std::string did;
  std::string key_id;
  crypto::PublicKey public_key;
};

enum class Purpose { assertion, authentication };

/// Picks the verification key from a document: the one named by `key_id`
/// when given, else the first key listed under `purpose`.
/// Throws Error(resolution_failure).
DidDocumentKey select_key(const json& document, std::string_view did,
                          std::optional<std::string_view> key_id, Purpose purpose);

/// did:key and did:web resolution. did:key never touches the network;
/// did:web documents are cached for at most `cache_ttl_seconds`.
class Resolver {
 public:
  Resolver(std::shared_ptr<http::Fetcher> fetcher, Clock clock = system_clock(),
           std::int64_t cache_ttl_seconds = 60);

  /// Throws Error(unsupported_method | resolution_failure | malformed_did).
  DidDocumentKey resolve(std::string_view did,
                         std::optional<std::string_view> key_id = std::nullopt,
                         Purpose purpose = Purpose::assertion);

  void clear_cache();

 private:
  json web_document(const std::string& did);

  std::shared_ptr<http::Fetcher> fetcher_;
  Clock clock_;
  std::int64_t cache_ttl_;
  std::mutex mu_;
  std::map<std::string, std::pair<std::int64_t, json>> cache_;
};

}  // namespace vcbridge::did
