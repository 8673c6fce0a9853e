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

#include "vcbridge/did.hpp"

#include <algorithm>
#include <cctype>

#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"

namespace vcbridge::did {
namespace {

constexpr std::uint8_t kEd25519Codec[] = {0xed, 0x01};
constexpr std::uint8_t kP256Codec[] = {0x80, 0x24};

bool is_idchar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
         c == '_' || c == '%';
}

bool starts_with(std::span<const std::uint8_t> data, std::span<const std::uint8_t> prefix) {
  return data.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), data.begin());
}

std::string multibase_key(const crypto::PublicKey& key) {
  Bytes data;
  if (key.type() == crypto::KeyType::ed25519) {
    data.assign(std::begin(kEd25519Codec), std::end(kEd25519Codec));
    data.insert(data.end(), key.raw().begin(), key.raw().end());
  } else {
    data.assign(std::begin(kP256Codec), std::end(kP256Codec));
    Bytes c = key.compressed();
    data.insert(data.end(), c.begin(), c.end());
  }
  return "z" + base58btc_encode(data);
}

crypto::PublicKey decode_multibase_key(std::string_view mb) {
  if (mb.empty() || mb.front() != 'z') {
    throw Error(Errc::malformed_did, "only base58btc multibase keys are supported");
  }
  Bytes data;
  try {
    data = base58btc_decode(mb.substr(1));
  } catch (const Error&) {
    throw Error(Errc::malformed_did, "invalid base58btc key encoding");
  }
  std::span<const std::uint8_t> view(data);
  try {
    if (starts_with(view, kEd25519Codec)) {
      return crypto::PublicKey::from_raw(crypto::KeyType::ed25519, view.subspan(2));
    }
    if (starts_with(view, kP256Codec)) {
      return crypto::PublicKey::from_raw(crypto::KeyType::p256, view.subspan(2));
    }
  } catch (const Error& e) {
    throw Error(Errc::malformed_did, std::string("invalid key bytes: ") + e.what());
  }
  throw Error(Errc::unsupported_method, "unsupported multicodec key type");
}

// Absolute form of a verification method reference.
std::string absolute_id(std::string_view did, std::string_view ref) {
  if (!ref.empty() && ref.front() == '#') return std::string(did) + std::string(ref);
  return std::string(ref);
}

crypto::PublicKey method_key(const json& vm) {
  if (vm.contains("publicKeyJwk")) return crypto::PublicKey::from_jwk(vm.at("publicKeyJwk"));
  if (vm.contains("publicKeyMultibase") && vm.at("publicKeyMultibase").is_string()) {
    return decode_multibase_key(vm.at("publicKeyMultibase").get<std::string>());
  }
  throw Error(Errc::resolution_failure, "verification method carries no usable key");
}

}  // namespace

bool is_valid(std::string_view did) {
  if (!did.starts_with("did:")) return false;
  auto rest = did.substr(4);
  auto colon = rest.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  for (char c : rest.substr(0, colon)) {
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)))) {
      return false;
    }
  }
  auto msid = rest.substr(colon + 1);
  if (msid.empty() || msid.back() == ':') return false;
  for (char c : msid) {
    if (!is_idchar(c) && c != ':') return false;
  }
  return true;
}

ParsedDid parse(std::string_view did) {
  if (!is_valid(did)) throw Error(Errc::malformed_did, "malformed DID: " + std::string(did));
  auto rest = did.substr(4);
  auto colon = rest.find(':');
  return {std::string(rest.substr(0, colon)), std::string(rest.substr(colon + 1))};
}

std::string without_fragment(std::string_view did_url) {
  return std::string(did_url.substr(0, did_url.find_first_of("#?")));
}

std::string did_key(const crypto::PublicKey& key) { return "did:key:" + multibase_key(key); }

std::string did_key_id(const crypto::PublicKey& key) {
  auto mb = multibase_key(key);
  return "did:key:" + mb + "#" + mb;
}

crypto::PublicKey decode_did_key(std::string_view did) {
  auto parsed = parse(did);
  if (parsed.method != "key") {
    throw Error(Errc::unsupported_method, "not a did:key: " + std::string(did));
  }
  return decode_multibase_key(parsed.specific_id);
}

std::string web_document_url(std::string_view did) {
  auto parsed = parse(did);
  if (parsed.method != "web") {
    throw Error(Errc::unsupported_method, "not a did:web: " + std::string(did));
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  const auto& id = parsed.specific_id;
  while (true) {
    auto end = id.find(':', start);
    parts.push_back(url_decode(id.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  const std::string& host = parts.front();
  if (host.empty() || host.find_first_of("/?#@") != std::string::npos) {
    throw Error(Errc::malformed_did, "invalid did:web host: " + host);
  }
  std::string url = "https://" + host;
  if (parts.size() == 1) return url + "/.well-known/did.json";
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty() || parts[i].find_first_of("/?#") != std::string::npos ||
        parts[i] == "..") {
      throw Error(Errc::malformed_did, "invalid did:web path segment");
    }
    url += "/" + parts[i];
  }
  return url + "/did.json";
}

json make_document(std::string_view did, const crypto::PublicKey& key,
                   std::string_view fragment) {
  std::string id = std::string(did) + "#" + std::string(fragment);
  return {{"@context", {"https://www.w3.org/ns/did/v1"}},
          {"id", did},
          {"verificationMethod",
           {{{"id", id}, {"type", "JsonWebKey2020"}, {"controller", did},
             {"publicKeyJwk", key.to_jwk()}}}},
          {"assertionMethod", {id}},
          {"authentication", {id}}};
}

DidDocumentKey select_key(const json& document, std::string_view did,
                          std::optional<std::string_view> key_id, Purpose purpose) {
  if (!document.is_object() || document.value("id", "") != did) {
    throw Error(Errc::resolution_failure, "DID document id does not match " + std::string(did));
  }
  std::map<std::string, const json*> methods;
  auto collect = [&](const json& vm) {
    if (vm.is_object() && vm.contains("id") && vm.at("id").is_string()) {
      methods.emplace(absolute_id(did, vm.at("id").get<std::string>()), &vm);
    }
  };
  if (document.contains("verificationMethod") && document.at("verificationMethod").is_array()) {
    for (const auto& vm : document.at("verificationMethod")) collect(vm);
  }
  const char* relation = purpose == Purpose::assertion ? "assertionMethod" : "authentication";
  std::vector<std::string> listed;
  if (document.contains(relation) && document.at(relation).is_array()) {
    for (const auto& ref : document.at(relation)) {
      if (ref.is_string()) {
        listed.push_back(absolute_id(did, ref.get<std::string>()));
      } else if (ref.is_object()) {
        collect(ref);
        if (ref.contains("id")) listed.push_back(absolute_id(did, ref.at("id").get<std::string>()));
      }
    }
  }

  std::string chosen;
  if (key_id && !key_id->empty()) {
    chosen = absolute_id(did, *key_id);
    if (without_fragment(chosen) != did) {
      throw Error(Errc::resolution_failure, "key id " + chosen + " is not under " + std::string(did));
    }
    if (std::find(listed.begin(), listed.end(), chosen) == listed.end()) {
      throw Error(Errc::resolution_failure, chosen + " is not listed under " + relation);
    }
  } else if (!listed.empty()) {
    chosen = listed.front();
  } else {
    throw Error(Errc::resolution_failure, std::string("DID document lists no ") + relation + " key");
  }
  auto it = methods.find(chosen);
  if (it == methods.end()) {
    throw Error(Errc::resolution_failure, "verification method not found: " + chosen);
  }
  try {
    return {std::string(did), chosen, method_key(*it->second)};
  } catch (const Error& e) {
    if (e.code() == Errc::resolution_failure) throw;
    throw Error(Errc::resolution_failure, std::string("unusable key: ") + e.what());
  }
}

Resolver::Resolver(std::shared_ptr<http::Fetcher> fetcher, Clock clock,
                   std::int64_t cache_ttl_seconds)
    : fetcher_(std::move(fetcher)),
      clock_(std::move(clock)),
      cache_ttl_(std::min<std::int64_t>(cache_ttl_seconds, 60)) {}

DidDocumentKey Resolver::resolve(std::string_view did, std::optional<std::string_view> key_id,
                                 Purpose purpose) {
  auto parsed = parse(did);
  if (parsed.method == "key") {
    auto key = decode_did_key(did);
    std::string id = std::string(did) + "#" + parsed.specific_id;
    if (key_id && !key_id->empty() && absolute_id(did, *key_id) != id) {
      throw Error(Errc::resolution_failure, "key id does not belong to " + std::string(did));
    }
    return {std::string(did), id, std::move(key)};
  }
  if (parsed.method == "web") {
    return select_key(web_document(std::string(did)), did, key_id, purpose);
  }
  throw Error(Errc::unsupported_method, "unsupported DID method: did:" + parsed.method);
}

void Resolver::clear_cache() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

json Resolver::web_document(const std::string& did) {
  const auto now = clock_();
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(did);
    if (it != cache_.end() && now - it->second.first < cache_ttl_) return it->second.second;
  }
  std::string url = web_document_url(did);
  http::Response response;
  try {
    response = fetcher_->get(url);
  } catch (const Error& e) {
    throw Error(Errc::resolution_failure, e.what());
  }
  json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::resolution_failure, "DID document at " + url + " is not a JSON object");
  }
  if (cache_ttl_ > 0) {
    std::lock_guard lock(mu_);
    cache_[did] = {now, doc};
  }
  return doc;
}

}  // namespace vcbridge::did
