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

#include <doctest.h>

#include "test_support.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::protocol_error;
}

}  // namespace

TEST_CASE("DID syntax") {
  CHECK(did::is_valid("did:example:123"));
  CHECK(did::is_valid("did:web:app.altme.io:issuer"));
  CHECK(did::is_valid("did:web:example.com%3A3000"));
  for (const char* bad : {"did:", "did:web", "did::x", "did:Web:x", "did:web:", "did:web:a:",
                          "urn:web:x", "did:web:a b"}) {
    CAPTURE(bad);
    CHECK_FALSE(did::is_valid(bad));
  }
  CHECK(did::without_fragment("did:web:a.b#key-1") == "did:web:a.b");
  auto p = did::parse("did:web:a.b:c");
  CHECK(p.method == "web");
  CHECK(p.specific_id == "a.b:c");
}

TEST_CASE("did:key encodes the multicodec-prefixed key in base58btc") {
  auto ed = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  auto d = did::did_key(ed.public_key());
  REQUIRE(d.starts_with("did:key:z6Mk"));
  Bytes raw = base58btc_decode(d.substr(9));
  REQUIRE(raw.size() == 34);
  CHECK(raw[0] == 0xed);
  CHECK(raw[1] == 0x01);
  CHECK(Bytes(raw.begin() + 2, raw.end()) == ed.public_key().raw());
  CHECK(did::decode_did_key(d) == ed.public_key());
  CHECK(did::did_key_id(ed.public_key()) == d + "#" + d.substr(8));

  auto p = crypto::SigningKey::generate(crypto::KeyType::p256);
  auto dp = did::did_key(p.public_key());
  REQUIRE(dp.starts_with("did:key:zDn"));
  Bytes rawp = base58btc_decode(dp.substr(9));
  REQUIRE(rawp.size() == 35);
  CHECK(rawp[0] == 0x80);
  CHECK(rawp[1] == 0x24);
  CHECK(did::decode_did_key(dp) == p.public_key());

  // Valid base58btc, but an unknown multicodec prefix.
  CHECK(code_of([] { did::decode_did_key("did:key:z111"); }) == Errc::unsupported_method);
  CHECK(code_of([] { did::decode_did_key("did:key:z0OIl"); }) == Errc::malformed_did);
  CHECK(code_of([] { did::decode_did_key("did:key:m6Mk"); }) == Errc::malformed_did);
  CHECK(code_of([] { did::decode_did_key("did:web:x"); }) == Errc::unsupported_method);
}

TEST_CASE("did:web document locations") {
  CHECK(did::web_document_url("did:web:w3c-ccg.github.io") ==
        "https://w3c-ccg.github.io/.well-known/did.json");
  CHECK(did::web_document_url("did:web:w3c-ccg.github.io:user:alice") ==
        "https://w3c-ccg.github.io/user/alice/did.json");
  CHECK(did::web_document_url("did:web:example.com%3A3000:user:alice") ==
        "https://example.com:3000/user/alice/did.json");
  CHECK(did::web_document_url("did:web:app.altme.io:issuer") ==
        "https://app.altme.io/issuer/did.json");
  CHECK(code_of([] { did::web_document_url("did:web:evil.com%2Fx"); }) == Errc::malformed_did);
  CHECK(code_of([] { did::web_document_url("did:key:z6Mk"); }) == Errc::unsupported_method);
}

TEST_CASE("resolver: did:key offline, did:web via fetcher with cache") {
  auto fetcher = std::make_shared<testing::MapFetcher>();
  testing::ManualClock clock;
  did::Resolver resolver(fetcher, clock.clock(), 60);

  auto ed = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  auto key_did = did::did_key(ed.public_key());
  auto r = resolver.resolve(key_did);
  CHECK(r.public_key == ed.public_key());
  CHECK(r.key_id == did::did_key_id(ed.public_key()));
  CHECK(code_of([&] { resolver.resolve(key_did, std::string_view("did:key:other#x")); }) ==
        Errc::resolution_failure);

  const std::string web = "did:web:issuer.example";
  const std::string url = "https://issuer.example/.well-known/did.json";
  auto p = crypto::SigningKey::generate(crypto::KeyType::p256);
  fetcher->put(url, did::make_document(web, p.public_key()).dump());

  auto w = resolver.resolve(web, std::string_view("#key-1"));
  CHECK(w.public_key == p.public_key());
  CHECK(w.key_id == web + "#key-1");
  resolver.resolve(web);
  CHECK(fetcher->calls(url) == 1);
  clock.advance(61);
  resolver.resolve(web);
  CHECK(fetcher->calls(url) == 2);

  CHECK(code_of([&] { resolver.resolve(web, std::string_view("#key-2")); }) ==
        Errc::resolution_failure);
  CHECK(code_of([&] { resolver.resolve("did:web:missing.example"); }) == Errc::resolution_failure);
  CHECK(code_of([&] { resolver.resolve("did:ethr:0xabc"); }) == Errc::unsupported_method);
  CHECK(code_of([&] { resolver.resolve("not a did"); }) == Errc::malformed_did);
}

TEST_CASE("key selection honours verification relationships") {
  auto a = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  auto b = crypto::SigningKey::generate(crypto::KeyType::p256);
  const std::string d = "did:web:example.com";
  json doc{{"id", d},
           {"verificationMethod",
            {{{"id", "#auth"}, {"type", "JsonWebKey2020"}, {"controller", d},
              {"publicKeyJwk", a.public_key().to_jwk()}},
             {{"id", d + "#assert"}, {"type", "JsonWebKey2020"}, {"controller", d},
              {"publicKeyJwk", b.public_key().to_jwk()}}}},
           {"authentication", {"#auth"}},
           {"assertionMethod", {d + "#assert"}}};
  CHECK(did::select_key(doc, d, std::nullopt, did::Purpose::authentication).public_key ==
        a.public_key());
  CHECK(did::select_key(doc, d, std::nullopt, did::Purpose::assertion).public_key ==
        b.public_key());
  CHECK(code_of([&] { did::select_key(doc, d, std::string_view("#auth"), did::Purpose::assertion); }) ==
        Errc::resolution_failure);
  CHECK(code_of([&] { did::select_key(doc, "did:web:other.com", std::nullopt, did::Purpose::assertion); }) ==
        Errc::resolution_failure);
}

TEST_CASE("HTTPS fetcher refuses plain HTTP and redirects") {
  http::HttpsFetcher fetcher;
  CHECK(code_of([&] { fetcher.get("http://127.0.0.1:1/x"); }) == Errc::fetch_failure);

  testing::TempDir dir;
  testing::TestPki pki(dir.path());
  testing::StaticHttpsServer server(pki);
  server.put("/doc", "{\"ok\":true}");
  server.put("/big", std::string(100 * 1024, 'x'));

  http::FetchOptions trusting;
  trusting.ca_file = pki.ca_file;
  http::HttpsFetcher good(trusting);
  CHECK(good.get(server.base_url() + "/doc").body == "{\"ok\":true}");
  CHECK(code_of([&] { good.get(server.base_url() + "/missing"); }) == Errc::fetch_failure);
  CHECK(code_of([&] { good.get(server.base_url() + "/big"); }) == Errc::fetch_failure);

  http::HttpsFetcher untrusting;
  CHECK(code_of([&] { untrusting.get(server.base_url() + "/doc"); }) == Errc::fetch_failure);
}
