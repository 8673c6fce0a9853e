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

#include <random>

#include "vcbridge/crypto.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

// RFC 8037 appendix A key.
const json kRfc8037Jwk = {{"kty", "OKP"},
                          {"crv", "Ed25519"},
                          {"d", "nWGxne_9WmC6hEr0kuwsxERJxWl7MmkZcDusAxyuf2A"},
                          {"x", "11qYAYKxCrfVS_7TyWQHOg7hcvPapiMlrwIaaPcHURo"}};

Bytes hex(std::string_view h) {
  Bytes out;
  for (std::size_t i = 0; i < h.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(h.substr(i, 2)), nullptr, 16)));
  }
  return out;
}

}  // namespace

TEST_CASE("Ed25519 matches RFC 8032 test 1") {
  auto d = hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
  auto x = hex("d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
  json jwk{{"kty", "OKP"}, {"crv", "Ed25519"}, {"d", base64url_encode(d)}, {"x", base64url_encode(x)}};
  auto key = crypto::SigningKey::from_jwk(jwk);
  auto sig = key.sign({});
  CHECK(sig == hex("e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
                   "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b"));
  CHECK(key.public_key().verify({}, sig));
}

TEST_CASE("RFC 8037 JWS and thumbprint") {
  auto key = crypto::SigningKey::from_jwk(kRfc8037Jwk);
  CHECK(key.public_key().thumbprint() == "kPrK_qmxVWaYVA9wwBF6Iuo3vVzz7TxHCTwXBygrS4k");

  const std::string expected =
      "eyJhbGciOiJFZERTQSJ9.RXhhbXBsZSBvZiBFZDI1NTE5IHNpZ25pbmc."
      "hgyY0il_MGCjP0JzlnLWG1PPOt7-09PGcvMg3AIbQR6dWbhijcNR4ki4iylGjg5BhVsPt9g7sVvpAr_MuM0KAg";
  auto parsed = jws::parse(expected);
  CHECK(to_string(parsed.payload) == "Example of Ed25519 signing");
  CHECK(jws::verify(parsed, key.public_key()));
  CHECK(base64url_encode(key.sign(to_bytes(parsed.signing_input))) ==
        expected.substr(expected.rfind('.') + 1));
}

TEST_CASE("private JWK must match its public part") {
  auto other = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  json jwk = kRfc8037Jwk;
  jwk["x"] = other.public_key().to_jwk()["x"];
  CHECK_THROWS_AS(crypto::SigningKey::from_jwk(jwk), Error);

  auto p = crypto::SigningKey::generate(crypto::KeyType::p256);
  auto q = crypto::SigningKey::generate(crypto::KeyType::p256);
  json mixed = p.to_jwk(true);
  mixed["d"] = q.to_jwk(true)["d"];
  CHECK_THROWS_AS(crypto::SigningKey::from_jwk(mixed), Error);
}

TEST_CASE("P-256 keys: JWK, compressed points and ES256") {
  auto key = crypto::SigningKey::generate(crypto::KeyType::p256);
  const auto& pub = key.public_key();
  REQUIRE(pub.raw().size() == 65);
  CHECK(pub.raw()[0] == 0x04);
  auto compressed = pub.compressed();
  REQUIRE(compressed.size() == 33);
  CHECK((compressed[0] == 0x02 || compressed[0] == 0x03));
  CHECK(crypto::PublicKey::from_raw(crypto::KeyType::p256, compressed) == pub);
  CHECK(crypto::PublicKey::from_jwk(pub.to_jwk()) == pub);
  CHECK(crypto::SigningKey::from_jwk(key.to_jwk(true)).public_key() == pub);
  CHECK_FALSE(key.to_jwk(false).contains("d"));

  auto msg = to_bytes("message");
  auto sig = key.sign(msg);
  CHECK(sig.size() == 64);
  CHECK(pub.verify(msg, sig));
  sig[10] ^= 0x40;
  CHECK_FALSE(pub.verify(msg, sig));

  Bytes off_curve = pub.raw();
  off_curve[64] ^= 0x01;
  CHECK_THROWS_AS(crypto::PublicKey::from_raw(crypto::KeyType::p256, off_curve), Error);
}

TEST_CASE("random tokens and UUIDs") {
  auto a = crypto::random_token(32);
  CHECK(base64url_decode(a).size() == 32);
  CHECK(a != crypto::random_token(32));
  auto u = crypto::uuid_v4();
  REQUIRE(u.size() == 36);
  CHECK(u[14] == '4');
  CHECK(std::string("89ab").find(u[19]) != std::string::npos);
}

TEST_CASE("JWS sign, parse, verify") {
  for (auto type : {crypto::KeyType::ed25519, crypto::KeyType::p256}) {
    auto key = crypto::SigningKey::generate(type);
    json payload{{"iss", "did:example:1"}, {"n", 42}};
    auto token = jws::sign({{"typ", "JWT"}}, payload, key);
    auto parsed = jws::parse(token);
    CHECK(parsed.header["alg"] == crypto::jws_alg(type));
    CHECK(parsed.payload_json() == payload);
    CHECK(jws::verify(parsed, key.public_key()));
    auto other = crypto::SigningKey::generate(type);
    CHECK_FALSE(jws::verify(parsed, other.public_key()));
  }
}

TEST_CASE("JWS alg must match the key type") {
  auto ed = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  auto token = jws::sign({}, json{{"a", 1}}, ed);
  auto parsed = jws::parse(token);
  parsed.header["alg"] = "ES256";
  CHECK_FALSE(jws::verify(parsed, ed.public_key()));
  parsed.header["alg"] = "none";
  CHECK_FALSE(jws::verify(parsed, ed.public_key()));
}

TEST_CASE("malformed compact serializations") {
  for (const char* bad : {"", "a.b", "a.b.c.d", "!!.e30.", "e30.e30", "bm90IGpzb24.e30.AA"}) {
    CHECK_THROWS_AS(jws::parse(bad), Error);
  }
}

TEST_CASE("any single-bit payload change breaks the signature") {
  std::mt19937 rng(2026);
  for (auto type : {crypto::KeyType::ed25519, crypto::KeyType::p256}) {
    auto key = crypto::SigningKey::generate(type);
    auto token = jws::sign({{"typ", "JWT"}}, json{{"sub", "did:example:x"}, {"v", "payload"}}, key);
    auto first = token.find('.');
    auto second = token.find('.', first + 1);
    Bytes payload = base64url_decode(std::string_view(token).substr(first + 1, second - first - 1));
    for (int trial = 0; trial < 100; ++trial) {
      Bytes changed = payload;
      auto bit = rng() % (changed.size() * 8);
      changed[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      auto forged = token.substr(0, first + 1) + base64url_encode(changed) + token.substr(second);
      CHECK_FALSE(jws::verify(jws::parse(forged), key.public_key()));
    }
  }
}
