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
#include "vcbridge/credential.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"
#include "vcbridge/vc_verifier.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

struct Party {
  crypto::SigningKey key;
  std::string did;
  std::string kid;
};

Party key_party(crypto::KeyType type = crypto::KeyType::ed25519) {
  auto key = crypto::SigningKey::generate(type);
  auto d = did::did_key(key.public_key());
  return {key, d, did::did_key_id(key.public_key())};
}

struct Fixture {
  std::shared_ptr<testing::MapFetcher> fetcher = std::make_shared<testing::MapFetcher>();
  testing::ManualClock clock;
  vc::Verifier verifier{std::make_shared<did::Resolver>(fetcher, clock.clock()), fetcher,
                        clock.clock()};
  Party issuer = key_party();
  Party holder = key_party();
  Party web_issuer = web_party();

  Party web_party() {
    auto key = crypto::SigningKey::generate(crypto::KeyType::p256);
    const std::string d = "did:web:issuer.example";
    fetcher->put("https://issuer.example/.well-known/did.json",
                 did::make_document(d, key.public_key()).dump());
    return {key, d, d + "#key-1"};
  }

  std::int64_t now() const { return clock.now->load(); }

  std::string issue(const Party& by, const std::string& subject, std::int64_t issued_offset = -10,
                    std::optional<std::int64_t> expires_offset = 3600) {
    vc::CredentialSpec spec;
    spec.issuer_did = by.did;
    spec.key_id = by.kid;
    spec.subject_did = subject;
    spec.subject_claims = {{"email", "a@example.com"}};
    spec.issued_at = now() + issued_offset;
    if (expires_offset) spec.expires_at = now() + *expires_offset;
    return vc::issue_credential(spec, by.key);
  }

  std::string present(const std::vector<std::string>& vcs, const std::string& nonce = "n-1",
                      const std::string& aud = "did:key:rp") {
    vc::PresentationSpec spec;
    spec.holder_did = holder.did;
    spec.key_id = holder.kid;
    spec.credentials = vcs;
    spec.audience = aud;
    spec.nonce = nonce;
    spec.issued_at = now();
    return vc::sign_presentation(spec, holder.key);
  }
};

struct Outcome {
  Errc code;
  std::optional<Errc> cause;
};

template <typename F>
Outcome outcome(F f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.code(), e.cause()};
  }
  FAIL("expected an error");
  return {Errc::protocol_error, std::nullopt};
}

std::string flip_payload_bit(const std::string& jwt) {
  auto a = jwt.find('.');
  auto b = jwt.find('.', a + 1);
  Bytes payload = base64url_decode(jwt.substr(a + 1, b - a - 1));
  payload[payload.size() / 2] ^= 0x01;
  return jwt.substr(0, a + 1) + base64url_encode(payload) + jwt.substr(b);
}

}  // namespace

TEST_CASE("valid credentials verify for both key types") {
  Fixture f;
  for (const Party* p : {&f.issuer, &f.web_issuer}) {
    auto vc = f.verifier.verify_vc(f.issue(*p, f.holder.did));
    CHECK(vc.at("issuer") == p->did);
    CHECK(vc.at("credentialSubject").at("id") == f.holder.did);
    CHECK(vc.at("credentialSubject").at("email") == "a@example.com");
  }
}

TEST_CASE("credential failures") {
  Fixture f;
  auto good = f.issue(f.issuer, f.holder.did);
  CHECK(outcome([&] { f.verifier.verify_vc(flip_payload_bit(good)); }).code == Errc::bad_signature);
  CHECK(outcome([&] { f.verifier.verify_vc("a.b"); }).code == Errc::malformed_jws);

  // Signed by a key that is not the issuer's.
  auto mallory = key_party();
  Party impostor{mallory.key, f.issuer.did, f.issuer.kid};
  CHECK(outcome([&] { f.verifier.verify_vc(f.issue(impostor, f.holder.did)); }).code ==
        Errc::bad_signature);

  auto expired = f.issue(f.issuer, f.holder.did, -7200, -3600);
  CHECK(outcome([&] { f.verifier.verify_vc(expired); }).code == Errc::expired);
  auto future = f.issue(f.issuer, f.holder.did, 3600);
  CHECK(outcome([&] { f.verifier.verify_vc(future); }).code == Errc::not_yet_valid);

  // The skew allowance is 60 seconds either way.
  auto edge = f.issue(f.issuer, f.holder.did, -100, -59);
  CHECK_NOTHROW(f.verifier.verify_vc(edge));
  f.clock.advance(2);
  CHECK(outcome([&] { f.verifier.verify_vc(edge); }).code == Errc::expired);

  CHECK(outcome([&] { f.verifier.verify_vc(f.issue({f.issuer.key, "did:ethr:0x1", "did:ethr:0x1#k"}, "x")); })
            .code == Errc::unsupported_method);
}

TEST_CASE("presentation checks") {
  Fixture f;
  auto vc = f.issue(f.web_issuer, f.holder.did);
  auto vp = f.present({vc});
  auto verified = f.verifier.verify_vp(vp, "n-1", "did:key:rp");
  CHECK(verified.holder_did == f.holder.did);
  REQUIRE(verified.credentials.size() == 1);
  CHECK(verified.credentials[0].at("issuer") == f.web_issuer.did);

  CHECK(outcome([&] { f.verifier.verify_vp(flip_payload_bit(vp), "n-1", "did:key:rp"); }).code ==
        Errc::bad_signature);
  CHECK(outcome([&] { f.verifier.verify_vp(vp, "n-2", "did:key:rp"); }).code ==
        Errc::challenge_mismatch);
  CHECK(outcome([&] { f.verifier.verify_vp(vp, "n-1", "did:key:other"); }).code ==
        Errc::audience_mismatch);

  auto stranger = key_party();
  auto not_mine = f.present({f.issue(f.issuer, stranger.did)});
  CHECK(outcome([&] { f.verifier.verify_vp(not_mine, "n-1", "did:key:rp"); }).code ==
        Errc::holder_binding_violation);

  auto bad_inner = f.present({flip_payload_bit(vc)});
  auto o = outcome([&] { f.verifier.verify_vp(bad_inner, "n-1", "did:key:rp"); });
  CHECK(o.code == Errc::nested_vc_error);
  CHECK(o.cause == Errc::bad_signature);

  auto stale = f.present({f.issue(f.issuer, f.holder.did, -7200, -3600)});
  o = outcome([&] { f.verifier.verify_vp(stale, "n-1", "did:key:rp"); });
  CHECK(o.code == Errc::nested_vc_error);
  CHECK(o.cause == Errc::expired);

  f.clock.advance(301 + 60);
  CHECK(outcome([&] { f.verifier.verify_vp(vp, "n-1", "did:key:rp"); }).code == Errc::expired);
}

TEST_CASE("a credential envelope is not accepted as a presentation") {
  Fixture f;
  auto vc = f.issue(f.holder, f.holder.did);
  CHECK(outcome([&] { f.verifier.verify_vp(vc, "n-1", "did:key:rp"); }).code == Errc::malformed_jws);
}
