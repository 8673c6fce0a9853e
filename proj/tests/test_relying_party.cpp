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

#include <regex>

#include "test_support.hpp"
#include "vcbridge/credential.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"
#include "vcbridge/relying_party.hpp"
#include "vcbridge/status_list.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

Params query_of(const std::string& url) { return parse_form(url.substr(url.find('?') + 1)); }

struct Fixture {
  testing::ManualClock clock;
  std::shared_ptr<testing::MapFetcher> fetcher = std::make_shared<testing::MapFetcher>();
  std::shared_ptr<session::MemoryStore> store = std::make_shared<session::MemoryStore>(clock.clock());
  crypto::SigningKey issuer = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  std::string issuer_did = did::did_key(issuer.public_key());
  crypto::SigningKey holder = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  std::string holder_did = did::did_key(holder.public_key());
  crypto::SigningKey bridge_key = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  std::shared_ptr<oidc::Provider> provider;
  std::unique_ptr<rp::RelyingParty> relying_party;
  Bytes status_bits = Bytes(16 * 1024, 0);
  const std::string status_url = "https://issuer.example/status/1";

  explicit Fixture(std::string external_url = "https://bridge.example",
                   std::optional<json> override_descriptors = std::nullopt) {
    provider = std::make_shared<oidc::Provider>(
        oidc::ProviderConfig{external_url},
        std::vector<oidc::ClientConfig>{{"rp", "secret", {"https://rp.example/cb"}}},
        crypto::SigningKey::generate(crypto::KeyType::ed25519), store, clock.clock());
    auto verifier = std::make_shared<vc::Verifier>(
        std::make_shared<did::Resolver>(fetcher, clock.clock()), fetcher, clock.clock());
    rp::RelyingPartyConfig cfg{external_url, bridge_key, policy(), override_descriptors};
    relying_party = std::make_unique<rp::RelyingParty>(cfg, provider, verifier, store, clock.clock());
    publish_status();
  }

  policy::LoginPolicy policy() const {
    return policy::parse_policy(json::array(
        {{{"credentialID", "mail"},
          {"patterns",
           {{{"issuer", issuer_did},
             {"claims", {{{"claimPath", "$.credentialSubject.email"}, {"token", "id_token"}}}}}}}}})
                                    .dump());
  }

  void publish_status() {
    vc::CredentialSpec spec;
    spec.issuer_did = issuer_did;
    spec.key_id = did::did_key_id(issuer.public_key());
    spec.issued_at = clock.now->load();
    spec.vc_override =
        status::make_list_credential(issuer_did, status_url, status::encode_list(status_bits));
    fetcher->put(status_url, vc::issue_credential(spec, issuer));
  }

  std::string login_challenge() {
    Params q{{"client_id", "rp"}, {"redirect_uri", "https://rp.example/cb"},
             {"response_type", "code"}, {"scope", "openid"}, {"state", "s"}};
    auto r = provider->authorize(q);
    REQUIRE(r.redirect);
    return param(query_of(r.location), "login_challenge");
  }

  std::string credential(std::optional<std::uint64_t> status_index = std::nullopt) {
    vc::CredentialSpec spec;
    spec.issuer_did = issuer_did;
    spec.key_id = did::did_key_id(issuer.public_key());
    spec.subject_did = holder_did;
    spec.subject_claims = {{"email", "h@example.com"}};
    spec.issued_at = clock.now->load() - 10;
    if (status_index) spec.credential_status = status::make_entry(status_url, *status_index);
    return vc::issue_credential(spec, issuer);
  }

  std::string vp(const std::string& nonce, const std::vector<std::string>& vcs) {
    vc::PresentationSpec spec;
    spec.holder_did = holder_did;
    spec.key_id = did::did_key_id(holder.public_key());
    spec.credentials = vcs;
    spec.audience = relying_party->client_did();
    spec.nonce = nonce;
    spec.issued_at = clock.now->load();
    return vc::sign_presentation(spec, holder);
  }
};

Errc submit_error(rp::RelyingParty& r, const Params& form) {
  try {
    r.submit_presentation(form);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("submission accepted");
  return Errc::protocol_error;
}

}  // namespace

TEST_CASE("invocation URI shape and length") {
  Fixture f;
  auto inv = f.relying_party->begin_login(f.login_challenge());
  CHECK(std::regex_match(inv.login_id,
                         std::regex("[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}")));
  CHECK(inv.uri == "openid-vc://?client_id=" + f.relying_party->client_did() +
                       "&request_uri=https%3A%2F%2Fbridge.example%2Fapi%2FpresentCredential%3Flogin_id%3D" +
                       inv.login_id);
  CHECK(inv.uri.size() <= rp::kMaxInvocationUriLength);

  // A 100-character public URL still fits.
  Fixture longer("https://" + std::string(80, 'a') + ".example.org");
  auto inv2 = longer.relying_party->begin_login(longer.login_challenge());
  CHECK(inv2.uri.size() <= rp::kMaxInvocationUriLength);

  CHECK_THROWS_AS(f.relying_party->begin_login("unknown"), Error);
}

TEST_CASE("request object") {
  Fixture f;
  auto inv = f.relying_party->begin_login(f.login_challenge());
  auto token = f.relying_party->presentation_request(inv.login_id);
  auto parsed = jws::parse(token);
  CHECK(parsed.header.at("typ") == "oauth-authz-req+jwt");
  CHECK(parsed.header.at("kid") == did::did_key_id(f.bridge_key.public_key()));
  CHECK(jws::verify(parsed, did::decode_did_key(f.relying_party->client_did())));
  auto p = parsed.payload_json();
  CHECK(p.at("client_id") == f.relying_party->client_did());
  CHECK(p.at("iss") == f.relying_party->client_did());
  CHECK(p.at("client_id_scheme") == "did");
  CHECK(p.at("response_mode") == "direct_post");
  CHECK(p.at("response_type") == "vp_token");
  CHECK(p.at("response_uri") == "https://bridge.example/api/presentCredential");
  CHECK(p.at("nonce") == inv.login_id);
  CHECK(p.at("state") == inv.login_id);
  CHECK(p.at("presentation_definition").at("input_descriptors")[0].at("id") == "mail_pattern0");
  CHECK(p.at("exp").get<std::int64_t>() - p.at("iat").get<std::int64_t>() == 300);

  try {
    f.relying_party->presentation_request("nope");
    FAIL("unknown login_id served");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_login_id);
  }
}

TEST_CASE("descriptor override is embedded verbatim") {
  json descriptors = json::parse(
      R"([{"id":"custom","constraints":{"fields":[{"path":["$.type"],"filter":{"type":"array","contains":{"const":"EmailPass"}}}]}}])");
  Fixture f("https://bridge.example", descriptors);
  auto inv = f.relying_party->begin_login(f.login_challenge());
  auto p = jws::parse(f.relying_party->presentation_request(inv.login_id)).payload_json();
  CHECK(p.at("presentation_definition").at("input_descriptors") == descriptors);
  CHECK_FALSE(p.at("presentation_definition").contains("submission_requirements"));
}

TEST_CASE("accepted submission, polling and consent") {
  Fixture f;
  auto lc = f.login_challenge();
  auto inv = f.relying_party->begin_login(lc);
  CHECK_FALSE(f.relying_party->poll_redirect(lc));

  Params form{{"vp_token", f.vp(inv.login_id, {f.credential(5)})}, {"state", inv.login_id}};
  auto sub = f.relying_party->submit_presentation(form);
  CHECK(sub.holder_did == f.holder_did);
  CHECK(sub.login_challenge == lc);
  CHECK(sub.tokens.id_token_claims == json{{"email", "h@example.com"}});

  auto next = f.relying_party->poll_redirect(lc);
  REQUIRE(next);
  CHECK(next->starts_with("https://bridge.example/consent?consent_challenge="));
  CHECK_FALSE(f.relying_party->poll_redirect(lc));

  auto cc = param(query_of(*next), "consent_challenge");
  auto back = f.relying_party->complete_consent(cc);
  CHECK(back.starts_with("https://rp.example/cb?code="));

  // The login_id is single use.
  CHECK(submit_error(*f.relying_party, form) == Errc::challenge_mismatch);
}

TEST_CASE("correlation without state, and vp_token wrappers") {
  Fixture f;
  auto inv = f.relying_party->begin_login(f.login_challenge());
  auto vp = f.vp(inv.login_id, {f.credential()});
  Params form{{"vp_token", json::array({vp}).dump()}};
  CHECK(f.relying_party->submit_presentation(form).holder_did == f.holder_did);
}

TEST_CASE("rejections consume the login_id") {
  Fixture f;
  auto inv = f.relying_party->begin_login(f.login_challenge());
  Params wrong{{"vp_token", f.vp("other-nonce", {f.credential()})}, {"state", inv.login_id}};
  CHECK(submit_error(*f.relying_party, wrong) == Errc::challenge_mismatch);
  Params right{{"vp_token", f.vp(inv.login_id, {f.credential()})}, {"state", inv.login_id}};
  CHECK(submit_error(*f.relying_party, right) == Errc::challenge_mismatch);
}

TEST_CASE("revoked and untrusted credentials") {
  Fixture f;
  status::set_bit(f.status_bits, 9);
  f.publish_status();
  auto inv = f.relying_party->begin_login(f.login_challenge());
  Params revoked{{"vp_token", f.vp(inv.login_id, {f.credential(9)})}, {"state", inv.login_id}};
  CHECK(submit_error(*f.relying_party, revoked) == Errc::revoked);

  auto other = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  vc::CredentialSpec spec;
  spec.issuer_did = did::did_key(other.public_key());
  spec.key_id = did::did_key_id(other.public_key());
  spec.subject_did = f.holder_did;
  spec.subject_claims = {{"email", "h@example.com"}};
  spec.issued_at = f.clock.now->load();
  auto inv2 = f.relying_party->begin_login(f.login_challenge());
  Params untrusted{{"vp_token", f.vp(inv2.login_id, {vc::issue_credential(spec, other)})},
                   {"state", inv2.login_id}};
  CHECK(submit_error(*f.relying_party, untrusted) == Errc::no_match);
}

TEST_CASE("consent fails when processed claims are gone") {
  Fixture f;
  auto lc = f.login_challenge();
  auto inv = f.relying_party->begin_login(lc);
  f.relying_party->submit_presentation(
      {{"vp_token", f.vp(inv.login_id, {f.credential()})}, {"state", inv.login_id}});
  auto next = f.relying_party->poll_redirect(lc);
  REQUIRE(next);
  f.store->take(session::Namespace::subject_to_claims, f.holder_did);
  try {
    f.relying_party->complete_consent(param(query_of(*next), "consent_challenge"));
    FAIL("consent without claims");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_claims);
  }
}
