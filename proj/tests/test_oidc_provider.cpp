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
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"
#include "vcbridge/oidc_provider.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

Params query_of(const std::string& url) {
  auto q = url.find('?');
  REQUIRE(q != std::string::npos);
  return parse_form(url.substr(q + 1));
}

struct Fixture {
  testing::ManualClock clock;
  std::shared_ptr<session::MemoryStore> store = std::make_shared<session::MemoryStore>(clock.clock());
  crypto::SigningKey key = crypto::SigningKey::generate(crypto::KeyType::ed25519);
  oidc::Provider provider{{"https://bridge.example"},
                          {{"rp", "s3cr:et%", {"https://rp.example/cb"}},
                           {"multi", "m", {"https://a.example/cb", "https://b.example/cb"}}},
                          key,
                          store,
                          clock.clock()};

  Params authorize_query() const {
    return {{"client_id", "rp"}, {"redirect_uri", "https://rp.example/cb"},
            {"response_type", "code"}, {"scope", "openid"}, {"state", "st"}, {"nonce", "nn"}};
  }

  std::string login_challenge(const Params& q) {
    auto r = provider.authorize(q);
    REQUIRE(r.redirect);
    REQUIRE(r.location.starts_with("https://bridge.example/login?login_challenge="));
    return param(query_of(r.location), "login_challenge");
  }

  // Runs login and consent; returns the code.
  std::string code(const json& id_claims = {{"email", "a@example.com"}}) {
    auto lc = login_challenge(authorize_query());
    auto consent_url = provider.accept_login(lc, "did:key:z6Mkholder");
    auto cc = param(query_of(consent_url), "consent_challenge");
    claims::TokenPair pair;
    pair.id_token_claims = id_claims;
    auto back = provider.accept_consent(cc, pair);
    REQUIRE(back.starts_with("https://rp.example/cb?"));
    auto q = query_of(back);
    CHECK(param(q, "state") == "st");
    return param(q, "code");
  }

  Params token_form(const std::string& code) const {
    return {{"grant_type", "authorization_code"}, {"code", code},
            {"redirect_uri", "https://rp.example/cb"}, {"client_id", "rp"},
            {"client_secret", "s3cr:et%"}};
  }
};

Errc token_error(oidc::Provider& p, const Params& form,
                 const std::optional<std::string>& auth = std::nullopt) {
  try {
    p.token(form, auth);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("token request unexpectedly succeeded");
  return Errc::protocol_error;
}

}  // namespace

TEST_CASE("client configuration") {
  auto clients = oidc::parse_clients(
      R"([{"client_id":"a","client_secret":"b","redirect_uris":["https://x/cb"]}])");
  REQUIRE(clients.size() == 1);
  CHECK(clients[0].redirect_uris == std::vector<std::string>{"https://x/cb"});
  CHECK_THROWS_AS(oidc::parse_clients("{"), Error);
  CHECK_THROWS_AS(oidc::parse_clients("{}"), Error);
  CHECK_THROWS_AS(oidc::parse_clients(R"([{"client_id":"a","client_secret":"b","redirect_uris":["/cb"]}])"),
                  Error);
  CHECK_THROWS_AS(
      oidc::parse_clients(
          R"([{"client_id":"a","client_secret":"b","redirect_uris":["https://x"]},{"client_id":"a","client_secret":"c","redirect_uris":["https://y"]}])"),
      Error);
}

TEST_CASE("discovery and keys") {
  Fixture f;
  auto d = f.provider.discovery();
  CHECK(d.at("issuer") == "https://bridge.example");
  CHECK(d.at("authorization_endpoint") == "https://bridge.example/authorize");
  CHECK(d.at("token_endpoint") == "https://bridge.example/token");
  CHECK(d.at("jwks_uri") == "https://bridge.example/jwks");
  CHECK(d.at("response_types_supported") == json{"code"});
  auto jwks = f.provider.jwks();
  REQUIRE(jwks.at("keys").size() == 1);
  CHECK(jwks["keys"][0].at("kid") == f.key.public_key().thumbprint());
  CHECK(crypto::PublicKey::from_jwk(jwks["keys"][0]) == f.key.public_key());
  CHECK_FALSE(jwks["keys"][0].contains("d"));
}

TEST_CASE("authorization request validation") {
  Fixture f;
  auto q = f.authorize_query();

  auto unknown = q;
  unknown.erase("client_id");
  unknown.emplace("client_id", "nobody");
  CHECK_FALSE(f.provider.authorize(unknown).redirect);

  auto foreign = q;
  foreign.erase("redirect_uri");
  foreign.emplace("redirect_uri", "https://evil.example/cb");
  CHECK_FALSE(f.provider.authorize(foreign).redirect);

  auto implicit = q;
  implicit.erase("redirect_uri");
  CHECK(f.provider.authorize(implicit).redirect);
  Params ambiguous{{"client_id", "multi"}, {"response_type", "code"}, {"scope", "openid"}};
  CHECK_FALSE(f.provider.authorize(ambiguous).redirect);

  auto expect_redirect_error = [&](Params p, const char* error) {
    auto r = f.provider.authorize(p);
    REQUIRE(r.redirect);
    CHECK(r.location.starts_with("https://rp.example/cb?"));
    auto back = query_of(r.location);
    CHECK(param(back, "error") == error);
    CHECK(param(back, "state") == "st");
  };
  auto token_flow = q;
  token_flow.erase("response_type");
  token_flow.emplace("response_type", "token");
  expect_redirect_error(token_flow, "unsupported_response_type");
  auto no_openid = q;
  no_openid.erase("scope");
  no_openid.emplace("scope", "profile email");
  expect_redirect_error(no_openid, "invalid_scope");
  auto no_type = q;
  no_type.erase("response_type");
  expect_redirect_error(no_type, "invalid_request");

  auto session = f.provider.login_request(f.login_challenge(q));
  CHECK(session.client_id == "rp");
  CHECK(session.nonce == "nn");
  CHECK(session.state == "st");
  CHECK(session.status == oidc::SessionStatus::awaiting_login);
}

TEST_CASE("login and consent state machine") {
  Fixture f;
  auto lc = f.login_challenge(f.authorize_query());
  CHECK_THROWS_AS(f.provider.login_request("nope"), Error);
  auto consent_url = f.provider.accept_login(lc, "did:key:z6Mkholder");
  CHECK(consent_url.starts_with("https://bridge.example/consent?consent_challenge="));
  try {
    f.provider.accept_login(lc, "did:key:z6Mkother");
    FAIL("second login accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::wrong_state);
  }
  auto cc = param(query_of(consent_url), "consent_challenge");
  CHECK(f.provider.consent_request(cc).subject_did == "did:key:z6Mkholder");

  claims::TokenPair reserved;
  reserved.id_token_claims = {{"sub", "forged"}};
  try {
    f.provider.accept_consent(cc, reserved);
    FAIL("reserved claim accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::path_conflict);
  }
  f.provider.accept_consent(cc, claims::TokenPair{});
  try {
    f.provider.accept_consent(cc, claims::TokenPair{});
    FAIL("consent given twice");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::wrong_state || e.code() == Errc::unknown_challenge));
  }

  auto late = f.login_challenge(f.authorize_query());
  f.clock.advance(session::kDefaultTtlSeconds);
  CHECK_THROWS_AS(f.provider.login_request(late), Error);
}

TEST_CASE("token endpoint") {
  Fixture f;
  auto code = f.code();
  auto tokens = f.provider.token(f.token_form(code), std::nullopt);
  auto id = jws::parse(tokens.id_token);
  CHECK(jws::verify(id, f.key.public_key()));
  CHECK(id.header.at("typ") == "JWT");
  CHECK(id.header.at("kid") == f.provider.key_id());
  auto claims = id.payload_json();
  CHECK(claims.at("iss") == "https://bridge.example");
  CHECK(claims.at("sub") == "did:key:z6Mkholder");
  CHECK(claims.at("aud") == "rp");
  CHECK(claims.at("nonce") == "nn");
  CHECK(claims.at("email") == "a@example.com");
  CHECK(claims.at("exp").get<std::int64_t>() - claims.at("iat").get<std::int64_t>() == 3600);
  auto access = jws::parse(tokens.access_token);
  CHECK(jws::verify(access, f.key.public_key()));
  CHECK(access.header.at("typ") == "at+jwt");
  auto wire = tokens.to_json();
  CHECK(wire.at("token_type") == "bearer");
  CHECK_FALSE(wire.contains("refresh_token"));

  CHECK(token_error(f.provider, f.token_form(code)) == Errc::invalid_grant);
}

TEST_CASE("token endpoint rejections") {
  Fixture f;
  auto form = f.token_form(f.code());

  auto wrong_secret = form;
  wrong_secret.erase("client_secret");
  wrong_secret.emplace("client_secret", "s3cr:eX%");
  CHECK(token_error(f.provider, wrong_secret) == Errc::invalid_client);

  auto wrong_grant = form;
  wrong_grant.erase("grant_type");
  wrong_grant.emplace("grant_type", "refresh_token");
  CHECK(token_error(f.provider, wrong_grant) == Errc::unsupported_grant_type);

  auto no_code = form;
  no_code.erase("code");
  CHECK(token_error(f.provider, no_code) == Errc::invalid_request);

  auto other_redirect = form;
  other_redirect.erase("redirect_uri");
  other_redirect.emplace("redirect_uri", "https://rp.example/other");
  CHECK(token_error(f.provider, other_redirect) == Errc::invalid_grant);

  // The failed redemption above consumed the code.
  CHECK(token_error(f.provider, form) == Errc::invalid_grant);

  // Codes live for 60 seconds.
  auto stale = f.token_form(f.code());
  f.clock.advance(session::kAuthCodeTtlSeconds);
  CHECK(token_error(f.provider, stale) == Errc::invalid_grant);

  auto tampered = f.token_form(f.code() + "x");
  CHECK(token_error(f.provider, tampered) == Errc::invalid_grant);
}

TEST_CASE("client_secret_basic uses form-encoded credentials") {
  Fixture f;
  auto form = f.token_form(f.code());
  form.erase("client_id");
  form.erase("client_secret");
  // RFC 6749 section 2.3.1: id and secret are form-urlencoded before Basic.
  const std::string basic = "Basic " + base64_encode(to_bytes("rp:s3cr%3Aet%25"));
  CHECK_NOTHROW(f.provider.token(form, basic));

  auto form2 = f.token_form(f.code());
  CHECK(token_error(f.provider, form2, basic) == Errc::invalid_request);
  form2.erase("client_id");
  form2.erase("client_secret");
  CHECK(token_error(f.provider, form2, std::string("Basic !!!")) == Errc::invalid_client);
}

TEST_CASE("wiping the store invalidates issued codes") {
  Fixture f;
  auto form = f.token_form(f.code());
  f.store->clear();
  CHECK(token_error(f.provider, form) == Errc::invalid_grant);
}
