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

#include "vcbridge/oidc_client.hpp"

#include <regex>
#include <thread>

#include "vcbridge/crypto.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/jws.hpp"

namespace vcbridge::client {
namespace {

struct StepFailure : std::runtime_error {
  StepFailure(std::string step, const std::string& what)
      : std::runtime_error(what), step(std::move(step)) {}
  std::string step;
};

[[noreturn]] void fail(const std::string& step, const std::string& what) {
  throw StepFailure(step, what);
}

json parse_json(const std::string& step, const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) fail(step, "response is not JSON");
  return j;
}

std::string attribute(const std::string& html, const std::string& name) {
  std::smatch m;
  std::regex re(name + "=\"([^\"]*)\"");
  if (!std::regex_search(html, m, re)) return {};
  return html_unescape(m[1].str());
}

Params query_params(const std::string& url) {
  auto q = url.find('?');
  if (q == std::string::npos) return {};
  auto end = url.find('#', q);
  return parse_form(std::string_view(url).substr(q + 1, end == std::string::npos ? end : end - q - 1));
}

std::string with_query(const std::string& url, const Params& params) {
  return url + (url.find('?') == std::string::npos ? "?" : "&") + encode_form(params);
}

std::string absolute(const std::string& base, const std::string& location) {
  if (location.find("://") != std::string::npos) return location;
  return split_url(base).origin + location;
}

std::string tamper_code(std::string code) {
  if (code.empty()) return "x";
  code.back() = code.back() == 'A' ? 'B' : 'A';
  return code;
}

json verify_token(const std::string& step, const std::string& token, const json& jwks,
                  json* header_out) {
  jws::CompactJws parsed;
  try {
    parsed = jws::parse(token);
  } catch (const Error& e) {
    fail(step, e.what());
  }
  const std::string kid = parsed.header.value("kid", "");
  for (const auto& key : jwks.value("keys", json::array())) {
    if (key.value("kid", "") != kid) continue;
    if (!jws::verify(parsed, crypto::PublicKey::from_jwk(key))) fail(step, "signature is invalid");
    if (header_out) *header_out = parsed.header;
    return parsed.payload_json();
  }
  fail(step, "no JWKS key matches kid '" + kid + "'");
}

}  // namespace

json FlowReport::to_json() const {
  json j{{"ok", ok},
         {"invocation_uri", invocation_uri},
         {"wallet_response", wallet_response},
         {"token_response", token_response},
         {"id_token", id_token},
         {"access_token", access_token}};
  if (!ok) {
    j["failed_step"] = failed_step;
    j["error"] = error;
  }
  return j;
}

FlowReport run_flow(const FlowOptions& o) {
  FlowReport report;
  http::Agent browser("browser", o.transcript, o.ca_file);
  http::Agent backend("client", o.transcript, o.ca_file);
  std::string bridge = o.bridge_url;
  while (bridge.size() > 1 && bridge.back() == '/') bridge.pop_back();
  const std::string state = o.state.value_or(crypto::random_token(16));
  const std::string nonce = o.nonce.value_or(crypto::random_token(16));

  try {
    auto disc_res = backend.get(bridge + "/.well-known/openid-configuration");
    if (disc_res.status != 200) fail("discovery", "HTTP " + std::to_string(disc_res.status));
    json discovery = parse_json("discovery", disc_res.body);
    if (discovery.value("issuer", "") != bridge) {
      fail("discovery", "issuer " + discovery.value("issuer", "") + " differs from " + bridge);
    }
    auto jwks_res = backend.get(discovery.value("jwks_uri", ""));
    if (jwks_res.status != 200) fail("jwks", "HTTP " + std::to_string(jwks_res.status));
    json jwks = parse_json("jwks", jwks_res.body);

    Params auth{{"response_type", "code"},
                {"client_id", o.client_id},
                {"scope", o.scope},
                {"state", state},
                {"nonce", nonce}};
    if (!o.redirect_uri.empty()) auth.emplace("redirect_uri", o.redirect_uri);
    auto authz = browser.get(with_query(discovery.value("authorization_endpoint", ""), auth));
    if (authz.status != 302 || authz.location.empty()) {
      fail("authorize", "expected a redirect, got HTTP " + std::to_string(authz.status));
    }
    auto early = query_params(authz.location);
    if (!param(early, "error").empty()) fail("authorize", param(early, "error"));

    auto login = browser.get(absolute(bridge, authz.location));
    if (login.status != 200) fail("login", "HTTP " + std::to_string(login.status));
    report.invocation_uri = attribute(login.body, "data-uri");
    report.login_challenge = attribute(login.body, "data-login-challenge");
    if (report.invocation_uri.empty() || report.login_challenge.empty()) {
      fail("login", "login page lacks the invocation URI");
    }
    if (o.on_invocation) o.on_invocation(report.invocation_uri);
    const std::string poll_url =
        bridge + "/api/redirect?login_challenge=" + url_encode(report.login_challenge);

    auto poll = [&]() -> std::optional<std::string> {
      auto res = browser.get(poll_url);
      if (res.status != 200) fail("poll", "HTTP " + std::to_string(res.status));
      json body = parse_json("poll", res.body);
      if (body.value("status", "") == "ready") return body.value("redirect", "");
      return std::nullopt;
    };
    if (poll()) fail("poll", "ready before any submission");

    if (o.auto_wallet) {
      wallet::PresentOptions wo = o.wallet_options;
      if (!wo.transcript) wo.transcript = o.transcript;
      if (wo.ca_file.empty()) wo.ca_file = o.ca_file;
      wallet::PresentResult presented;
      try {
        presented = wallet::present(report.invocation_uri, *o.auto_wallet, wo);
      } catch (const Error& e) {
        fail("wallet", std::string(vcbridge::to_string(e.code())) + ": " + e.what());
      }
      report.wallet_response = presented.response;
      if (presented.status != 200) {
        std::string err = presented.response.is_object()
                              ? presented.response.value("error", "rejected")
                              : std::string("rejected");
        fail("wallet", err);
      }
    }

    std::optional<std::string> next;
    const auto deadline = std::chrono::steady_clock::now() + o.poll_timeout;
    while (!(next = poll())) {
      if (std::chrono::steady_clock::now() >= deadline) fail("poll", "timed out waiting for the wallet");
      std::this_thread::sleep_for(o.poll_interval);
    }

    auto consent = browser.get(absolute(bridge, *next));
    if (consent.status != 302 || consent.location.empty()) {
      fail("consent", "expected a redirect, got HTTP " + std::to_string(consent.status));
    }
    auto callback = query_params(consent.location);
    if (!param(callback, "error").empty()) fail("consent", param(callback, "error"));
    if (param(callback, "state") != state) fail("consent", "state mismatch");
    std::string code = param(callback, "code");
    if (code.empty()) fail("consent", "no authorization code");
    if (o.on_code) o.on_code(code);
    if (o.tamper_code) code = tamper_code(code);

    std::string redirect_uri = o.redirect_uri;
    if (redirect_uri.empty()) redirect_uri = consent.location.substr(0, consent.location.find('?'));
    Params form{{"grant_type", "authorization_code"}, {"code", code}, {"redirect_uri", redirect_uri}};
    std::multimap<std::string, std::string> headers;
    if (o.basic_auth) {
      headers.emplace("Authorization",
                      "Basic " + base64_encode(to_bytes(url_encode(o.client_id) + ":" +
                                                        url_encode(o.client_secret))));
    } else {
      form.emplace("client_id", o.client_id);
      form.emplace("client_secret", o.client_secret);
    }
    const std::string token_url = discovery.value("token_endpoint", "");
    auto token = backend.post_form(token_url, encode_form(form), headers);
    report.token_response = json::parse(token.body, nullptr, false);
    if (token.status != 200) {
      fail("token", report.token_response.is_object()
                        ? report.token_response.value("error", "HTTP " + std::to_string(token.status))
                        : "HTTP " + std::to_string(token.status));
    }
    if (report.token_response.contains("refresh_token")) fail("token", "unexpected refresh_token");

    report.id_token = verify_token("id_token", report.token_response.value("id_token", ""), jwks,
                                   &report.id_token_header);
    const auto now = o.clock();
    if (report.id_token.value("iss", "") != discovery.value("issuer", "")) fail("id_token", "iss mismatch");
    if (report.id_token.value("aud", "") != o.client_id) fail("id_token", "aud mismatch");
    if (report.id_token.value("nonce", "") != nonce) fail("id_token", "nonce mismatch");
    if (!report.id_token.contains("exp") || !report.id_token["exp"].is_number() ||
        report.id_token["exp"].get<std::int64_t>() + kClockSkewSeconds < now) {
      fail("id_token", "token expired");
    }
    report.access_token =
        verify_token("access_token", report.token_response.value("access_token", ""), jwks, nullptr);

    if (o.redeem_twice) {
      auto again = backend.post_form(token_url, encode_form(form), headers);
      json body = json::parse(again.body, nullptr, false);
      if (again.status != 200) {
        fail("token_replay", body.is_object() ? body.value("error", "rejected") : "rejected");
      }
      fail("token_replay", "authorization code was accepted twice");
    }
    report.ok = true;
  } catch (const StepFailure& f) {
    report.failed_step = f.step;
    report.error = f.what();
  } catch (const Error& e) {
    report.failed_step = report.failed_step.empty() ? "transport" : report.failed_step;
    report.error = std::string(vcbridge::to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    report.failed_step = "transport";
    report.error = e.what();
  }
  return report;
}

}  // namespace vcbridge::client
