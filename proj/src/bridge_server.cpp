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

#include "vcbridge/bridge_server.hpp"

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "vcbridge/claims.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/pex.hpp"

namespace vcbridge::server {
namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_header("Cache-Control", "no-store");
  res.set_content(body.dump(), kJson);
}

json error_body(const Error& e) {
  json body{{"error", vcbridge::to_string(e.code())}, {"error_description", e.what()}};
  if (e.cause()) body["cause"] = vcbridge::to_string(*e.cause());
  return body;
}

void send_html(httplib::Response& res, int status, const std::string& html) {
  res.status = status;
  res.set_header("Cache-Control", "no-store");
  res.set_content(html, "text/html; charset=utf-8");
}

std::string error_page(const std::string& message) {
  return "<!doctype html><html><head><meta charset=\"utf-8\"><title>Sign-in error</title>"
         "</head><body><h1>Sign-in error</h1><p>" +
         html_escape(message) + "</p></body></html>";
}

Params query_of(const httplib::Request& req) {
  return Params(req.params.begin(), req.params.end());
}

std::string query_param(const httplib::Request& req, const char* name) {
  return req.has_param(name) ? req.get_param_value(name) : std::string();
}

crypto::SigningKey key_from_env(const std::string& text, const char* name) {
  json jwk = json::parse(text, nullptr, false);
  if (jwk.is_discarded() || !jwk.is_object()) {
    throw Error(Errc::syntax_error, std::string(name) + " is not a JSON Web Key");
  }
  return crypto::SigningKey::from_jwk(jwk);
}

}  // namespace

void validate_policy(const policy::LoginPolicy& policy) {
  for (const auto& expected : policy.expected_credentials) {
    for (const auto& pattern : expected.patterns) {
      for (const auto& claim : pattern.claims) claims::resolve_target(claim);
    }
  }
}

ServerConfig config_from_env(const EnvLookup& lookup) {
  auto required = [&](const std::string& name) {
    auto v = lookup(name);
    if (!v || v->empty()) throw Error(Errc::invalid_request, name + " must be set");
    return *v;
  };
  ServerConfig cfg;
  cfg.did_key = key_from_env(required("DID_KEY_JWK"), "DID_KEY_JWK");
  cfg.external_url = required("EXTERNAL_URL");
  cfg.policy = policy::load_policy(required("LOGIN_POLICY"));
  validate_policy(cfg.policy);
  if (auto p = lookup("PEX_DESCRIPTOR_OVERRIDE"); p && !p->empty()) {
    if (!std::filesystem::exists(*p)) {
      throw Error(Errc::syntax_error, "PEX_DESCRIPTOR_OVERRIDE file not found: " + *p);
    }
    cfg.descriptor_override = pex::load_descriptor_override(*p);
  }
  cfg.clients = oidc::load_clients(required("OIDC_CLIENTS"));
  if (auto k = lookup("OIDC_SIGNING_JWK"); k && !k->empty()) {
    cfg.signing_key = key_from_env(*k, "OIDC_SIGNING_JWK");
  }
  if (auto s = lookup("SESSION_STORE_URL")) cfg.store_url = *s;
  if (auto ca = lookup("DID_WEB_CA_FILE")) cfg.fetch.ca_file = *ca;
  if (auto h = lookup("LISTEN_HOST"); h && !h->empty()) cfg.listen_host = *h;
  if (auto p = lookup("LISTEN_PORT"); p && !p->empty()) {
    try {
      cfg.listen_port = std::stoi(*p);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_request, "LISTEN_PORT must be a number");
    }
  }
  if (auto d = lookup("STATIC_DIR")) cfg.static_dir = *d;
  return cfg;
}

ServerConfig config_from_env() {
  return config_from_env([](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  });
}

Bridge::Bridge(ServerConfig cfg) : config(std::move(cfg)) {
  if (!config.did_key) throw Error(Errc::invalid_request, "the bridge DID key is required");
  if (config.external_url.empty()) throw Error(Errc::invalid_request, "external URL is required");
  validate_policy(config.policy);
  store = config.store ? config.store : session::make_store(config.store_url, config.clock);
  fetcher = config.fetcher ? config.fetcher : std::make_shared<http::HttpsFetcher>(config.fetch);
  resolver = std::make_shared<did::Resolver>(fetcher, config.clock);
  verifier = std::make_shared<vc::Verifier>(resolver, fetcher, config.clock);
  auto signing = config.signing_key ? *config.signing_key
                                    : crypto::SigningKey::generate(crypto::KeyType::p256);
  provider = std::make_shared<oidc::Provider>(oidc::ProviderConfig{config.external_url},
                                              config.clients, signing, store, config.clock);
  relying_party = std::make_shared<rp::RelyingParty>(
      rp::RelyingPartyConfig{config.external_url, *config.did_key, config.policy,
                             config.descriptor_override},
      provider, verifier, store, config.clock);
}

std::string login_page(const std::string& login_challenge, const std::string& invocation_uri) {
  return "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
         "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n"
         "<title>Sign in</title>\n</head>\n<body>\n"
         "<main id=\"login\" data-login-challenge=\"" +
         html_escape(login_challenge) + "\" data-uri=\"" + html_escape(invocation_uri) +
         "\">\n<h1>Scan the code to sign in!</h1>\n<div id=\"qr\"></div>\n"
         "<noscript><a href=\"" +
         html_escape(invocation_uri) +
         "\">Open in wallet</a></noscript>\n</main>\n"
         "<script src=\"/static/login.js\" defer></script>\n</body>\n</html>\n";
}

BridgeServer::BridgeServer(ServerConfig config)
    : bridge_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::install_routes() {
  auto& srv = *server_;
  Bridge& b = bridge_;

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    std::cerr << "vcbridge: unhandled error: " << what << "\n";
    send_json(res, 500, {{"error", "server_error"}});
  });

  srv.Get("/.well-known/openid-configuration", [&b](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, b.provider->discovery());
  });
  srv.Get("/jwks", [&b](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, b.provider->jwks());
  });

  srv.Get("/authorize", [&b](const httplib::Request& req, httplib::Response& res) {
    auto result = b.provider->authorize(query_of(req));
    if (!result.redirect) {
      send_html(res, 400, error_page(result.error + ": " + result.error_description));
      return;
    }
    res.set_redirect(result.location, 302);
  });

  srv.Post("/token", [&b](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> authorization;
    if (req.has_header("Authorization")) authorization = req.get_header_value("Authorization");
    try {
      send_json(res, 200, b.provider->token(parse_form(req.body), authorization).to_json());
    } catch (const Error& e) {
      json body{{"error", vcbridge::to_string(e.code())}, {"error_description", e.what()}};
      if (e.code() == Errc::invalid_client) {
        if (authorization) res.set_header("WWW-Authenticate", "Basic realm=\"vcbridge\"");
        send_json(res, 401, body);
      } else {
        send_json(res, 400, body);
      }
    }
  });

  srv.Get("/login", [&b](const httplib::Request& req, httplib::Response& res) {
    const auto challenge = query_param(req, "login_challenge");
    try {
      auto inv = b.relying_party->begin_login(challenge);
      send_html(res, 200, login_page(challenge, inv.uri));
    } catch (const Error& e) {
      send_html(res, 404, error_page(e.what()));
    }
  });

  srv.Get("/api/invocation", [&b](const httplib::Request& req, httplib::Response& res) {
    try {
      auto inv = b.relying_party->begin_login(query_param(req, "login_challenge"));
      send_json(res, 200, {{"login_id", inv.login_id}, {"uri", inv.uri}});
    } catch (const Error& e) {
      send_json(res, 404, error_body(e));
    }
  });

  srv.Get("/api/presentCredential", [&b](const httplib::Request& req, httplib::Response& res) {
    try {
      auto request = b.relying_party->presentation_request(query_param(req, "login_id"));
      res.set_header("Cache-Control", "no-store");
      res.set_content(request, "application/oauth-authz-req+jwt");
    } catch (const Error& e) {
      send_json(res, 404, error_body(e));
    }
  });

  srv.Post("/api/presentCredential", [&b](const httplib::Request& req, httplib::Response& res) {
    try {
      b.relying_party->submit_presentation(parse_form(req.body));
      send_json(res, 200, json::object());
    } catch (const Error& e) {
      send_json(res, 400, error_body(e));
    }
  });

  srv.Get("/api/redirect", [&b](const httplib::Request& req, httplib::Response& res) {
    auto next = b.relying_party->poll_redirect(query_param(req, "login_challenge"));
    if (next) {
      send_json(res, 200, {{"status", "ready"}, {"redirect", *next}});
    } else {
      send_json(res, 200, {{"status", "pending"}});
    }
  });

  srv.Get("/consent", [&b](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_redirect(b.relying_party->complete_consent(query_param(req, "consent_challenge")),
                       302);
    } catch (const Error& e) {
      send_html(res, 400, error_page(std::string(vcbridge::to_string(e.code())) + ": " + e.what()));
    }
  });

  if (!b.config.static_dir.empty()) {
    srv.set_mount_point("/static", b.config.static_dir);
  }
}

void BridgeServer::listen() {
  if (!server_->listen(bridge_.config.listen_host, bridge_.config.listen_port)) {
    throw Error(Errc::invalid_request, "cannot listen on " + bridge_.config.listen_host + ":" +
                                           std::to_string(bridge_.config.listen_port));
  }
}

int BridgeServer::start() {
  int port = bridge_.config.listen_port;
  if (port == 0) {
    port = server_->bind_to_any_port(bridge_.config.listen_host);
  } else if (!server_->bind_to_port(bridge_.config.listen_host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(Errc::invalid_request, "cannot bind " + bridge_.config.listen_host);
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void BridgeServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vcbridge::server
