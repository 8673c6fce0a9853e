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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vcbridge/clock.hpp"
#include "vcbridge/crypto.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/http_fetch.hpp"
#include "vcbridge/oidc_provider.hpp"
#include "vcbridge/policy.hpp"
#include "vcbridge/relying_party.hpp"
#include "vcbridge/session_store.hpp"
#include "vcbridge/vc_verifier.hpp"

namespace httplib {
class Server;
}

namespace vcbridge::server {

using json = nlohmann::json;

struct ServerConfig {
  std::string external_url;
  std::optional<crypto::SigningKey> did_key;
  policy::LoginPolicy policy;
  std::optional<json> descriptor_override;
  std::vector<oidc::ClientConfig> clients;
  /// Token signing key; a fresh P-256 key when unset.
  std::optional<crypto::SigningKey> signing_key;
  /// Empty selects the in-memory store, otherwise `redis://host:port`.
  std::string store_url;
  http::FetchOptions fetch;
  std::string listen_host = "0.0.0.0";
  int listen_port = 3000;
  /// Served under /static when set, e.g. the compiled login page bundle.
  std::string static_dir;
  Clock clock = system_clock();

  // Test seams.
  std::shared_ptr<http::Fetcher> fetcher;
  std::shared_ptr<session::Store> store;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads DID_KEY_JWK, EXTERNAL_URL, LOGIN_POLICY, PEX_DESCRIPTOR_OVERRIDE,
/// OIDC_CLIENTS, OIDC_SIGNING_JWK, SESSION_STORE_URL, DID_WEB_CA_FILE,
/// LISTEN_HOST and LISTEN_PORT. Throws Error on missing or invalid settings.
ServerConfig config_from_env(const EnvLookup& lookup);
ServerConfig config_from_env();

/// Rejects policies whose claims cannot be mapped to a token location.
void validate_policy(const policy::LoginPolicy& policy);

/// The wired-up service components.
struct Bridge {
  explicit Bridge(ServerConfig config);

  ServerConfig config;
  std::shared_ptr<session::Store> store;
  std::shared_ptr<http::Fetcher> fetcher;
  std::shared_ptr<did::Resolver> resolver;
  std::shared_ptr<vc::Verifier> verifier;
  std::shared_ptr<oidc::Provider> provider;
  std::shared_ptr<rp::RelyingParty> relying_party;
};

std::string login_page(const std::string& login_challenge, const std::string& invocation_uri);

class BridgeServer {
 public:
  explicit BridgeServer(ServerConfig config);
  ~BridgeServer();

  Bridge& bridge() { return bridge_; }

  /// Blocks serving requests until stop().
  void listen();
  /// Binds (port 0 picks a free port), serves on a background thread and
  /// returns the bound port.
  int start();
  void stop();

 private:
  void install_routes();

  Bridge bridge_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace vcbridge::server
