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

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "vcbridge/clock.hpp"
#include "vcbridge/http_agent.hpp"
#include "vcbridge/wallet.hpp"

namespace vcbridge::client {

using json = nlohmann::json;

struct FlowOptions {
  std::string bridge_url;
  std::string client_id;
  std::string client_secret;
  /// Defaults to the first registered URI on the bridge side when empty.
  std::string redirect_uri;
  std::string scope = "openid";
  /// Random when unset.
  std::optional<std::string> state;
  std::optional<std::string> nonce;
  bool basic_auth = true;

  /// Drives the wallet lane in-process when set.
  std::optional<wallet::Vault> auto_wallet;
  /// Called with the invocation URI once the login page is loaded.
  std::function<void(const std::string&)> on_invocation;
  wallet::PresentOptions wallet_options;
  /// Called with the authorization code before it is redeemed.
  std::function<void(const std::string&)> on_code;

  bool tamper_code = false;
  bool redeem_twice = false;

  std::chrono::milliseconds poll_interval{1000};
  std::chrono::milliseconds poll_timeout{120000};
  std::string ca_file;
  std::shared_ptr<http::Transcript> transcript;
  Clock clock = system_clock();
};

struct FlowReport {
  bool ok = false;
  /// Name of the step that failed, empty on success.
  std::string failed_step;
  std::string error;

  std::string invocation_uri;
  std::string login_challenge;
  json wallet_response;
  json token_response;
  json id_token_header;
  json id_token;
  json access_token;

  json to_json() const;
};

/// Runs the authorization code flow end to end: authorize, login page,
/// wallet lane, polling, consent redirect, code redemption and token
/// validation. Never throws for protocol failures; they land in the report.
FlowReport run_flow(const FlowOptions& options);

}  // namespace vcbridge::client
