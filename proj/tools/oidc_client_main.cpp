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

// oidc-client: headless authorization code flow driver.

#include <CLI11.hpp>

#include <iostream>

#include "vcbridge/error.hpp"
#include "vcbridge/oidc_client.hpp"

using namespace vcbridge;

int main(int argc, char** argv) {
  CLI::App app{"Headless OpenID Connect test client"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run one authorization code flow");

  client::FlowOptions o;
  std::string vault_dir;
  int poll_ms = 1000, timeout_s = 120;
  bool post_auth = false;
  run->add_option("--bridge", o.bridge_url, "Bridge base URL (its EXTERNAL_URL)")->required();
  run->add_option("--client-id", o.client_id)->required();
  run->add_option("--client-secret", o.client_secret)->required();
  run->add_option("--redirect-uri", o.redirect_uri);
  run->add_option("--scope", o.scope);
  run->add_option("--auto-wallet", vault_dir, "Vault directory for the in-process wallet");
  run->add_option("--ca-file", o.ca_file, "Extra trusted CA bundle");
  run->add_option("--poll-interval-ms", poll_ms);
  run->add_option("--timeout", timeout_s, "Seconds to wait for the wallet");
  run->add_flag("--client-secret-post", post_auth, "Authenticate with form parameters");
  run->add_flag("--tamper-code", o.tamper_code, "Alter the authorization code before redemption");
  run->add_flag("--redeem-twice", o.redeem_twice, "Redeem the authorization code a second time");
  run->add_flag("--wrong-nonce", o.wallet_options.wrong_nonce);
  run->add_flag("--violate-holder-binding", o.wallet_options.violate_holder_binding);
  run->add_flag("--tamper-vp", o.wallet_options.tamper_vp);
  run->add_flag("--resubmit", o.wallet_options.resubmit);
  CLI11_PARSE(app, argc, argv);

  o.basic_auth = !post_auth;
  o.poll_interval = std::chrono::milliseconds(poll_ms);
  o.poll_timeout = std::chrono::seconds(timeout_s);
  try {
    if (!vault_dir.empty()) o.auto_wallet = wallet::Vault::load(vault_dir);
  } catch (const Error& e) {
    std::cerr << "oidc-client: cannot load vault: " << e.what() << "\n";
    return 2;
  }
  if (!o.auto_wallet) {
    o.on_invocation = [](const std::string& uri) {
      std::cerr << "Waiting for a wallet to answer:\n" << uri << "\n";
    };
  }

  auto report = client::run_flow(o);
  std::cout << report.to_json().dump(2) << "\n";
  if (!report.ok) {
    std::cerr << "oidc-client: failed at " << report.failed_step << ": " << report.error << "\n";
    return 1;
  }
  return 0;
}
