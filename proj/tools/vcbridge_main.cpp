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

// vcbridge: the SSI-to-OIDC bridge service.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "vcbridge/bridge_server.hpp"
#include "vcbridge/error.hpp"

namespace {

vcbridge::server::BridgeServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

// KEY=VALUE lines; '#' comments and optional surrounding quotes.
std::map<std::string, std::string> read_env_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::map<std::string, std::string> out;
  for (std::string line; std::getline(in, line);) {
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    auto eq = line.find('=', start);
    if (eq == std::string::npos) continue;
    std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    out[key] = value;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSI-to-OIDC bridge. Configuration is read from the environment."};
  std::string env_file;
  app.add_option("--env-file", env_file, "Fallback .env file for unset variables");
  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> file_env;
    if (!env_file.empty()) file_env = read_env_file(env_file);
    auto config = vcbridge::server::config_from_env(
        [&](const std::string& name) -> std::optional<std::string> {
          if (const char* v = std::getenv(name.c_str())) return std::string(v);
          auto it = file_env.find(name);
          if (it != file_env.end()) return it->second;
          return std::nullopt;
        });
    vcbridge::server::BridgeServer server(std::move(config));
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    auto& b = server.bridge();
    std::cerr << "vcbridge: issuer " << b.provider->issuer() << ", client DID "
              << b.relying_party->client_did() << ", listening on " << b.config.listen_host << ":"
              << b.config.listen_port << "\n";
    server.listen();
    g_server = nullptr;
  } catch (const vcbridge::Error& e) {
    std::cerr << "vcbridge: " << vcbridge::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "vcbridge: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
