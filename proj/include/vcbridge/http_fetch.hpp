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

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace httplib {
class Client;
}

namespace vcbridge::http {

struct Response {
  int status = 0;
  std::string body;
  std::string content_type;
};

/// Outbound GET used for did:web documents and status list credentials.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  /// Throws Error(fetch_failure) on transport errors, redirects, oversize
  /// bodies and non-2xx statuses.
  virtual Response get(const std::string& url) = 0;
};

struct FetchOptions {
  std::chrono::seconds timeout{5};
  std::size_t max_body_bytes = 64 * 1024;
  /// Extra PEM bundle to trust, e.g. a test CA. Empty uses the system store.
  std::string ca_file;
  bool allow_plain_http = false;
};

/// Fetcher over cpp-httplib. Redirects are never followed. Connections are
/// kept alive per origin.
class HttpsFetcher : public Fetcher {
 public:
  explicit HttpsFetcher(FetchOptions options = {});
  ~HttpsFetcher() override;

  Response get(const std::string& url) override;

 private:
  struct Connection {
    std::mutex mu;
    std::unique_ptr<httplib::Client> client;
  };
  std::shared_ptr<Connection> client_for(const std::string& origin);

  FetchOptions options_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Connection>> clients_;
};

}  // namespace vcbridge::http
