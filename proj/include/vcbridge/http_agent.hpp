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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace httplib {
class Client;
class Result;
}

namespace vcbridge::http {

/// One recorded request/response pair.
struct Exchange {
  std::string actor;  // "browser", "wallet", "client"
  std::string method;
  std::string url;
  int status = 0;
  std::string location;
  std::string body;
};

/// Thread-safe, append-only record of HTTP exchanges shared by the actors
/// of one flow.
class Transcript {
 public:
  void record(Exchange e);
  std::vector<Exchange> exchanges() const;

 private:
  mutable std::mutex mu_;
  std::vector<Exchange> exchanges_;
};

struct AgentResponse {
  int status = 0;
  std::string body;
  std::string content_type;
  std::string location;
};

/// Minimal user agent: no cookies, never follows redirects, records every
/// exchange in an optional transcript. Throws Error(fetch_failure) on
/// transport errors only; HTTP error statuses are returned.
class Agent {
 public:
  Agent(std::string actor, std::shared_ptr<Transcript> transcript = nullptr,
        std::string ca_file = {}, std::chrono::seconds timeout = std::chrono::seconds(10));
  ~Agent();

  AgentResponse get(const std::string& url,
                    const std::multimap<std::string, std::string>& headers = {});
  AgentResponse post_form(const std::string& url, const std::string& body,
                          const std::multimap<std::string, std::string>& headers = {});

 private:
  std::shared_ptr<httplib::Client> client_for(const std::string& origin);
  AgentResponse finish(const std::string& method, const std::string& url,
                       const httplib::Result& result);

  std::string actor_;
  std::shared_ptr<Transcript> transcript_;
  std::string ca_file_;
  std::chrono::seconds timeout_;
  std::map<std::string, std::shared_ptr<httplib::Client>> clients_;
};

}  // namespace vcbridge::http
