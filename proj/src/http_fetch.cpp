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

#include "vcbridge/http_fetch.hpp"

#include <httplib.h>

#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"

namespace vcbridge::http {

HttpsFetcher::HttpsFetcher(FetchOptions options) : options_(std::move(options)) {}

HttpsFetcher::~HttpsFetcher() = default;

std::shared_ptr<HttpsFetcher::Connection> HttpsFetcher::client_for(const std::string& origin) {
  std::lock_guard lock(mu_);
  auto& conn = clients_[origin];
  if (!conn) {
    conn = std::make_shared<Connection>();
    conn->client = std::make_unique<httplib::Client>(origin);
    auto& slot = conn->client;
    slot->set_connection_timeout(options_.timeout);
    slot->set_read_timeout(options_.timeout);
    slot->set_write_timeout(options_.timeout);
    slot->set_follow_location(false);
    slot->set_keep_alive(true);
    slot->enable_server_certificate_verification(true);
    if (!options_.ca_file.empty()) slot->set_ca_cert_path(options_.ca_file);
  }
  return conn;
}

Response HttpsFetcher::get(const std::string& url) {
  const bool https = url.starts_with("https://");
  if (!https && !(options_.allow_plain_http && url.starts_with("http://"))) {
    throw Error(Errc::fetch_failure, "refusing non-HTTPS fetch: " + url);
  }
  SplitUrl parts = split_url(url);
  auto conn = client_for(parts.origin);
  // httplib clients are not safe for concurrent use; keep-alive connections
  // are shared per origin and used one request at a time.
  std::lock_guard lock(conn->mu);
  auto& client = conn->client;

  std::string body;
  bool oversize = false;
  auto result = client->Get(
      parts.path, httplib::Headers{},
      [&](const char* data, std::size_t len) {
        if (body.size() + len > options_.max_body_bytes) {
          oversize = true;
          return false;
        }
        body.append(data, len);
        return true;
      });
  if (oversize) {
    throw Error(Errc::fetch_failure, "response from " + url + " exceeds " +
                                         std::to_string(options_.max_body_bytes) +
                                         " bytes");
  }
  if (!result) {
    throw Error(Errc::fetch_failure,
                "fetching " + url + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status >= 300 && result->status < 400) {
    throw Error(Errc::fetch_failure, "redirects are not followed: " + url);
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(Errc::fetch_failure,
                "fetching " + url + " returned HTTP " + std::to_string(result->status));
  }
  return {result->status, std::move(body), result->get_header_value("Content-Type")};
}

}  // namespace vcbridge::http
