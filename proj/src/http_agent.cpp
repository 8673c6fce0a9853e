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

#include "vcbridge/http_agent.hpp"

#include <httplib.h>

#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"

namespace vcbridge::http {

void Transcript::record(Exchange e) {
  std::lock_guard lock(mu_);
  exchanges_.push_back(std::move(e));
}

std::vector<Exchange> Transcript::exchanges() const {
  std::lock_guard lock(mu_);
  return exchanges_;
}

Agent::Agent(std::string actor, std::shared_ptr<Transcript> transcript, std::string ca_file,
             std::chrono::seconds timeout)
    : actor_(std::move(actor)),
      transcript_(std::move(transcript)),
      ca_file_(std::move(ca_file)),
      timeout_(timeout) {}

Agent::~Agent() = default;

std::shared_ptr<httplib::Client> Agent::client_for(const std::string& origin) {
  auto& slot = clients_[origin];
  if (!slot) {
    slot = std::make_shared<httplib::Client>(origin);
    slot->set_connection_timeout(timeout_);
    slot->set_read_timeout(timeout_);
    slot->set_write_timeout(timeout_);
    slot->set_follow_location(false);
    slot->set_keep_alive(true);
    if (!ca_file_.empty()) slot->set_ca_cert_path(ca_file_);
  }
  return slot;
}

AgentResponse Agent::finish(const std::string& method, const std::string& url,
                            const httplib::Result& result) {
  if (!result) {
    throw Error(Errc::fetch_failure,
                method + " " + url + " failed: " + httplib::to_string(result.error()));
  }
  AgentResponse out{result->status, result->body, result->get_header_value("Content-Type"),
                    result->get_header_value("Location")};
  if (transcript_) transcript_->record({actor_, method, url, out.status, out.location, out.body});
  return out;
}

AgentResponse Agent::get(const std::string& url,
                         const std::multimap<std::string, std::string>& headers) {
  auto parts = split_url(url);
  httplib::Headers h(headers.begin(), headers.end());
  auto result = client_for(parts.origin)->Get(parts.path, h);
  return finish("GET", url, result);
}

AgentResponse Agent::post_form(const std::string& url, const std::string& body,
                               const std::multimap<std::string, std::string>& headers) {
  auto parts = split_url(url);
  httplib::Headers h(headers.begin(), headers.end());
  auto result = client_for(parts.origin)->Post(parts.path, h, body,
                                                "application/x-www-form-urlencoded");
  return finish("POST", url, result);
}

}  // namespace vcbridge::http
