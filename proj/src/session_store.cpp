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

#include "vcbridge/session_store.hpp"

#include <algorithm>
#include <stdexcept>

#include "vcbridge/error.hpp"

namespace vcbridge::session {
namespace {

constexpr std::size_t kSweepInterval = 256;

std::string full_key(Namespace ns, const std::string& key) {
  return std::string(to_string(ns)) + ":" + key;
}

}  // namespace

std::string_view to_string(Namespace ns) {
  switch (ns) {
    case Namespace::login_id_to_challenge: return "login_id_to_challenge";
    case Namespace::challenge_to_redirect: return "challenge_to_redirect";
    case Namespace::subject_to_claims: return "subject_to_claims";
    case Namespace::auth_code: return "auth_code";
    case Namespace::login_session: return "login_session";
    case Namespace::consent_session: return "consent_session";
  }
  return "unknown";
}

MemoryStore::MemoryStore(Clock clock, std::int64_t max_ttl_seconds)
    : clock_(std::move(clock)), max_ttl_(max_ttl_seconds) {}

void MemoryStore::put(Namespace ns, const std::string& key, const json& value,
                      std::int64_t ttl_seconds) {
  if (ttl_seconds <= 0) throw std::invalid_argument("session TTL must be positive");
  const auto now = clock_();
  std::lock_guard lock(mu_);
  entries_[full_key(ns, key)] = {value, now + std::min(ttl_seconds, max_ttl_)};
  if (++puts_since_sweep_ >= kSweepInterval) sweep_locked(now);
}

std::optional<json> MemoryStore::get(Namespace ns, const std::string& key) {
  const auto now = clock_();
  std::lock_guard lock(mu_);
  auto it = entries_.find(full_key(ns, key));
  if (it == entries_.end()) return std::nullopt;
  if (now >= it->second.expires_at) {
    entries_.erase(it);
    return std::nullopt;
  }
  return it->second.value;
}

std::optional<json> MemoryStore::take(Namespace ns, const std::string& key) {
  const auto now = clock_();
  std::lock_guard lock(mu_);
  auto it = entries_.find(full_key(ns, key));
  if (it == entries_.end()) return std::nullopt;
  auto entry = std::move(it->second);
  entries_.erase(it);
  if (now >= entry.expires_at) return std::nullopt;
  return std::move(entry.value);
}

void MemoryStore::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

std::size_t MemoryStore::size() {
  std::lock_guard lock(mu_);
  sweep_locked(clock_());
  return entries_.size();
}

void MemoryStore::sweep_locked(std::int64_t now) {
  puts_since_sweep_ = 0;
  std::erase_if(entries_, [now](const auto& kv) { return now >= kv.second.expires_at; });
}

std::shared_ptr<Store> make_store(const std::string& url, Clock clock) {
  if (url.empty()) return std::make_shared<MemoryStore>(std::move(clock));
  constexpr std::string_view kScheme = "redis://";
  if (!url.starts_with(kScheme)) {
    throw Error(Errc::storage_failure, "unsupported session store URL: " + url);
  }
  std::string rest = url.substr(kScheme.size());
  if (auto slash = rest.find('/'); slash != std::string::npos) rest.resize(slash);
  int port = 6379;
  std::string host = rest;
  if (auto colon = rest.rfind(':'); colon != std::string::npos) {
    host = rest.substr(0, colon);
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(Errc::storage_failure, "invalid port in session store URL: " + url);
    }
  }
  if (host.empty()) throw Error(Errc::storage_failure, "missing host in session store URL");
  return std::make_shared<RedisStore>(host, port);
}

}  // namespace vcbridge::session
