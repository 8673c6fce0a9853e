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

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "vcbridge/clock.hpp"

/// Expiring key-value state for the cross-device flow. This is the only
/// mutable state in the bridge; wiping it invalidates in-flight logins.
namespace vcbridge::session {

using json = nlohmann::json;

enum class Namespace {
  login_id_to_challenge,
  challenge_to_redirect,
  subject_to_claims,
  auth_code,
  login_session,
  consent_session,
};

std::string_view to_string(Namespace ns);

inline constexpr std::int64_t kDefaultTtlSeconds = 300;
inline constexpr std::int64_t kAuthCodeTtlSeconds = 60;

/// Operations are linearizable per key; take is an atomic get-and-delete.
class Store {
 public:
  virtual ~Store() = default;

  /// `ttl_seconds` must be positive; it is capped at the store maximum.
  /// Throws Error(storage_failure).
  virtual void put(Namespace ns, const std::string& key, const json& value,
                   std::int64_t ttl_seconds) = 0;
  virtual std::optional<json> get(Namespace ns, const std::string& key) = 0;
  /// Returns and removes the value; nullopt when absent or expired.
  virtual std::optional<json> take(Namespace ns, const std::string& key) = 0;
  /// Drops every entry.
  virtual void clear() = 0;
};

/// In-process backend.
class MemoryStore : public Store {
 public:
  explicit MemoryStore(Clock clock = system_clock(),
                       std::int64_t max_ttl_seconds = kDefaultTtlSeconds);

  void put(Namespace ns, const std::string& key, const json& value,
           std::int64_t ttl_seconds) override;
  std::optional<json> get(Namespace ns, const std::string& key) override;
  std::optional<json> take(Namespace ns, const std::string& key) override;
  void clear() override;

  std::size_t size();

 private:
  struct Entry {
    json value;
    std::int64_t expires_at;
  };

  void sweep_locked(std::int64_t now);

  Clock clock_;
  std::int64_t max_ttl_;
  std::mutex mu_;
  std::unordered_map<std::string, Entry> entries_;
  std::size_t puts_since_sweep_ = 0;
};

/// Backend speaking the Redis protocol (SET ... EX, GET, GETDEL, SCAN, DEL).
/// Keys are prefixed with `vcbridge:<namespace>:`.
class RedisStore : public Store {
 public:
  RedisStore(std::string host, int port, std::int64_t max_ttl_seconds = kDefaultTtlSeconds);
  ~RedisStore() override;

  void put(Namespace ns, const std::string& key, const json& value,
           std::int64_t ttl_seconds) override;
  std::optional<json> get(Namespace ns, const std::string& key) override;
  std::optional<json> take(Namespace ns, const std::string& key) override;
  void clear() override;

 private:
  struct Reply;
  Reply command(std::initializer_list<std::string_view> args);
  Reply command_locked(std::initializer_list<std::string_view> args);
  void connect_locked();
  void close_locked();

  std::string host_;
  int port_;
  std::int64_t max_ttl_;
  std::mutex mu_;
  int fd_ = -1;
  std::string buffer_;
};

/// Empty url: MemoryStore. `redis://host:port`: RedisStore.
std::shared_ptr<Store> make_store(const std::string& url, Clock clock = system_clock());

}  // namespace vcbridge::session
