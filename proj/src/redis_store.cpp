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

#include <netdb.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cstring>
#include <vector>

#include "vcbridge/error.hpp"
#include "vcbridge/session_store.hpp"

namespace vcbridge::session {
namespace {

constexpr std::string_view kKeyPrefix = "vcbridge:";

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(Errc::storage_failure, "session store: " + what);
}

std::string redis_key(Namespace ns, const std::string& key) {
  return std::string(kKeyPrefix) + std::string(to_string(ns)) + ":" + key;
}

}  // namespace

struct RedisStore::Reply {
  enum class Type { status, error, integer, bulk, nil, array };
  Type type = Type::nil;
  std::string str;
  long long integer = 0;
  std::vector<Reply> elements;
};

RedisStore::RedisStore(std::string host, int port, std::int64_t max_ttl_seconds)
    : host_(std::move(host)), port_(port), max_ttl_(max_ttl_seconds) {}

RedisStore::~RedisStore() { close_locked(); }

void RedisStore::close_locked() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  buffer_.clear();
}

void RedisStore::connect_locked() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port = std::to_string(port_);
  if (getaddrinfo(host_.c_str(), port.c_str(), &hints, &res) != 0) {
    storage_failure("cannot resolve " + host_);
  }
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    timeval tv{5, 0};
    setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  freeaddrinfo(res);
  if (fd_ < 0) storage_failure("cannot connect to " + host_ + ":" + port);
}

RedisStore::Reply RedisStore::command(std::initializer_list<std::string_view> args) {
  std::lock_guard lock(mu_);
  return command_locked(args);
}

RedisStore::Reply RedisStore::command_locked(std::initializer_list<std::string_view> args) {
  if (fd_ < 0) connect_locked();
  std::string out = "*" + std::to_string(args.size()) + "\r\n";
  for (auto a : args) {
    out += "$" + std::to_string(a.size()) + "\r\n";
    out.append(a);
    out += "\r\n";
  }
  for (std::size_t sent = 0; sent < out.size();) {
    ssize_t n = ::send(fd_, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      close_locked();
      storage_failure("write failed");
    }
    sent += static_cast<std::size_t>(n);
  }

  auto fill = [&]() {
    char buf[4096];
    ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) {
      close_locked();
      storage_failure("connection lost");
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
  };
  auto read_line = [&]() {
    std::size_t pos;
    while ((pos = buffer_.find("\r\n")) == std::string::npos) fill();
    std::string line = buffer_.substr(0, pos);
    buffer_.erase(0, pos + 2);
    return line;
  };
  auto parse = [&](auto& self) -> Reply {
    std::string line = read_line();
    if (line.empty()) storage_failure("empty reply");
    Reply r;
    std::string body = line.substr(1);
    switch (line[0]) {
      case '+': r.type = Reply::Type::status; r.str = body; break;
      case '-': r.type = Reply::Type::error; r.str = body; break;
      case ':': r.type = Reply::Type::integer; r.integer = std::stoll(body); break;
      case '$': {
        long long len = std::stoll(body);
        if (len < 0) break;  // nil
        while (buffer_.size() < static_cast<std::size_t>(len) + 2) fill();
        r.type = Reply::Type::bulk;
        r.str = buffer_.substr(0, static_cast<std::size_t>(len));
        buffer_.erase(0, static_cast<std::size_t>(len) + 2);
        break;
      }
      case '*': {
        long long count = std::stoll(body);
        if (count < 0) break;
        r.type = Reply::Type::array;
        for (long long i = 0; i < count; ++i) r.elements.push_back(self(self));
        break;
      }
      default:
        close_locked();
        storage_failure("unexpected reply type");
    }
    return r;
  };
  Reply reply = parse(parse);
  if (reply.type == Reply::Type::error) storage_failure(reply.str);
  return reply;
}

void RedisStore::put(Namespace ns, const std::string& key, const json& value,
                     std::int64_t ttl_seconds) {
  if (ttl_seconds <= 0) throw std::invalid_argument("session TTL must be positive");
  auto ttl = std::to_string(std::min(ttl_seconds, max_ttl_));
  command({"SET", redis_key(ns, key), value.dump(), "EX", ttl});
}

std::optional<json> RedisStore::get(Namespace ns, const std::string& key) {
  Reply r = command({"GET", redis_key(ns, key)});
  if (r.type != Reply::Type::bulk) return std::nullopt;
  return json::parse(r.str);
}

std::optional<json> RedisStore::take(Namespace ns, const std::string& key) {
  Reply r = command({"GETDEL", redis_key(ns, key)});
  if (r.type != Reply::Type::bulk) return std::nullopt;
  return json::parse(r.str);
}

void RedisStore::clear() {
  std::lock_guard lock(mu_);
  std::string cursor = "0";
  std::string pattern = std::string(kKeyPrefix) + "*";
  do {
    Reply r = command_locked({"SCAN", cursor, "MATCH", pattern, "COUNT", "500"});
    if (r.type != Reply::Type::array || r.elements.size() != 2) {
      storage_failure("unexpected SCAN reply");
    }
    cursor = r.elements[0].str;
    for (const auto& k : r.elements[1].elements) command_locked({"DEL", k.str});
  } while (cursor != "0");
}

}  // namespace vcbridge::session
