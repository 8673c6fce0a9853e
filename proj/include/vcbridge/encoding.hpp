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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vcbridge {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_string(std::span<const std::uint8_t> b);

// RFC 4648 section 5, unpadded on output; padding is tolerated on input.
std::string base64url_encode(std::span<const std::uint8_t> data);
std::string base64url_encode(std::string_view data);
Bytes base64url_decode(std::string_view text);

// Standard alphabet with padding, as used by HTTP Basic credentials.
std::string base64_encode(std::span<const std::uint8_t> data);
Bytes base64_decode(std::string_view text);

// Bitcoin alphabet, as used by the multibase 'z' prefix.
std::string base58btc_encode(std::span<const std::uint8_t> data);
Bytes base58btc_decode(std::string_view text);

/// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string url_encode(std::string_view s);
/// Decodes %XX escapes; with `plus_as_space`, '+' decodes to ' ' as in
/// application/x-www-form-urlencoded bodies.
std::string url_decode(std::string_view s, bool plus_as_space = false);

using Params = std::multimap<std::string, std::string>;

/// Parses `a=1&b=2` (query string or form body).
Params parse_form(std::string_view s);
std::string encode_form(const Params& params);
/// First value for `key`, or empty.
std::string param(const Params& params, const std::string& key);

std::string html_escape(std::string_view s);
std::string html_unescape(std::string_view s);

/// Splits an absolute URL into origin (`scheme://host[:port]`) and the
/// path-plus-query remainder. Throws Error(malformed_uri) when there is no
/// scheme.
struct SplitUrl {
  std::string origin;
  std::string path;
};
SplitUrl split_url(std::string_view url);

}  // namespace vcbridge
