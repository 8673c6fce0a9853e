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

#include "vcbridge/jws.hpp"

#include "vcbridge/error.hpp"

namespace vcbridge::jws {

json CompactJws::payload_json() const {
  auto parsed = json::parse(payload.begin(), payload.end(), nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(Errc::malformed_jws, "JWS payload is not JSON");
  }
  return parsed;
}

CompactJws parse(std::string_view compact) {
  auto first = compact.find('.');
  auto second = first == std::string_view::npos ? first : compact.find('.', first + 1);
  if (second == std::string_view::npos ||
      compact.find('.', second + 1) != std::string_view::npos) {
    throw Error(Errc::malformed_jws, "compact JWS must have three segments");
  }
  CompactJws out;
  try {
    Bytes header = base64url_decode(compact.substr(0, first));
    out.header = json::parse(header.begin(), header.end(), nullptr, false);
    out.payload = base64url_decode(compact.substr(first + 1, second - first - 1));
    out.signature = base64url_decode(compact.substr(second + 1));
  } catch (const Error& e) {
    throw Error(Errc::malformed_jws, std::string("JWS encoding: ") + e.what());
  }
  if (!out.header.is_object() || !out.header.contains("alg") ||
      !out.header.at("alg").is_string()) {
    throw Error(Errc::malformed_jws, "JWS header must be an object with alg");
  }
  out.signing_input = std::string(compact.substr(0, second));
  return out;
}

std::string sign(json header, const json& payload, const crypto::SigningKey& key) {
  header["alg"] = crypto::jws_alg(key.type());
  std::string input = base64url_encode(header.dump()) + "." +
                      base64url_encode(payload.dump());
  Bytes sig = key.sign(to_bytes(input));
  return input + "." + base64url_encode(sig);
}

bool verify(const CompactJws& jws, const crypto::PublicKey& key) {
  if (jws.header.at("alg") != crypto::jws_alg(key.type())) return false;
  return key.verify(to_bytes(jws.signing_input), jws.signature);
}

}  // namespace vcbridge::jws
