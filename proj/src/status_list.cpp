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

#include "vcbridge/status_list.hpp"

#include <zlib.h>

#include <charconv>

#include "vcbridge/error.hpp"

namespace vcbridge::status {
namespace {

// Upper bound on a decompressed list; the recommended size is 16 KiB.
constexpr std::size_t kMaxListBytes = 8 * 1024 * 1024;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::malformed_credential, what);
}

}  // namespace

std::string_view to_string(Status s) { return s == Status::revoked ? "Revoked" : "Active"; }

std::optional<StatusListReference> reference_from(const json& vc_payload) {
  auto it = vc_payload.find("credentialStatus");
  if (it == vc_payload.end() || it->is_null()) return std::nullopt;
  const json& entry = *it;
  if (!entry.is_object()) malformed("credentialStatus must be an object");
  if (entry.value("type", "") != "StatusList2021Entry") {
    malformed("unsupported credentialStatus type " + entry.value("type", std::string("<none>")));
  }
  StatusListReference ref;
  ref.purpose = entry.value("statusPurpose", "");
  if (ref.purpose != "revocation") malformed("unsupported statusPurpose '" + ref.purpose + "'");
  if (!entry.contains("statusListCredential") || !entry.at("statusListCredential").is_string()) {
    malformed("credentialStatus lacks statusListCredential");
  }
  ref.status_list_credential_url = entry.at("statusListCredential").get<std::string>();
  const json& index = entry.value("statusListIndex", json());
  if (index.is_number_unsigned() || (index.is_number_integer() && index.get<std::int64_t>() >= 0)) {
    ref.status_list_index = index.get<std::uint64_t>();
  } else if (index.is_string()) {
    const auto& s = index.get_ref<const std::string&>();
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), ref.status_list_index);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      malformed("statusListIndex is not a non-negative integer");
    }
  } else {
    malformed("statusListIndex is not a non-negative integer");
  }
  return ref;
}

json make_entry(const std::string& list_url, std::uint64_t index) {
  return {{"id", list_url + "#" + std::to_string(index)},
          {"type", "StatusList2021Entry"},
          {"statusPurpose", "revocation"},
          {"statusListIndex", std::to_string(index)},
          {"statusListCredential", list_url}};
}

std::string encode_list(std::span<const std::uint8_t> bitstring) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(Errc::malformed_credential, "deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(bitstring.size())) + 32);
  zs.next_in = const_cast<Bytef*>(bitstring.data());
  zs.avail_in = static_cast<uInt>(bitstring.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(Errc::malformed_credential, "gzip compression failed");
  return base64url_encode(out);
}

Bytes decode_list(std::string_view encoded) {
  Bytes compressed;
  try {
    compressed = base64url_decode(encoded);
  } catch (const Error&) {
    malformed("encodedList is not base64url");
  }
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) malformed("inflateInit2 failed");
  zs.next_in = compressed.data();
  zs.avail_in = static_cast<uInt>(compressed.size());
  Bytes out;
  std::uint8_t buf[16384];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf;
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      malformed("encodedList is not a GZIP stream");
    }
    out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    if (out.size() > kMaxListBytes) {
      inflateEnd(&zs);
      malformed("decoded status list exceeds size limit");
    }
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      malformed("truncated GZIP stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

bool bit_at(std::span<const std::uint8_t> bitstring, std::uint64_t index) {
  if (index / 8 >= bitstring.size()) {
    throw Error(Errc::index_out_of_range,
                "status index " + std::to_string(index) + " beyond list of " +
                    std::to_string(bitstring.size() * 8) + " entries");
  }
  return (bitstring[index / 8] >> (7 - index % 8)) & 1;
}

void set_bit(std::span<std::uint8_t> bitstring, std::uint64_t index) {
  if (index / 8 >= bitstring.size()) {
    throw Error(Errc::index_out_of_range, "status index beyond list");
  }
  bitstring[index / 8] = static_cast<std::uint8_t>(bitstring[index / 8] | (0x80u >> (index % 8)));
}

json make_list_credential(const std::string& issuer, const std::string& list_url,
                          const std::string& encoded_list) {
  return {{"@context", {"https://www.w3.org/2018/credentials/v1",
                        "https://w3id.org/vc/status-list/2021/v1"}},
          {"id", list_url},
          {"type", {"VerifiableCredential", "StatusList2021Credential"}},
          {"issuer", issuer},
          {"credentialSubject",
           {{"id", list_url + "#list"},
            {"type", "StatusList2021"},
            {"statusPurpose", "revocation"},
            {"encodedList", encoded_list}}}};
}

}  // namespace vcbridge::status
