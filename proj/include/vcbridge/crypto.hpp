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

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "vcbridge/encoding.hpp"

typedef struct evp_pkey_st EVP_PKEY;

namespace vcbridge::crypto {

using json = nlohmann::json;

/// The two signature suites accepted on credentials and presentations.
enum class KeyType { ed25519, p256 };

/// JWS `alg` value for a key type: EdDSA or ES256.
std::string_view jws_alg(KeyType type);

class PublicKey {
 public:
  /// Ed25519 takes the 32-byte key; P-256 takes a SEC1 point, compressed
  /// (33 bytes) or uncompressed (65 bytes). Points off the curve are rejected.
  static PublicKey from_raw(KeyType type, std::span<const std::uint8_t> raw);
  /// Accepts OKP/Ed25519 and EC/P-256 JWKs. Private members are ignored.
  static PublicKey from_jwk(const json& jwk);

  KeyType type() const { return type_; }
  /// Ed25519: 32 bytes. P-256: 65-byte uncompressed point.
  const Bytes& raw() const { return raw_; }
  /// P-256 only: 33-byte compressed point.
  Bytes compressed() const;

  json to_jwk() const;
  /// RFC 7638 JWK thumbprint, base64url SHA-256.
  std::string thumbprint() const;

  /// `signature` uses the JWS encoding (raw r||s for ES256).
  bool verify(std::span<const std::uint8_t> message,
              std::span<const std::uint8_t> signature) const;

  friend bool operator==(const PublicKey& a, const PublicKey& b) {
    return a.type_ == b.type_ && a.raw_ == b.raw_;
  }

 private:
  PublicKey(KeyType type, Bytes raw, std::shared_ptr<EVP_PKEY> pkey)
      : type_(type), raw_(std::move(raw)), pkey_(std::move(pkey)) {}

  KeyType type_;
  Bytes raw_;
  std::shared_ptr<EVP_PKEY> pkey_;
};

class SigningKey {
 public:
  static SigningKey generate(KeyType type);
  /// Requires the private member `d`.
  static SigningKey from_jwk(const json& jwk);

  KeyType type() const { return public_.type(); }
  const PublicKey& public_key() const { return public_; }
  json to_jwk(bool include_private = true) const;

  /// Returns the JWS-encoded signature over `message`.
  Bytes sign(std::span<const std::uint8_t> message) const;

 private:
  SigningKey(PublicKey pub, Bytes d, std::shared_ptr<EVP_PKEY> pkey)
      : public_(std::move(pub)), d_(std::move(d)), pkey_(std::move(pkey)) {}

  PublicKey public_;
  Bytes d_;
  std::shared_ptr<EVP_PKEY> pkey_;
};

Bytes sha256(std::span<const std::uint8_t> data);
Bytes random_bytes(std::size_t n);
/// `nbytes` of CSPRNG output, base64url encoded.
std::string random_token(std::size_t nbytes = 32);
/// RFC 4122 version 4 UUID in canonical lowercase form.
std::string uuid_v4();

}  // namespace vcbridge::crypto
