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

#include "vcbridge/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstdio>
#include <optional>

#include "vcbridge/error.hpp"

namespace vcbridge::crypto {
namespace {

constexpr std::size_t kEd25519KeySize = 32;
constexpr std::size_t kP256CoordSize = 32;

struct PkeyFree {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxFree {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct MdCtxFree {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct BnFree {
  void operator()(BIGNUM* p) const { BN_free(p); }
};
struct ParamBldFree {
  void operator()(OSSL_PARAM_BLD* p) const { OSSL_PARAM_BLD_free(p); }
};
struct ParamFree {
  void operator()(OSSL_PARAM* p) const { OSSL_PARAM_free(p); }
};
struct EcdsaSigFree {
  void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnFree>;

std::shared_ptr<EVP_PKEY> adopt(EVP_PKEY* p) {
  if (p == nullptr) throw Error(Errc::schema_error, "invalid key material");
  return std::shared_ptr<EVP_PKEY>(p, PkeyFree{});
}

Bytes bn_to_fixed(const BIGNUM* bn, std::size_t size) {
  Bytes out(size);
  if (BN_bn2binpad(bn, out.data(), static_cast<int>(size)) < 0) {
    throw Error(Errc::schema_error, "integer does not fit field size");
  }
  return out;
}

BnPtr get_bn(EVP_PKEY* pkey, const char* name) {
  BIGNUM* bn = nullptr;
  if (EVP_PKEY_get_bn_param(pkey, name, &bn) != 1) {
    throw Error(Errc::schema_error, std::string("missing key parameter ") + name);
  }
  return BnPtr(bn);
}

// Uncompressed SEC1 point for an EC key.
Bytes ec_point(EVP_PKEY* pkey) {
  unsigned char* raw = nullptr;
  const std::size_t len = EVP_PKEY_get1_encoded_public_key(pkey, &raw);
  std::unique_ptr<unsigned char, void (*)(unsigned char*)> encoded(
      raw, [](unsigned char* q) { OPENSSL_free(q); });
  if (len == 0 || !encoded) throw Error(Errc::schema_error, "missing EC public point");
  std::unique_ptr<EC_GROUP, decltype(&EC_GROUP_free)> group(
      EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1), &EC_GROUP_free);
  std::unique_ptr<EC_POINT, decltype(&EC_POINT_free)> point(EC_POINT_new(group.get()),
                                                            &EC_POINT_free);
  if (!group || !point ||
      EC_POINT_oct2point(group.get(), point.get(), encoded.get(), len, nullptr) != 1) {
    throw Error(Errc::schema_error, "invalid EC public point");
  }
  Bytes out(1 + 2 * kP256CoordSize);
  if (EC_POINT_point2oct(group.get(), point.get(), POINT_CONVERSION_UNCOMPRESSED, out.data(),
                         out.size(), nullptr) != out.size()) {
    throw Error(Errc::schema_error, "cannot encode EC public point");
  }
  return out;
}

std::shared_ptr<EVP_PKEY> ec_from_data(std::span<const std::uint8_t> point,
                                       const BIGNUM* priv) {
  std::unique_ptr<OSSL_PARAM_BLD, ParamBldFree> bld(OSSL_PARAM_BLD_new());
  OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME,
                                  "prime256v1", 0);
  OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY,
                                   point.data(), point.size());
  if (priv != nullptr) {
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_PRIV_KEY, priv);
  }
  std::unique_ptr<OSSL_PARAM, ParamFree> params(OSSL_PARAM_BLD_to_param(bld.get()));
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree> ctx(
      EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
  EVP_PKEY* pkey = nullptr;
  if (!params || !ctx || EVP_PKEY_fromdata_init(ctx.get()) != 1 ||
      EVP_PKEY_fromdata(ctx.get(), &pkey,
                        priv ? EVP_PKEY_KEYPAIR : EVP_PKEY_PUBLIC_KEY,
                        params.get()) != 1) {
    throw Error(Errc::schema_error, "invalid P-256 key");
  }
  auto owned = adopt(pkey);
  // fromdata does not always check the point; do it explicitly.
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree> check(
      EVP_PKEY_CTX_new_from_pkey(nullptr, owned.get(), nullptr));
  if (!check || EVP_PKEY_public_check(check.get()) != 1) {
    throw Error(Errc::schema_error, "P-256 point is not on the curve");
  }
  return owned;
}

// JWS ES256 signatures are the fixed-width concatenation r || s.
Bytes der_to_raw_ecdsa(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  std::unique_ptr<ECDSA_SIG, EcdsaSigFree> sig(
      d2i_ECDSA_SIG(nullptr, &p, static_cast<long>(der.size())));
  if (!sig) throw Error(Errc::bad_signature, "malformed ECDSA signature");
  Bytes out = bn_to_fixed(ECDSA_SIG_get0_r(sig.get()), kP256CoordSize);
  Bytes s = bn_to_fixed(ECDSA_SIG_get0_s(sig.get()), kP256CoordSize);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::optional<Bytes> raw_to_der_ecdsa(std::span<const std::uint8_t> raw) {
  if (raw.size() != 2 * kP256CoordSize) return std::nullopt;
  std::unique_ptr<ECDSA_SIG, EcdsaSigFree> sig(ECDSA_SIG_new());
  BIGNUM* r = BN_bin2bn(raw.data(), kP256CoordSize, nullptr);
  BIGNUM* s = BN_bin2bn(raw.data() + kP256CoordSize, kP256CoordSize, nullptr);
  if (ECDSA_SIG_set0(sig.get(), r, s) != 1) {
    BN_free(r);
    BN_free(s);
    return std::nullopt;
  }
  int len = i2d_ECDSA_SIG(sig.get(), nullptr);
  if (len <= 0) return std::nullopt;
  Bytes der(static_cast<std::size_t>(len));
  unsigned char* p = der.data();
  i2d_ECDSA_SIG(sig.get(), &p);
  return der;
}

Bytes jwk_bytes(const json& jwk, const char* member) {
  if (!jwk.contains(member) || !jwk.at(member).is_string()) {
    throw Error(Errc::schema_error, std::string("JWK lacks member ") + member);
  }
  return base64url_decode(jwk.at(member).get<std::string>());
}

KeyType jwk_type(const json& jwk) {
  if (!jwk.is_object()) throw Error(Errc::schema_error, "JWK is not an object");
  auto kty = jwk.value("kty", "");
  auto crv = jwk.value("crv", "");
  if (kty == "OKP" && crv == "Ed25519") return KeyType::ed25519;
  if (kty == "EC" && crv == "P-256") return KeyType::p256;
  throw Error(Errc::schema_error, "unsupported JWK kty/crv: " + kty + "/" + crv);
}

}  // namespace

std::string_view jws_alg(KeyType type) {
  return type == KeyType::ed25519 ? "EdDSA" : "ES256";
}

PublicKey PublicKey::from_raw(KeyType type, std::span<const std::uint8_t> raw) {
  if (type == KeyType::ed25519) {
    if (raw.size() != kEd25519KeySize) {
      throw Error(Errc::schema_error, "Ed25519 public key must be 32 bytes");
    }
    auto pkey = adopt(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                                  raw.data(), raw.size()));
    return PublicKey(type, Bytes(raw.begin(), raw.end()), std::move(pkey));
  }
  if (raw.size() != 33 && raw.size() != 65) {
    throw Error(Errc::schema_error, "P-256 point must be 33 or 65 bytes");
  }
  auto pkey = ec_from_data(raw, nullptr);
  Bytes point = ec_point(pkey.get());
  return PublicKey(type, std::move(point), std::move(pkey));
}

PublicKey PublicKey::from_jwk(const json& jwk) {
  KeyType type = jwk_type(jwk);
  if (type == KeyType::ed25519) return from_raw(type, jwk_bytes(jwk, "x"));
  Bytes x = jwk_bytes(jwk, "x");
  Bytes y = jwk_bytes(jwk, "y");
  if (x.size() != kP256CoordSize || y.size() != kP256CoordSize) {
    throw Error(Errc::schema_error, "P-256 coordinates must be 32 bytes");
  }
  Bytes point{0x04};
  point.insert(point.end(), x.begin(), x.end());
  point.insert(point.end(), y.begin(), y.end());
  return from_raw(type, point);
}

Bytes PublicKey::compressed() const {
  if (type_ != KeyType::p256) {
    throw Error(Errc::schema_error, "only P-256 points have a compressed form");
  }
  if (raw_.size() != 1 + 2 * kP256CoordSize) throw Error(Errc::schema_error, "bad P-256 point");
  Bytes out(1 + kP256CoordSize);
  out[0] = static_cast<std::uint8_t>(0x02 | (raw_.back() & 1));
  std::copy_n(raw_.data() + 1, kP256CoordSize, out.data() + 1);
  return out;
}

json PublicKey::to_jwk() const {
  if (type_ == KeyType::ed25519) {
    return {{"kty", "OKP"}, {"crv", "Ed25519"}, {"x", base64url_encode(raw_)}};
  }
  std::span<const std::uint8_t> r(raw_);
  return {{"kty", "EC"},
          {"crv", "P-256"},
          {"x", base64url_encode(r.subspan(1, kP256CoordSize))},
          {"y", base64url_encode(r.subspan(1 + kP256CoordSize, kP256CoordSize))}};
}

std::string PublicKey::thumbprint() const {
  // Required members only, lexicographic order, no whitespace. nlohmann::json
  // objects iterate in key order so dump() yields the canonical form.
  json jwk = to_jwk();
  return base64url_encode(sha256(to_bytes(jwk.dump())));
}

bool PublicKey::verify(std::span<const std::uint8_t> message,
                       std::span<const std::uint8_t> signature) const {
  Bytes der;
  std::span<const std::uint8_t> sig = signature;
  const EVP_MD* md = nullptr;
  if (type_ == KeyType::p256) {
    auto converted = raw_to_der_ecdsa(signature);
    if (!converted) return false;
    der = std::move(*converted);
    sig = der;
    md = EVP_sha256();
  } else if (signature.size() != 64) {
    return false;
  }
  std::unique_ptr<EVP_MD_CTX, MdCtxFree> ctx(EVP_MD_CTX_new());
  if (EVP_DigestVerifyInit(ctx.get(), nullptr, md, nullptr, pkey_.get()) != 1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(),
                          message.size()) == 1;
}

SigningKey SigningKey::generate(KeyType type) {
  EVP_PKEY* raw = type == KeyType::ed25519
                      ? EVP_PKEY_Q_keygen(nullptr, nullptr, "ED25519")
                      : EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", "P-256");
  auto pkey = adopt(raw);
  if (type == KeyType::ed25519) {
    Bytes pub(kEd25519KeySize), d(kEd25519KeySize);
    std::size_t len = pub.size();
    EVP_PKEY_get_raw_public_key(pkey.get(), pub.data(), &len);
    len = d.size();
    EVP_PKEY_get_raw_private_key(pkey.get(), d.data(), &len);
    return SigningKey(PublicKey::from_raw(type, pub), std::move(d), std::move(pkey));
  }
  auto d = get_bn(pkey.get(), OSSL_PKEY_PARAM_PRIV_KEY);
  auto pub = PublicKey::from_raw(type, ec_point(pkey.get()));
  return SigningKey(std::move(pub), bn_to_fixed(d.get(), kP256CoordSize), std::move(pkey));
}

SigningKey SigningKey::from_jwk(const json& jwk) {
  KeyType type = jwk_type(jwk);
  Bytes d = jwk_bytes(jwk, "d");
  PublicKey pub = PublicKey::from_jwk(jwk);
  if (type == KeyType::ed25519) {
    if (d.size() != kEd25519KeySize) {
      throw Error(Errc::schema_error, "Ed25519 private key must be 32 bytes");
    }
    auto pkey = adopt(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                   d.data(), d.size()));
    Bytes derived(kEd25519KeySize);
    std::size_t len = derived.size();
    EVP_PKEY_get_raw_public_key(pkey.get(), derived.data(), &len);
    if (derived != pub.raw()) {
      throw Error(Errc::schema_error, "JWK x does not match d");
    }
    return SigningKey(std::move(pub), std::move(d), std::move(pkey));
  }
  if (d.size() != kP256CoordSize) {
    throw Error(Errc::schema_error, "P-256 private key must be 32 bytes");
  }
  BnPtr priv(BN_bin2bn(d.data(), static_cast<int>(d.size()), nullptr));
  auto pkey = ec_from_data(pub.raw(), priv.get());
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree> check(
      EVP_PKEY_CTX_new_from_pkey(nullptr, pkey.get(), nullptr));
  if (!check || EVP_PKEY_pairwise_check(check.get()) != 1) {
    throw Error(Errc::schema_error, "JWK x/y do not match d");
  }
  return SigningKey(std::move(pub), std::move(d), std::move(pkey));
}

json SigningKey::to_jwk(bool include_private) const {
  json jwk = public_.to_jwk();
  if (include_private) jwk["d"] = base64url_encode(d_);
  return jwk;
}

Bytes SigningKey::sign(std::span<const std::uint8_t> message) const {
  std::unique_ptr<EVP_MD_CTX, MdCtxFree> ctx(EVP_MD_CTX_new());
  const EVP_MD* md = type() == KeyType::p256 ? EVP_sha256() : nullptr;
  if (EVP_DigestSignInit(ctx.get(), nullptr, md, nullptr, pkey_.get()) != 1) {
    throw Error(Errc::bad_signature, "signing init failed");
  }
  std::size_t len = 0;
  if (EVP_DigestSign(ctx.get(), nullptr, &len, message.data(), message.size()) != 1) {
    throw Error(Errc::bad_signature, "signing failed");
  }
  Bytes sig(len);
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1) {
    throw Error(Errc::bad_signature, "signing failed");
  }
  sig.resize(len);
  return type() == KeyType::p256 ? der_to_raw_ecdsa(sig) : sig;
}

Bytes sha256(std::span<const std::uint8_t> data) {
  Bytes out(32);
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return out;
}

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  if (RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw Error(Errc::storage_failure, "CSPRNG failure");
  }
  return out;
}

std::string random_token(std::size_t nbytes) {
  return base64url_encode(random_bytes(nbytes));
}

std::string uuid_v4() {
  Bytes b = random_bytes(16);
  b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);
  char buf[37];
  std::snprintf(buf, sizeof buf,
                "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x",
                b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10],
                b[11], b[12], b[13], b[14], b[15]);
  return buf;
}

}  // namespace vcbridge::crypto
