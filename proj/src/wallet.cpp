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

#include "vcbridge/wallet.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "vcbridge/credential.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/encoding.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/http_fetch.hpp"
#include "vcbridge/jsonpath.hpp"
#include "vcbridge/jws.hpp"

namespace vcbridge::wallet {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::malformed_credential, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string subject_of(const json& payload) {
  if (payload.contains("sub") && payload["sub"].is_string()) return payload["sub"];
  const json* subject = nullptr;
  if (payload.contains("vc") && payload["vc"].contains("credentialSubject")) {
    subject = &payload["vc"]["credentialSubject"];
  }
  if (subject && subject->is_object() && subject->contains("id") && (*subject)["id"].is_string()) {
    return (*subject)["id"];
  }
  return {};
}

// Subset of JSON Schema used in PEX filters.
bool filter_accepts(const json& filter, const json& value) {
  if (filter.contains("type") && filter["type"].is_string()) {
    const std::string t = filter["type"];
    if ((t == "string" && !value.is_string()) || (t == "array" && !value.is_array()) ||
        (t == "object" && !value.is_object()) || (t == "boolean" && !value.is_boolean()) ||
        (t == "number" && !value.is_number()) ||
        (t == "integer" && !value.is_number_integer())) {
      return false;
    }
  }
  if (filter.contains("const") && filter["const"] != value) return false;
  if (filter.contains("enum") && filter["enum"].is_array()) {
    const auto& e = filter["enum"];
    if (std::find(e.begin(), e.end(), value) == e.end()) return false;
  }
  if (filter.contains("pattern") && filter["pattern"].is_string()) {
    if (!value.is_string()) return false;
    try {
      if (!std::regex_search(value.get<std::string>(),
                             std::regex(filter["pattern"].get<std::string>(),
                                        std::regex::ECMAScript))) {
        return false;
      }
    } catch (const std::regex_error&) {
      return false;
    }
  }
  if (filter.contains("contains")) {
    if (!value.is_array()) return false;
    if (std::none_of(value.begin(), value.end(),
                     [&](const json& item) { return filter_accepts(filter["contains"], item); })) {
      return false;
    }
  }
  return true;
}

bool field_satisfied(const json& field, const json& payload) {
  if (!field.contains("path") || !field["path"].is_array()) return false;
  const json* filter = field.contains("filter") ? &field["filter"] : nullptr;
  // Paths are tried against the JWT payload and against the embedded `vc`
  // object, so both `$.vc.x` and `$.x` spellings resolve.
  std::vector<const json*> roots{&payload};
  if (payload.contains("vc") && payload["vc"].is_object()) roots.push_back(&payload["vc"]);
  for (const auto& p : field["path"]) {
    if (!p.is_string()) continue;
    jsonpath::Path path;
    try {
      path = jsonpath::Path::parse(p.get<std::string>());
    } catch (const Error&) {
      continue;
    }
    for (const json* root : roots) {
      for (const auto& node : jsonpath::select(*root, path)) {
        if (filter == nullptr || filter_accepts(*filter, *node.value)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::string Vault::holder_did() const { return did::did_key(holder_key.public_key()); }

std::string Vault::holder_key_id() const { return did::did_key_id(holder_key.public_key()); }

Vault Vault::load(const std::filesystem::path& dir) {
  json jwk = json::parse(read_file(dir / "holder.jwk"), nullptr, false);
  if (jwk.is_discarded()) throw Error(Errc::malformed_credential, "holder.jwk is not JSON");
  Vault vault{crypto::SigningKey::from_jwk(jwk), {}};
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jwt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string envelope = trim(read_file(file));
    jws::parse(envelope);
    vault.credentials.push_back(std::move(envelope));
  }
  return vault;
}

void Vault::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "holder.jwk") << holder_key.to_jwk(true).dump(2) << "\n";
  for (std::size_t i = 0; i < credentials.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "%03zu.jwt", i);
    std::ofstream(dir / name) << credentials[i] << "\n";
  }
}

Invocation parse_invocation(std::string_view uri) {
  constexpr std::string_view scheme = "openid-vc://";
  if (!uri.starts_with(scheme)) throw Error(Errc::malformed_uri, "not an openid-vc:// URI");
  auto q = uri.find('?');
  if (q == std::string_view::npos) throw Error(Errc::malformed_uri, "invocation has no query");
  auto params = parse_form(uri.substr(q + 1));
  Invocation inv{param(params, "client_id"), param(params, "request_uri")};
  if (inv.client_id.empty()) throw Error(Errc::malformed_uri, "client_id is missing");
  if (inv.request_uri.empty()) throw Error(Errc::malformed_uri, "request_uri is missing");
  if (inv.request_uri.find("://") == std::string::npos) {
    throw Error(Errc::malformed_uri, "request_uri is not absolute");
  }
  return inv;
}

bool satisfies(const json& descriptor, const json& credential_payload) {
  if (!descriptor.is_object()) return false;
  if (!descriptor.contains("constraints")) return true;
  const json& constraints = descriptor["constraints"];
  if (!constraints.contains("fields")) return true;
  for (const auto& field : constraints["fields"]) {
    if (field.value("optional", false)) continue;
    if (!field_satisfied(field, credential_payload)) return false;
  }
  return true;
}

std::vector<Selection> select_credentials(const json& definition,
                                          const std::vector<std::string>& credentials,
                                          const std::string& holder_did,
                                          bool enforce_holder_binding) {
  if (!definition.contains("input_descriptors") || !definition["input_descriptors"].is_array()) {
    throw Error(Errc::no_suitable_credential, "presentation definition has no input descriptors");
  }
  std::vector<json> payloads;
  for (const auto& envelope : credentials) {
    try {
      payloads.push_back(jws::parse(envelope).payload_json());
    } catch (const Error&) {
      payloads.push_back(json());
    }
  }
  auto eligible = [&](std::size_t i) {
    return payloads[i].is_object() &&
           (!enforce_holder_binding || subject_of(payloads[i]) == holder_did);
  };

  const json& descriptors = definition["input_descriptors"];
  std::vector<std::vector<const json*>> groups;
  if (definition.contains("submission_requirements") &&
      definition["submission_requirements"].is_array()) {
    for (const auto& req : definition["submission_requirements"]) {
      const std::string from = req.value("from", "");
      std::vector<const json*> members;
      for (const auto& d : descriptors) {
        if (d.contains("group") && d["group"].is_array() &&
            std::find(d["group"].begin(), d["group"].end(), from) != d["group"].end()) {
          members.push_back(&d);
        }
      }
      groups.push_back(std::move(members));
    }
  } else {
    for (const auto& d : descriptors) groups.push_back({&d});
  }

  std::vector<Selection> out;
  std::set<std::size_t> used;
  for (const auto& members : groups) {
    std::optional<Selection> pick;
    for (std::size_t i = 0; i < payloads.size() && !pick; ++i) {
      if (used.count(i) || !eligible(i)) continue;
      for (const json* d : members) {
        if (satisfies(*d, payloads[i])) {
          pick = Selection{d->value("id", ""), i};
          break;
        }
      }
    }
    if (!pick) throw Error(Errc::no_suitable_credential, "no credential satisfies the request");
    used.insert(pick->vault_index);
    out.push_back(*pick);
  }
  return out;
}

std::string tamper_payload(const std::string& compact) {
  auto first = compact.find('.');
  auto second = compact.find('.', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw Error(Errc::malformed_jws, "not a compact JWS");
  }
  Bytes payload = base64url_decode(std::string_view(compact).substr(first + 1, second - first - 1));
  if (payload.empty()) throw Error(Errc::malformed_jws, "empty payload");
  payload[payload.size() / 2] ^= 0x01;
  return compact.substr(0, first + 1) + base64url_encode(payload) + compact.substr(second);
}

PresentResult present(std::string_view uri, const Vault& vault, const PresentOptions& options) {
  const Invocation inv = parse_invocation(uri);
  http::Agent agent("wallet", options.transcript, options.ca_file);

  auto fetched = agent.get(inv.request_uri);
  if (fetched.status != 200) {
    throw Error(Errc::protocol_error,
                "presentation request fetch returned HTTP " + std::to_string(fetched.status));
  }
  const std::string request_jws = trim(fetched.body);
  auto request = jws::parse(request_jws);

  http::FetchOptions fetch_options;
  fetch_options.ca_file = options.ca_file;
  did::Resolver resolver(std::make_shared<http::HttpsFetcher>(fetch_options), options.clock);
  std::optional<std::string> kid;
  if (request.header.contains("kid") && request.header["kid"].is_string()) {
    kid = request.header["kid"].get<std::string>();
  }
  auto key = resolver.resolve(inv.client_id, kid, did::Purpose::authentication);
  if (!jws::verify(request, key.public_key)) {
    throw Error(Errc::bad_signature, "presentation request is not signed by " + inv.client_id);
  }
  json req = request.payload_json();
  if (req.value("client_id", "") != inv.client_id) {
    throw Error(Errc::protocol_error, "request client_id differs from the invocation");
  }
  if (req.value("response_mode", "") != "direct_post" ||
      req.value("response_type", "") != "vp_token") {
    throw Error(Errc::protocol_error, "only direct_post vp_token requests are supported");
  }
  const std::string response_uri = req.value("response_uri", "");
  const std::string nonce = req.value("nonce", "");
  if (response_uri.empty() || nonce.empty()) {
    throw Error(Errc::protocol_error, "request lacks response_uri or nonce");
  }
  if (req.contains("exp") && req["exp"].is_number() &&
      req["exp"].get<std::int64_t>() + kClockSkewSeconds < options.clock()) {
    throw Error(Errc::expired, "presentation request has expired");
  }

  const json definition = req.value("presentation_definition", json::object());
  auto selection = select_credentials(definition, vault.credentials, vault.holder_did(),
                                      !options.violate_holder_binding);

  vc::PresentationSpec spec;
  spec.holder_did = vault.holder_did();
  spec.key_id = vault.holder_key_id();
  spec.audience = inv.client_id;
  spec.nonce = options.wrong_nonce ? nonce + "-wrong" : nonce;
  spec.issued_at = options.clock();
  if (options.expired) spec.issued_at -= spec.lifetime_seconds + 10 * kClockSkewSeconds;
  json descriptor_map = json::array();
  for (std::size_t i = 0; i < selection.size(); ++i) {
    spec.credentials.push_back(vault.credentials[selection[i].vault_index]);
    descriptor_map.push_back(
        {{"id", selection[i].descriptor_id},
         {"format", "jwt_vp"},
         {"path", "$"},
         {"path_nested",
          {{"format", "jwt_vc"}, {"path", "$.vp.verifiableCredential[" + std::to_string(i) + "]"}}}});
  }
  std::string vp = vc::sign_presentation(spec, vault.holder_key);
  if (options.tamper_vp) vp = tamper_payload(vp);

  json submission{{"id", crypto::uuid_v4()},
                  {"definition_id", definition.value("id", "")},
                  {"descriptor_map", descriptor_map}};
  Params form{{"vp_token", vp}, {"presentation_submission", submission.dump()}};
  if (req.contains("state") && req["state"].is_string()) form.emplace("state", req["state"]);
  const std::string body = encode_form(form);

  PresentResult result;
  result.request_payload = req;
  result.vp_token = vp;
  auto response = agent.post_form(response_uri, body);
  if (options.resubmit) response = agent.post_form(response_uri, body);
  result.status = response.status;
  result.response = json::parse(response.body, nullptr, false);
  if (result.response.is_discarded()) result.response = response.body;
  return result;
}

}  // namespace vcbridge::wallet
