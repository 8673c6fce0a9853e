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

#include "vcbridge/policy.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "vcbridge/did.hpp"
#include "vcbridge/error.hpp"

namespace vcbridge::policy {
namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(Errc::schema_error, where + ": " + what);
}

void only_members(const json& obj, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) schema(where, "unknown member '" + it.key() + "'");
  }
}

const json& member(const json& obj, const char* name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) schema(where, std::string("missing '") + name + "'");
  return *it;
}

std::string string_member(const json& obj, const char* name, const std::string& where) {
  const json& v = member(obj, name, where);
  if (!v.is_string()) schema(where, std::string("'") + name + "' must be a string");
  return v.get<std::string>();
}

ClaimEntry parse_claim(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "claim must be an object");
  only_members(j, {"claimPath", "newPath", "token", "required"}, where);
  ClaimEntry entry{jsonpath::Path::parse(string_member(j, "claimPath", where)),
                   std::nullopt, TokenTarget::access_token, true};
  if (j.contains("newPath")) {
    auto path = jsonpath::Path::parse(string_member(j, "newPath", where));
    if (!path.is_definite()) schema(where, "newPath must address exactly one location");
    if (path.empty()) schema(where, "newPath must name a member below the root");
    for (const auto& seg : path.segments()) {
      if (seg.kind != jsonpath::Segment::Kind::name) {
        schema(where, "newPath may only contain member names");
      }
    }
    entry.new_path = std::move(path);
  }
  if (j.contains("token")) {
    auto token = string_member(j, "token", where);
    if (token == "id_token") {
      entry.token = TokenTarget::id_token;
    } else if (token != "access_token") {
      schema(where, "token must be id_token or access_token");
    }
  }
  if (j.contains("required")) {
    if (!j.at("required").is_boolean()) schema(where, "required must be a boolean");
    entry.required = j.at("required").get<bool>();
  }
  return entry;
}

Pattern parse_pattern(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "pattern must be an object");
  only_members(j, {"issuer", "claims"}, where);
  Pattern p;
  p.issuer = string_member(j, "issuer", where);
  if (!did::is_valid(p.issuer)) schema(where, "issuer is not a DID: " + p.issuer);
  const json& claims = member(j, "claims", where);
  if (!claims.is_array()) schema(where, "claims must be an array");
  for (std::size_t k = 0; k < claims.size(); ++k) {
    p.claims.push_back(parse_claim(claims[k], where + ".claims[" + std::to_string(k) + "]"));
  }
  return p;
}

}  // namespace

std::string_view to_string(TokenTarget t) {
  return t == TokenTarget::id_token ? "id_token" : "access_token";
}

LoginPolicy parse_policy(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::syntax_error, "login policy is not valid JSON");
  if (!doc.is_array()) schema("policy", "must be an array of expected credentials");
  if (doc.empty()) schema("policy", "at least one expected credential is required");

  LoginPolicy policy;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    std::string where = "policy[" + std::to_string(i) + "]";
    const json& j = doc[i];
    if (!j.is_object()) schema(where, "expected credential must be an object");
    only_members(j, {"credentialID", "patterns"}, where);
    ExpectedCredential ec;
    ec.credential_id = string_member(j, "credentialID", where);
    if (ec.credential_id.empty()) schema(where, "credentialID must not be empty");
    if (!ids.insert(ec.credential_id).second) {
      schema(where, "duplicate credentialID '" + ec.credential_id + "'");
    }
    const json& patterns = member(j, "patterns", where);
    if (!patterns.is_array() || patterns.empty()) {
      schema(where, "patterns must be a non-empty array");
    }
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      ec.patterns.push_back(
          parse_pattern(patterns[k], where + ".patterns[" + std::to_string(k) + "]"));
    }
    policy.expected_credentials.push_back(std::move(ec));
  }
  return policy;
}

LoginPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::syntax_error, "cannot read login policy " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_policy(ss.str());
}

json to_json(const LoginPolicy& policy) {
  json out = json::array();
  for (const auto& ec : policy.expected_credentials) {
    json patterns = json::array();
    for (const auto& p : ec.patterns) {
      json claims = json::array();
      for (const auto& c : p.claims) {
        json cj{{"claimPath", c.claim_path.text()},
                {"token", to_string(c.token)},
                {"required", c.required}};
        if (c.new_path) cj["newPath"] = c.new_path->text();
        claims.push_back(std::move(cj));
      }
      patterns.push_back({{"issuer", p.issuer}, {"claims", std::move(claims)}});
    }
    out.push_back({{"credentialID", ec.credential_id}, {"patterns", std::move(patterns)}});
  }
  return out;
}

std::string issuer_of(const json& vc_payload) {
  if (!vc_payload.is_object()) return {};
  auto it = vc_payload.find("issuer");
  if (it == vc_payload.end()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_object()) {
    auto id = it->find("id");
    if (id != it->end() && id->is_string()) return id->get<std::string>();
  }
  return {};
}

bool evaluate_pattern(const json& vc_payload, const Pattern& pattern) {
  if (issuer_of(vc_payload) != pattern.issuer) return false;
  for (const auto& claim : pattern.claims) {
    if (claim.required && jsonpath::select(vc_payload, claim.claim_path).empty()) {
      return false;
    }
  }
  return true;
}

const MatchedCredential* PolicyMatch::find(std::string_view credential_id) const {
  for (const auto& m : assignment) {
    if (m.credential_id == credential_id) return &m;
  }
  return nullptr;
}

PolicyMatch match_credentials(std::span<const json> vc_payloads,
                              const LoginPolicy& policy) {
  const auto& expected = policy.expected_credentials;
  const std::size_t n = expected.size();
  for (std::size_t a = 0; a < vc_payloads.size(); ++a) {
    for (std::size_t b = a + 1; b < vc_payloads.size(); ++b) {
      if (vc_payloads[a] == vc_payloads[b]) {
        throw Error(Errc::duplicate_credential,
                    "credentials " + std::to_string(a) + " and " +
                        std::to_string(b) + " are identical");
      }
    }
  }
  if (vc_payloads.size() != n) {
    throw Error(Errc::no_match, "presentation carries " +
                                    std::to_string(vc_payloads.size()) +
                                    " credentials, policy expects " +
                                    std::to_string(n));
  }

  // best[i][j]: lowest pattern of expected credential i matched by VC j.
  std::vector<std::vector<std::optional<std::size_t>>> best(
      n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& patterns = expected[i].patterns;
      for (std::size_t k = 0; k < patterns.size(); ++k) {
        if (evaluate_pattern(vc_payloads[j], patterns[k])) {
          best[i][j] = k;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> choice(n);
  std::vector<bool> used(n, false);
  auto search = [&](auto& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || !best[i][j]) continue;
      used[j] = true;
      choice[i] = j;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!search(search, 0)) {
    throw Error(Errc::no_match, "presented credentials do not satisfy the login policy");
  }

  PolicyMatch match;
  for (std::size_t i = 0; i < n; ++i) {
    match.assignment.push_back({expected[i].credential_id, choice[i], *best[i][choice[i]]});
  }
  return match;
}

}  // namespace vcbridge::policy
