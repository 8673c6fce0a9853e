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

#include "vcbridge/pex.hpp"

#include <fstream>
#include <sstream>

#include "vcbridge/crypto.hpp"
#include "vcbridge/error.hpp"

namespace vcbridge::pex {

json PresentationDefinition::to_json() const {
  json descriptors = json::array();
  for (const auto& d : input_descriptors) {
    json fields = json::array();
    for (const auto& f : d.fields) {
      json field{{"path", f.path}};
      if (f.optional) field["optional"] = true;
      fields.push_back(std::move(field));
    }
    descriptors.push_back(
        {{"id", d.id}, {"group", d.group}, {"constraints", {{"fields", std::move(fields)}}}});
  }
  json requirements = json::array();
  for (const auto& r : submission_requirements) {
    requirements.push_back({{"rule", r.rule}, {"count", r.count}, {"from", r.from}});
  }
  return {{"id", id},
          {"input_descriptors", std::move(descriptors)},
          {"submission_requirements", std::move(requirements)}};
}

std::string descriptor_id(const std::string& credential_id, std::size_t pattern_index) {
  return credential_id + "_pattern" + std::to_string(pattern_index);
}

PresentationDefinition generate_presentation_definition(
    const policy::LoginPolicy& policy, std::optional<std::string> definition_id) {
  PresentationDefinition def;
  def.id = definition_id ? *definition_id : crypto::uuid_v4();
  for (const auto& ec : policy.expected_credentials) {
    for (std::size_t k = 0; k < ec.patterns.size(); ++k) {
      InputDescriptor d{descriptor_id(ec.credential_id, k), {ec.credential_id}, {}};
      for (const auto& claim : ec.patterns[k].claims) {
        const std::string& p = claim.claim_path.text();
        d.fields.push_back({{p, "$.vc" + p.substr(1)}, !claim.required});
      }
      def.input_descriptors.push_back(std::move(d));
    }
    def.submission_requirements.push_back({"pick", 1, ec.credential_id});
  }
  return def;
}

json parse_descriptor_override(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::syntax_error, "descriptor override is not valid JSON");
  if (!doc.is_array() || doc.empty()) {
    throw Error(Errc::schema_error, "descriptor override must be a non-empty array");
  }
  for (const auto& d : doc) {
    if (!d.is_object() || !d.contains("id") || !d.at("id").is_string()) {
      throw Error(Errc::schema_error, "every input descriptor needs a string id");
    }
    if (!d.contains("constraints") || !d.at("constraints").is_object()) {
      throw Error(Errc::schema_error,
                  "input descriptor " + d.at("id").get<std::string>() + " lacks constraints");
    }
  }
  return doc;
}

json load_descriptor_override(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::syntax_error, "cannot read descriptor override " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_descriptor_override(ss.str());
}

json request_definition(const policy::LoginPolicy& policy,
                        const std::optional<json>& override_descriptors) {
  if (override_descriptors) {
    return {{"id", crypto::uuid_v4()}, {"input_descriptors", *override_descriptors}};
  }
  return generate_presentation_definition(policy).to_json();
}

}  // namespace vcbridge::pex
