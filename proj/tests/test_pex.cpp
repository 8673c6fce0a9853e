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

#include <doctest.h>

#include "vcbridge/error.hpp"
#include "vcbridge/pex.hpp"
#include "vcbridge/policy.hpp"

using namespace vcbridge;
using json = nlohmann::json;

namespace {

const char* kListing1 = R"([{"credentialID":"expected_credential_for_email","patterns":[
  {"issuer":"did:example:123","claims":[{"claimPath":"$.credentialSubject.e_mail","newPath":"$.email","token":"id_token"}]},
  {"issuer":"did:example:456","claims":[{"claimPath":"$.credentialSubject.email","token":"id_token"}]}]}])";

}  // namespace

TEST_CASE("one descriptor per pattern, one requirement per expected credential") {
  auto policy = policy::parse_policy(kListing1);
  auto def = pex::generate_presentation_definition(policy, std::string("def-1"));
  auto j = def.to_json();
  CHECK(j["id"] == "def-1");
  REQUIRE(j["input_descriptors"].size() == 2);
  CHECK(j["input_descriptors"][0]["id"] == "expected_credential_for_email_pattern0");
  CHECK(j["input_descriptors"][1]["id"] == "expected_credential_for_email_pattern1");
  for (const auto& d : j["input_descriptors"]) {
    CHECK(d["group"] == json::array({"expected_credential_for_email"}));
    CHECK_FALSE(d["constraints"]["fields"][0].contains("filter"));
  }
  CHECK(j["input_descriptors"][0]["constraints"]["fields"][0]["path"] ==
        json::array({"$.credentialSubject.e_mail", "$.vc.credentialSubject.e_mail"}));
  CHECK(j["submission_requirements"] ==
        json::parse(R"([{"rule":"pick","count":1,"from":"expected_credential_for_email"}])"));
}

TEST_CASE("optional claims become optional fields") {
  auto policy = policy::parse_policy(
      R"([{"credentialID":"c","patterns":[{"issuer":"did:example:1","claims":[
          {"claimPath":"$.credentialSubject.a"},{"claimPath":"$.credentialSubject.b","required":false}]}]}])");
  auto fields = pex::generate_presentation_definition(policy).to_json()["input_descriptors"][0]
                    ["constraints"]["fields"];
  CHECK_FALSE(fields[0].contains("optional"));
  CHECK(fields[1]["optional"] == true);
}

TEST_CASE("definition ids are fresh per call") {
  auto policy = policy::parse_policy(kListing1);
  CHECK(pex::generate_presentation_definition(policy).id !=
        pex::generate_presentation_definition(policy).id);
}

TEST_CASE("override descriptors are embedded verbatim") {
  const char* text = R"([{"id":"email","purpose":"only the type","constraints":{"fields":[
      {"path":["$.credentialSubject.type"],"filter":{"type":"string","pattern":"EmailPass"}}]}}])";
  auto override_descriptors = pex::parse_descriptor_override(text);
  auto policy = policy::parse_policy(kListing1);
  auto def = pex::request_definition(policy, override_descriptors);
  CHECK(def["input_descriptors"] == json::parse(text));
  CHECK_FALSE(def.contains("submission_requirements"));
  CHECK(def["id"].is_string());

  auto generated = pex::request_definition(policy, std::nullopt);
  CHECK(generated["input_descriptors"].size() == 2);
}

TEST_CASE("malformed overrides") {
  CHECK_THROWS_AS(pex::parse_descriptor_override("{"), Error);
  CHECK_THROWS_AS(pex::parse_descriptor_override("[]"), Error);
  CHECK_THROWS_AS(pex::parse_descriptor_override(R"([{"constraints":{}}])"), Error);
  CHECK_THROWS_AS(pex::parse_descriptor_override(R"([{"id":"x"}])"), Error);
  CHECK_THROWS_AS(pex::load_descriptor_override("/nonexistent/override.json"), Error);
}
