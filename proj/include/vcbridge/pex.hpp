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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vcbridge/policy.hpp"

/// DIF Presentation Exchange definitions compiled from a login policy.
namespace vcbridge::pex {

using json = nlohmann::json;

struct FieldConstraint {
  /// JSONPath alternatives; the first is the policy claim path itself, the
  /// second its location inside a JWT-encoded credential (`$.vc...`).
  std::vector<std::string> path;
  bool optional = false;
};

struct InputDescriptor {
  std::string id;
  std::vector<std::string> group;
  std::vector<FieldConstraint> fields;
};

struct SubmissionRequirement {
  std::string rule = "pick";
  int count = 1;
  std::string from;
};

struct PresentationDefinition {
  std::string id;
  std::vector<InputDescriptor> input_descriptors;
  std::vector<SubmissionRequirement> submission_requirements;

  json to_json() const;
};

/// `<credentialID>_pattern<k>`, k counted from zero.
std::string descriptor_id(const std::string& credential_id, std::size_t pattern_index);

/// One descriptor per (expected credential, pattern), grouped by
/// credentialID, with a pick-1 requirement per group. Field constraints
/// request presence only. `definition_id` defaults to a fresh UUID.
PresentationDefinition generate_presentation_definition(
    const policy::LoginPolicy& policy, std::optional<std::string> definition_id = std::nullopt);

/// Reads a JSON array of input descriptors that replaces the generated ones
/// verbatim. Throws Error(syntax_error) or Error(schema_error).
json load_descriptor_override(const std::filesystem::path& path);
json parse_descriptor_override(std::string_view text);

/// The `presentation_definition` object embedded in a request: the generated
/// definition, or the override descriptors under a fresh id.
json request_definition(const policy::LoginPolicy& policy,
                        const std::optional<json>& override_descriptors);

}  // namespace vcbridge::pex
