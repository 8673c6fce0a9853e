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

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace vcbridge::testing {

using json = nlohmann::json;

/// A random matching problem drawn from a tiny universe of issuers and claim
/// names, together with its brute-force answer. Satisfaction is decided by
/// set inclusion, without JSONPath.
struct OracleInstance {
  json policy;                // policy document, 1-3 expected credentials
  std::vector<json> vcs;      // 0-3 decoded credentials
  /// First bijection in lexicographic order of VC indices, if any.
  std::optional<std::vector<std::size_t>> expected;
  /// Lowest satisfied pattern per expected credential under `expected`.
  std::vector<std::size_t> expected_patterns;
};

OracleInstance make_oracle_instance(std::mt19937& rng);

/// Runs policy::match_credentials on the instance. Returns an empty string
/// when it agrees with the oracle (including the soundness and pattern
/// priority invariants), else a description of the disagreement.
std::string check_oracle_instance(const OracleInstance& instance);

}  // namespace vcbridge::testing
