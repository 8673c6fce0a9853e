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

#include "policy_oracle.hpp"

#include <algorithm>
#include <numeric>

#include "vcbridge/error.hpp"
#include "vcbridge/policy.hpp"

namespace vcbridge::testing {

namespace {

struct OraclePattern {
  std::string issuer;
  std::vector<std::string> required;
};

struct OracleVc {
  std::string issuer;
  std::vector<std::string> present;
};

}  // namespace

OracleInstance make_oracle_instance(std::mt19937& rng) {
  static const std::vector<std::string> issuers{"did:example:a", "did:example:b", "did:example:c"};
  static const std::vector<std::string> names{"x", "y", "z"};
  OracleInstance out;
  const std::size_t n_expected = 1 + rng() % 3;
  // Mostly equal counts, so that the accept path is well covered.
  const std::size_t n_vcs = rng() % 4 == 0 ? rng() % 4 : n_expected;

  std::vector<std::vector<OraclePattern>> policy;
  out.policy = json::array();
  for (std::size_t e = 0; e < n_expected; ++e) {
    std::vector<OraclePattern> patterns;
    json pj = json::array();
    for (std::size_t k = 0, np = 1 + rng() % 3; k < np; ++k) {
      OraclePattern op{issuers[rng() % 3], {}};
      json claims = json::array();
      for (const auto& name : names) {
        auto roll = rng() % 4;
        if (roll == 0) {
          op.required.push_back(name);
          claims.push_back({{"claimPath", "$.credentialSubject." + name}});
        } else if (roll == 1) {
          claims.push_back({{"claimPath", "$.credentialSubject." + name}, {"required", false}});
        }
      }
      patterns.push_back(op);
      pj.push_back({{"issuer", op.issuer}, {"claims", claims}});
    }
    policy.push_back(patterns);
    out.policy.push_back({{"credentialID", "e" + std::to_string(e)}, {"patterns", pj}});
  }

  std::vector<OracleVc> vcs;
  for (std::size_t v = 0; v < n_vcs; ++v) {
    OracleVc ov{issuers[rng() % 3], {}};
    json subject{{"serial", v}};
    for (const auto& name : names) {
      if (rng() % 2) {
        ov.present.push_back(name);
        subject[name] = "v";
      }
    }
    vcs.push_back(ov);
    out.vcs.push_back({{"issuer", ov.issuer}, {"credentialSubject", subject}});
  }

  auto satisfied = [&](std::size_t e, std::size_t v, std::size_t k) {
    const auto& p = policy[e][k];
    if (p.issuer != vcs[v].issuer) return false;
    const auto& present = vcs[v].present;
    return std::all_of(p.required.begin(), p.required.end(), [&](const std::string& r) {
      return std::find(present.begin(), present.end(), r) != present.end();
    });
  };
  auto lowest = [&](std::size_t e, std::size_t v) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < policy[e].size(); ++k) {
      if (satisfied(e, v, k)) return k;
    }
    return std::nullopt;
  };

  // Permutations come in lexicographic order, so the first valid one gives
  // earlier expected credentials the lowest VC indices.
  if (n_vcs == n_expected) {
    std::vector<std::size_t> perm(n_vcs);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool ok = true;
      for (std::size_t e = 0; e < n_expected && ok; ++e) ok = lowest(e, perm[e]).has_value();
      if (ok) {
        out.expected = perm;
        for (std::size_t e = 0; e < n_expected; ++e) out.expected_patterns.push_back(*lowest(e, perm[e]));
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

std::string check_oracle_instance(const OracleInstance& instance) {
  auto policy = policy::parse_policy(instance.policy.dump());
  const std::string where = " for policy " + instance.policy.dump();
  policy::PolicyMatch m;
  try {
    m = policy::match_credentials(instance.vcs, policy);
  } catch (const Error& e) {
    if (instance.expected) return "rejected a matchable presentation" + where;
    if (e.code() != Errc::no_match) return "rejected with " + std::string(to_string(e.code())) + where;
    return {};
  }
  if (!instance.expected) return "accepted an unmatchable presentation" + where;
  const auto& expected = *instance.expected;
  if (m.assignment.size() != expected.size()) return "incomplete assignment" + where;
  for (std::size_t e = 0; e < expected.size(); ++e) {
    const auto& a = m.assignment[e];
    if (a.credential_id != "e" + std::to_string(e)) return "assignment out of policy order" + where;
    if (a.credential_index != expected[e]) return "assignment differs from the oracle" + where;
    if (a.pattern_index != instance.expected_patterns[e]) return "pattern priority violated" + where;
    if (!policy::evaluate_pattern(instance.vcs[a.credential_index],
                                  policy.expected_credentials[e].patterns[a.pattern_index])) {
      return "assigned credential does not satisfy its pattern" + where;
    }
  }
  return {};
}

}  // namespace vcbridge::testing
