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

// wallet-sim: headless holder wallet and fixture issuance helper.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vcbridge/credential.hpp"
#include "vcbridge/did.hpp"
#include "vcbridge/error.hpp"
#include "vcbridge/status_list.hpp"
#include "vcbridge/wallet.hpp"

using json = nlohmann::json;
using namespace vcbridge;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << "\n";
}

crypto::SigningKey load_key(const std::string& path) {
  return crypto::SigningKey::from_jwk(json::parse(read_file(path)));
}

// did:key issuers use the key-derived method id, others "#key-1".
std::string key_id_for(const std::string& issuer_did, const crypto::SigningKey& key) {
  if (issuer_did.starts_with("did:key:")) return did::did_key_id(key.public_key());
  return issuer_did + "#key-1";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Headless SSI wallet simulator"};
  app.require_subcommand(1);

  auto* present = app.add_subcommand("present", "Answer an openid-vc:// invocation");
  std::string uri, vault_dir, ca_file;
  wallet::PresentOptions popts;
  present->add_option("uri", uri, "Invocation URI")->required();
  present->add_option("--vault", vault_dir, "Vault directory")->required();
  present->add_option("--ca-file", ca_file, "Extra trusted CA bundle");
  present->add_flag("--wrong-nonce", popts.wrong_nonce, "Sign the VP over a different nonce");
  present->add_flag("--violate-holder-binding", popts.violate_holder_binding,
                    "Allow credentials issued to other DIDs");
  present->add_flag("--tamper-vp", popts.tamper_vp, "Corrupt the VP payload after signing");
  present->add_flag("--resubmit", popts.resubmit, "Post the same submission twice");
  present->add_flag("--expired", popts.expired, "Sign a VP whose validity has elapsed");

  auto* keygen = app.add_subcommand("keygen", "Generate a key and print its did:key");
  std::string key_out, key_type = "ed25519";
  keygen->add_option("--out", key_out, "JWK output file")->required();
  keygen->add_option("--type", key_type, "ed25519 or p256")
      ->check(CLI::IsMember({"ed25519", "p256"}));

  auto* issue = app.add_subcommand("issue", "Issue a VC-JWT fixture");
  std::string issuer_key, issuer_did, subject, claims_json = "{}", status_url, issue_out;
  std::vector<std::string> types{"VerifiableCredential"};
  std::uint64_t status_index = 0;
  bool expired = false;
  std::int64_t lifetime = 365 * 24 * 3600;
  issue->add_option("--issuer-key", issuer_key, "Issuer private JWK")->required();
  issue->add_option("--issuer-did", issuer_did, "Issuer DID (default: did:key of the key)");
  issue->add_option("--subject", subject, "Subject DID")->required();
  issue->add_option("--claims", claims_json, "credentialSubject members as JSON");
  issue->add_option("--type", types, "Credential types");
  issue->add_option("--status-list", status_url, "StatusList2021 credential URL");
  issue->add_option("--index", status_index, "Status list index");
  issue->add_option("--lifetime", lifetime, "Validity in seconds");
  issue->add_flag("--expired", expired, "Issue an already expired credential");
  issue->add_option("--out", issue_out, "Output file (default stdout)");

  auto* status_cmd = app.add_subcommand("status-list", "Issue a StatusList2021 credential");
  std::string sl_key, sl_did, sl_url, sl_out;
  std::uint64_t sl_bits = 131072;
  std::vector<std::uint64_t> revoked;
  status_cmd->add_option("--issuer-key", sl_key, "Issuer private JWK")->required();
  status_cmd->add_option("--issuer-did", sl_did, "Issuer DID (default: did:key of the key)");
  status_cmd->add_option("--url", sl_url, "URL the list is served from")->required();
  status_cmd->add_option("--size", sl_bits, "List length in bits (multiple of 8)");
  status_cmd->add_option("--revoke", revoked, "Indices to mark revoked");
  status_cmd->add_option("--out", sl_out, "Output file (default stdout)");

  auto* doc_cmd = app.add_subcommand("did-doc", "Print a DID document for a key");
  std::string doc_key, doc_did;
  doc_cmd->add_option("--key", doc_key, "JWK file")->required();
  doc_cmd->add_option("--did", doc_did, "DID, e.g. did:web:example.com")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*present) {
      popts.ca_file = ca_file;
      auto vault = wallet::Vault::load(vault_dir);
      auto result = wallet::present(uri, vault, popts);
      std::cout << json{{"status", result.status}, {"response", result.response}}.dump(2) << "\n";
      return result.status == 200 ? 0 : 1;
    }
    if (*keygen) {
      auto key = crypto::SigningKey::generate(key_type == "p256" ? crypto::KeyType::p256
                                                                 : crypto::KeyType::ed25519);
      write_output(key_out, key.to_jwk(true).dump(2));
      std::cout << did::did_key(key.public_key()) << "\n";
      return 0;
    }
    if (*issue) {
      auto key = load_key(issuer_key);
      if (issuer_did.empty()) issuer_did = did::did_key(key.public_key());
      vc::CredentialSpec spec;
      spec.issuer_did = issuer_did;
      spec.key_id = key_id_for(issuer_did, key);
      spec.subject_did = subject;
      spec.subject_claims = json::parse(claims_json);
      spec.types = types;
      const auto now = system_now();
      spec.issued_at = expired ? now - 2 * lifetime : now;
      spec.expires_at = expired ? now - lifetime : now + lifetime;
      if (!status_url.empty()) spec.credential_status = status::make_entry(status_url, status_index);
      write_output(issue_out, vc::issue_credential(spec, key));
      return 0;
    }
    if (*status_cmd) {
      if (sl_bits == 0 || sl_bits % 8 != 0) throw std::runtime_error("--size must be a multiple of 8");
      auto key = load_key(sl_key);
      if (sl_did.empty()) sl_did = did::did_key(key.public_key());
      Bytes bits(sl_bits / 8, 0);
      for (auto i : revoked) status::set_bit(bits, i);
      vc::CredentialSpec spec;
      spec.issuer_did = sl_did;
      spec.key_id = key_id_for(sl_did, key);
      spec.issued_at = system_now();
      spec.vc_override = status::make_list_credential(sl_did, sl_url, status::encode_list(bits));
      write_output(sl_out, vc::issue_credential(spec, key));
      return 0;
    }
    if (*doc_cmd) {
      auto key = load_key(doc_key);
      std::cout << did::make_document(doc_did, key.public_key()).dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "wallet-sim: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wallet-sim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
