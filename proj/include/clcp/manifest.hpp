// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace clcp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written into every run directory as `manifest.json`.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string vocab_hash;
  std::map<std::string, std::string> data_hashes;  // path -> hash
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string started;
  std::string finished;
  std::vector<std::string> artifacts;  // paths relative to the run directory

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  void save(const std::string& dir) const;
};

/// UTC time as ISO 8601.
std::string utc_now();

/// Creates `base`, or `base-2`, `base-3`, ... when it exists; existing run
/// directories are never reused. Returns the path created.
std::string fresh_run_dir(const std::string& base);

}  // namespace clcp
