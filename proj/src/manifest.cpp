// SPDX-License-Identifier: Apache-2.0
#include "clcp/manifest.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>

#include "clcp/util.hpp"
#include "json.hpp"

namespace clcp {

std::string RunManifest::to_json() const {
  nlohmann::json j = {{"command", command},           {"config_hash", config_hash}, {"vocab_hash", vocab_hash},
                      {"data_hashes", data_hashes},   {"seed", seed},               {"tool_version", tool_version},
                      {"started", started},           {"finished", finished},       {"artifacts", artifacts}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.command = j.value("command", "");
  m.config_hash = j.value("config_hash", "");
  m.vocab_hash = j.value("vocab_hash", "");
  m.data_hashes = j.value("data_hashes", std::map<std::string, std::string>{});
  m.seed = j.value("seed", std::uint64_t{0});
  m.tool_version = j.value("tool_version", "");
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.artifacts = j.value("artifacts", std::vector<std::string>{});
  return m;
}

void RunManifest::save(const std::string& dir) const { util::write_file(dir + "/manifest.json", to_json()); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fresh_run_dir(const std::string& base) {
  namespace fs = std::filesystem;
  if (fs::path(base).has_parent_path()) fs::create_directories(fs::path(base).parent_path());
  for (int k = 1;; ++k) {
    const std::string path = k == 1 ? base : base + "-" + std::to_string(k);
    if (fs::create_directory(path)) return path;
  }
}

}  // namespace clcp
