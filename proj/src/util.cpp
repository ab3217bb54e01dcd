// SPDX-License-Identifier: Apache-2.0
#include "clcp/util.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clcp::util {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string file_hash(const std::string& path) { return hex64(fnv1a64(read_file(path))); }

}  // namespace clcp::util
