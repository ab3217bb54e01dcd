// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "clcp/pylex.hpp"
#include "clcp/util.hpp"

namespace clcp::testing {

struct GoldenSnippet {
  std::string name;
  std::string raw;
  std::string clean;
  std::vector<pylex::Token> tokens;  // spans left empty
};

inline std::vector<pylex::Token> parse_token_file(const std::string& text) {
  std::vector<pylex::Token> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    pylex::Token t;
    t.component = pylex::component_from_name(line.substr(0, tab)).value();
    t.text = pylex::unescape_text(line.substr(tab + 1));
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<GoldenSnippet> load_golden(const std::string& dir) {
  std::vector<std::filesystem::path> stems;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto p = e.path();
    if (p.extension() == ".tokens") stems.push_back(p.parent_path() / p.stem());
  }
  std::sort(stems.begin(), stems.end());
  std::vector<GoldenSnippet> out;
  for (const auto& s : stems) {
    GoldenSnippet g;
    g.name = s.filename().string();
    g.raw = util::read_file(s.string() + ".py");
    g.clean = util::read_file(s.string() + ".clean.py");
    g.tokens = parse_token_file(util::read_file(s.string() + ".tokens"));
    out.push_back(std::move(g));
  }
  return out;
}

// Compares class and text only.
inline bool same_tokens(const std::vector<pylex::Token>& a, const std::vector<pylex::Token>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
    return x.component == y.component && x.text == y.text;
  });
}

}  // namespace clcp::testing
