// SPDX-License-Identifier: Apache-2.0
#include "clcp/textvocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "clcp/util.hpp"

namespace clcp {

namespace {
constexpr const char* kHeader = "# clcp-text-vocab";
}

std::vector<std::string> TextVocab::words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

TextVocab TextVocab::build(const std::vector<std::string>& docs, std::size_t max_size, std::size_t min_freq) {
  if (max_size < 2) throw std::invalid_argument("text vocabulary needs room for <pad> and <oov>");
  std::map<std::string, std::size_t> counts;
  for (const auto& d : docs) {
    for (auto& w : words(d)) ++counts[w];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  TextVocab v;
  v.words_ = {"<pad>", "<oov>"};
  for (const auto& [w, n] : ranked) {
    if (v.words_.size() >= max_size || n < min_freq) break;
    v.words_.push_back(w);
  }
  v.reindex();
  return v;
}

void TextVocab::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < words_.size(); ++i) index_[words_[i]] = static_cast<std::int32_t>(i);
}

std::int32_t TextVocab::find(const std::string& w) const {
  const auto it = index_.find(w);
  return it == index_.end() || it->second < 2 ? kOov : it->second;
}

TextVocab::Encoded TextVocab::encode(const std::string& text, std::size_t max_len) const {
  Encoded e;
  for (const auto& w : words(text)) {
    if (e.ids.size() == max_len) {
      e.truncated = true;
      break;
    }
    e.ids.push_back(find(w));
  }
  if (e.ids.empty()) e.ids.push_back(kOov);
  return e;
}

std::string TextVocab::serialize() const {
  std::string out = std::string(kHeader) + "\nversion\t1\n";
  for (std::size_t i = 2; i < words_.size(); ++i) out += words_[i] + "\n";
  return out;
}

TextVocab TextVocab::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("not a text vocabulary file");
  if (!std::getline(in, line) || line != "version\t1") throw std::runtime_error("unsupported text vocabulary version");
  TextVocab v;
  v.words_ = {"<pad>", "<oov>"};
  while (std::getline(in, line)) {
    if (!line.empty()) v.words_.push_back(line);
  }
  v.reindex();
  return v;
}

void TextVocab::save(const std::string& path) const { util::write_file(path, serialize()); }

TextVocab TextVocab::load(const std::string& path) { return parse(util::read_file(path)); }

}  // namespace clcp
