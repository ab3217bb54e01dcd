// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace clcp {

/// Lowercased word-level vocabulary for descriptions. Words are maximal runs
/// of ASCII letters, digits and underscores; other characters separate them.
class TextVocab {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kOov = 1;

  static std::vector<std::string> words(const std::string& text);

  /// Most frequent words first, ties lexicographic; at most max_size entries
  /// including <pad> and <oov>.
  static TextVocab build(const std::vector<std::string>& docs, std::size_t max_size, std::size_t min_freq = 1);

  struct Encoded {
    std::vector<std::int32_t> ids;
    bool truncated = false;
  };
  Encoded encode(const std::string& text, std::size_t max_len) const;

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::int32_t id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::int32_t find(const std::string& w) const;

  std::string serialize() const;
  static TextVocab parse(const std::string& text);
  void save(const std::string& path) const;
  static TextVocab load(const std::string& path);

 private:
  void reindex();
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace clcp
