// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clcp/ingest.hpp"

namespace clcp::textclean {

/// Records with fewer surviving words are dropped.
inline constexpr std::size_t kMinWords = 3;

/// Rule names in application order.
inline constexpr std::string_view kRuleHtmlEntities = "html_entities";
inline constexpr std::string_view kRuleUrl = "url";
inline constexpr std::string_view kRuleDoctest = "doctest";
inline constexpr std::string_view kRuleDirectory = "directory";
inline constexpr std::string_view kRuleParameterTable = "parameter_table";
inline constexpr std::string_view kRuleWhitespace = "whitespace";

struct RuleHit {
  std::string rule;
  std::size_t count = 0;          // spans removed or rewritten
  std::size_t chars_removed = 0;  // code points attributed to this rule
  friend bool operator==(const RuleHit&, const RuleHit&) = default;
};

struct CleanReport {
  std::vector<RuleHit> rules_fired;  // only rules that changed something
  bool dropped = false;
  std::size_t before_len = 0;  // code points
  std::size_t after_len = 0;
};

/// Strips URL spans, doctest demonstrations, directory listings and
/// parameter tables, then collapses whitespace. Entities such as `&amp;gt;`
/// are decoded first. Total; the result is idempotent.
std::pair<std::string, CleanReport> clean_doc(std::string_view doc);

struct CorpusReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::map<std::string, std::size_t> rule_counts;
  std::map<std::string, std::size_t> rule_chars;

  std::string to_json() const;
};

/// clean_doc over every record; dropped records are excluded.
std::pair<std::vector<ingest::PairRecord>, CorpusReport> clean_corpus(
    const std::vector<ingest::PairRecord>& records);

}  // namespace clcp::textclean
