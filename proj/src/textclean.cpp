// SPDX-License-Identifier: Apache-2.0
#include "clcp/textclean.hpp"

#include <array>
#include <cctype>
#include <regex>

#include "clcp/util.hpp"
#include "json.hpp"

namespace clcp::textclean {

namespace {

using Lines = std::vector<std::string>;

Lines split_lines(const std::string& s) {
  Lines out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t nl = s.find('\n', pos);
    if (nl == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::string join_lines(const Lines& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

bool is_blank(std::string_view s) {
  for (unsigned char c : s) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t indent_of(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && (s[n] == ' ' || s[n] == '\t')) ++n;
  return n;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t j = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

// Step 0: decode HTML entities until nothing changes.
std::size_t decode_entities(std::string& text) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kEntities = {{
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""},
      {"&#39;", "'"}, {"&#x27;", "'"}, {"&apos;", "'"}, {"&nbsp;", " "},
  }};
  std::size_t hits = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
      bool matched = false;
      if (text[i] == '&') {
        for (const auto& [ent, rep] : kEntities) {
          if (text.compare(i, ent.size(), ent) == 0) {
            out += rep;
            i += ent.size();
            ++hits;
            matched = changed = true;
            break;
          }
        }
      }
      if (!matched) out.push_back(text[i++]);
    }
    text = std::move(out);
  }
  return hits;
}

// Rule 1: URLs, including `<...>`-wrapped ones.
std::size_t strip_urls(std::string& text) {
  static const std::regex kUrl(
      R"(<\s*(?:https?|ftp)://[^>\s]*\s*>|(?:https?|ftp)://[^\s<>"'\])]+|\bwww\.[^\s<>"'\])]+)",
      std::regex::ECMAScript | std::regex::icase);
  std::string out;
  std::size_t hits = 0;
  auto begin = std::sregex_iterator(text.begin(), text.end(), kUrl);
  std::size_t cursor = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto pos = static_cast<std::size_t>(it->position());
    std::size_t len = static_cast<std::size_t>(it->length());
    // Trailing sentence punctuation is not part of a bare URL.
    if (text[pos] != '<') {
      while (len > 0 && std::string_view(".,;:").find(text[pos + len - 1]) != std::string_view::npos) --len;
    }
    out.append(text, cursor, pos - cursor);
    cursor = pos + len;
    ++hits;
  }
  out.append(text, cursor, std::string::npos);
  text = std::move(out);
  return hits;
}

// Rule 2: `>>>` demonstrations plus their output lines.
std::size_t strip_doctests(Lines& lines) {
  std::size_t hits = 0;
  Lines out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t at = line.find(">>>");
    if (at == std::string::npos) {
      out.push_back(line);
      continue;
    }
    ++hits;
    const std::string head = line.substr(0, at);
    if (!is_blank(head)) out.push_back(head);
    // Continuation (`...`) and output lines run until a blank line or the next prompt.
    while (i + 1 < lines.size() && !is_blank(lines[i + 1]) &&
           lines[i + 1].find(">>>") == std::string::npos) {
      ++i;
    }
  }
  lines = std::move(out);
  return hits;
}

bool is_directory_header(std::string_view line) {
  static const std::regex kHeader(
      R"(^\s*[A-Za-z ]{0,30}\b(structure|directory|directories|tree|layout|folders?)\s*:?\s*$)",
      std::regex::ECMAScript | std::regex::icase);
  return std::regex_match(line.begin(), line.end(), kHeader);
}

// A listing line is made only of path-like tokens, at least one of which
// is unmistakably a path (separator, tree glyph or file extension).
bool is_listing_line(std::string_view line) {
  static const std::regex kFile(R"(^[\w.\-]*\w\.[A-Za-z][A-Za-z0-9]{0,4}(\.{2,})?[,;]?$)");
  static const std::regex kIdent(R"(^[\w\-]*[_0-9][\w\-]*\.?[,;]?$)");
  static const std::regex kDots(R"(^\.{2,}$)");
  const auto toks = words(line);
  if (toks.empty()) return false;
  bool strong = false;
  for (std::string_view t : toks) {
    const bool glyph = t.find("\xE2\x94") != std::string_view::npos || t == "|--" || t == "+--" ||
                       t == "`--" || t == "|";
    const bool sep = t.find('/') != std::string_view::npos || t.find('\\') != std::string_view::npos;
    const bool file = std::regex_match(t.begin(), t.end(), kFile);
    if (glyph || sep || file) {
      strong = true;
      continue;
    }
    if (!std::regex_match(t.begin(), t.end(), kIdent) && !std::regex_match(t.begin(), t.end(), kDots)) {
      return false;
    }
  }
  return strong;
}

// Rule 3: directory-structure blocks.
std::size_t strip_directories(Lines& lines) {
  std::size_t hits = 0;
  Lines out;
  for (std::size_t i = 0; i < lines.size();) {
    std::size_t j = i;
    const bool header = is_directory_header(lines[i]);
    if (header) ++j;
    std::size_t k = j;
    while (k < lines.size() && is_listing_line(lines[k])) ++k;
    const std::size_t listed = k - j;
    if ((header && listed >= 1) || listed >= 2) {
      ++hits;
      i = k;
      continue;
    }
    out.push_back(lines[i]);
    ++i;
  }
  lines = std::move(out);
  return hits;
}

bool is_underline(std::string_view line) {
  const std::string_view t = trim(line);
  if (t.size() < 3) return false;
  for (char c : t) {
    if (c != '-' && c != '=') return false;
  }
  return true;
}

bool is_section_header(std::string_view line) {
  const std::string_view t = trim(line);
  if (t.empty()) return false;
  for (char c : t) {
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != ' ') return false;
  }
  return words(t).size() <= 3;
}

bool is_entry_line(std::string_view line) {
  static const std::regex kEntry(R"(^\s*[\w*, ]+\s:(\s.*)?$)");
  return std::regex_match(line.begin(), line.end(), kEntry);
}

// Rule 4: `Parameters` / dashed-underline tables and their entries.
std::size_t strip_parameter_tables(Lines& lines) {
  std::size_t hits = 0;
  Lines out;
  for (std::size_t i = 0; i < lines.size();) {
    if (i + 1 < lines.size() && is_section_header(lines[i]) && is_underline(lines[i + 1])) {
      ++hits;
      const std::size_t base = indent_of(lines[i]);
      std::size_t k = i + 2;
      while (k < lines.size()) {
        if (!is_blank(lines[k])) {
          ++k;
          continue;
        }
        std::size_t n = k;
        while (n < lines.size() && is_blank(lines[n])) ++n;
        if (n < lines.size() && (indent_of(lines[n]) > base || is_entry_line(lines[n]))) {
          k = n;
          continue;
        }
        break;
      }
      i = k;
      continue;
    }
    out.push_back(lines[i]);
    ++i;
  }
  lines = std::move(out);
  return hits;
}

// Rule 5: every whitespace run becomes one space; ends trimmed.
std::size_t collapse_whitespace(std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t runs = 0;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      const bool single = c == ' ' && !out.empty() && (i + 1 < text.size()) &&
                          !std::isspace(static_cast<unsigned char>(text[i + 1]));
      if (!single) ++runs;
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(static_cast<char>(c));
  }
  const bool changed = out != text;
  text = std::move(out);
  return changed ? std::max<std::size_t>(runs, 1) : 0;
}

}  // namespace

std::pair<std::string, CleanReport> clean_doc(std::string_view doc) {
  CleanReport report;
  report.before_len = util::utf8_length(doc);
  std::string text(doc);

  auto record = [&](std::string_view rule, std::size_t hits, std::size_t before) {
    const std::size_t after = util::utf8_length(text);
    if (hits == 0) return;
    report.rules_fired.push_back(RuleHit{std::string(rule), hits, before - after});
  };
  auto on_lines = [&](std::string_view rule, std::size_t (*fn)(Lines&)) {
    const std::size_t before = util::utf8_length(text);
    Lines lines = split_lines(text);
    const std::size_t hits = fn(lines);
    if (hits > 0) text = join_lines(lines);
    record(rule, hits, before);
  };

  std::size_t before = util::utf8_length(text);
  record(kRuleHtmlEntities, decode_entities(text), before);
  before = util::utf8_length(text);
  record(kRuleUrl, strip_urls(text), before);
  on_lines(kRuleDoctest, strip_doctests);
  on_lines(kRuleDirectory, strip_directories);
  on_lines(kRuleParameterTable, strip_parameter_tables);
  before = util::utf8_length(text);
  record(kRuleWhitespace, collapse_whitespace(text), before);

  report.after_len = util::utf8_length(text);
  report.dropped = words(text).size() < kMinWords;
  return {std::move(text), std::move(report)};
}

std::string CorpusReport::to_json() const {
  nlohmann::json j{{"input", input},
                   {"kept", kept},
                   {"dropped", dropped},
                   {"rule_counts", rule_counts},
                   {"rule_chars_removed", rule_chars}};
  return j.dump(2);
}

std::pair<std::vector<ingest::PairRecord>, CorpusReport> clean_corpus(
    const std::vector<ingest::PairRecord>& records) {
  std::vector<ingest::PairRecord> kept;
  CorpusReport report;
  report.input = records.size();
  for (const auto& r : records) {
    auto [text, rep] = clean_doc(r.doc);
    for (const auto& hit : rep.rules_fired) {
      report.rule_counts[hit.rule] += hit.count;
      report.rule_chars[hit.rule] += hit.chars_removed;
    }
    if (rep.dropped) {
      ++report.dropped;
      continue;
    }
    kept.push_back(ingest::PairRecord{r.id, r.code, std::move(text)});
  }
  report.kept = kept.size();
  return {std::move(kept), std::move(report)};
}

}  // namespace clcp::textclean
