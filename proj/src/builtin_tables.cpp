// SPDX-License-Identifier: Apache-2.0
#include "clcp/builtin_tables.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clcp::pylex {

namespace detail {

std::vector<std::string> parse_table(std::string_view text, int* version) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kTag = "# version:";
      if (version != nullptr && line.substr(0, kTag.size()) == kTag) {
        *version = std::stoi(std::string(line.substr(kTag.size())));
      }
      continue;
    }
    out.emplace_back(line);
  }
  return out;
}

}  // namespace detail

void BuiltinTables::reindex() {
  auto build = [](const std::vector<std::string>& names, Index& idx) {
    idx.clear();
    for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], i);
  };
  build(keywords, keyword_index_);
  build(classes, class_index_);
  build(functions, function_index_);
  build(attributes, attribute_index_);
  build(methods, method_index_);
  build(attr_calls, attr_call_index_);
}

const BuiltinTables& BuiltinTables::standard() {
  static const BuiltinTables tables = [] {
    BuiltinTables t;
    t.keywords = detail::parse_table(detail::kKeywordsTxt, &t.version);
    t.classes = detail::parse_table(detail::kBuiltinClassesTxt, nullptr);
    t.functions = detail::parse_table(detail::kBuiltinFunctionsTxt, nullptr);
    t.attributes = detail::parse_table(detail::kBuiltinAttributesTxt, nullptr);
    t.methods = detail::parse_table(detail::kBuiltinMethodsTxt, nullptr);
    t.attr_calls = detail::parse_table(detail::kBuiltinAttrCallsTxt, nullptr);
    t.reindex();
    return t;
  }();
  return tables;
}

BuiltinTables BuiltinTables::load(const std::string& dir) {
  auto read = [&](const char* name) {
    std::ifstream in(dir + "/" + name);
    if (!in) throw std::runtime_error("cannot read builtin table " + dir + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  BuiltinTables t;
  t.keywords = detail::parse_table(read("keywords.txt"), &t.version);
  t.classes = detail::parse_table(read("builtin_classes.txt"), nullptr);
  t.functions = detail::parse_table(read("builtin_functions.txt"), nullptr);
  t.attributes = detail::parse_table(read("builtin_attributes.txt"), nullptr);
  t.methods = detail::parse_table(read("builtin_methods.txt"), nullptr);
  t.attr_calls = detail::parse_table(read("builtin_attr_calls.txt"), nullptr);
  t.reindex();
  return t;
}

}  // namespace clcp::pylex
