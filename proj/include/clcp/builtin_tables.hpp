// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clcp::pylex {

/// Name tables that decide which identifiers are built-in. Each table keeps
/// the file order; that order fixes the IDs handed out by the vocabulary.
struct BuiltinTables {
  int version = 0;
  std::vector<std::string> keywords;
  std::vector<std::string> classes;     // bare builtin classes
  std::vector<std::string> functions;   // bare builtin callables
  std::vector<std::string> attributes;  // bare builtin names used without a call
  std::vector<std::string> methods;     // members of builtin objects, called
  std::vector<std::string> attr_calls;  // members of builtin objects, not called

  bool is_keyword(std::string_view s) const { return contains(keyword_index_, s); }
  bool is_class(std::string_view s) const { return contains(class_index_, s); }
  bool is_function(std::string_view s) const { return contains(function_index_, s); }
  bool is_attribute(std::string_view s) const { return contains(attribute_index_, s); }
  bool is_method(std::string_view s) const { return contains(method_index_, s); }
  bool is_attr_call(std::string_view s) const { return contains(attr_call_index_, s); }

  /// Rebuilds the lookup indexes after the vectors were filled.
  void reindex();

  /// Tables compiled into the binary from data/builtins/.
  static const BuiltinTables& standard();

  /// Loads `keywords.txt`, `builtin_classes.txt`, ... from a directory.
  static BuiltinTables load(const std::string& dir);

 private:
  using Index = std::unordered_map<std::string, std::size_t>;
  static bool contains(const Index& idx, std::string_view s) {
    return idx.find(std::string(s)) != idx.end();
  }
  Index keyword_index_, class_index_, function_index_, attribute_index_,
      method_index_, attr_call_index_;
};

namespace detail {
extern const char* const kKeywordsTxt;
extern const char* const kBuiltinClassesTxt;
extern const char* const kBuiltinFunctionsTxt;
extern const char* const kBuiltinAttributesTxt;
extern const char* const kBuiltinMethodsTxt;
extern const char* const kBuiltinAttrCallsTxt;

/// Parses one table file: `# version: N` header, one name per line.
std::vector<std::string> parse_table(std::string_view text, int* version);
}  // namespace detail

}  // namespace clcp::pylex
