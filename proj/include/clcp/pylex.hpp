// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clcp/builtin_tables.hpp"

namespace clcp::pylex {

/// Token classes. The first thirteen are the components with their own ID
/// ranges; the last four are lexical helpers. The enumerator order is the
/// stable serialization order.
enum class Component : std::uint8_t {
  Keyword,
  BuiltinClass,
  Class,
  BuiltinMethod,
  Method,
  BuiltinMethCall,
  MethodCall,
  BuiltinAttribute,
  Variable,
  BuiltinAttrCall,
  AttributeCall,
  Operator,
  Number,
  Symbol,
  Whitespace,
  Newline,
  Placeholder,
};

inline constexpr std::size_t kComponentCount = 17;

std::string_view component_name(Component c);
std::optional<Component> component_from_name(std::string_view name);

/// Components that name an entity: anything an identifier can end up as.
bool is_identifier_class(Component c);

/// The dotted-call classes whose IDs are abstracted by member name.
bool is_call_class(Component c);

inline constexpr std::string_view kStringPlaceholder = "STR";

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string text;
  Component component = Component::Variable;
  Span span;
  friend bool operator==(const Token&, const Token&) = default;
};

class LexError : public std::runtime_error {
 public:
  LexError(const std::string& what, Span span)
      : std::runtime_error(what), span_(span) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

/// Replaces every string literal with `STR` and drops comments together with
/// the blank run in front of them. Line breaks outside literals are kept.
std::string clean_code(std::string_view src);

/// Splits source into tokens whose texts concatenate back to `src`.
/// Identifiers come out as Variable; keywords, numbers, operators, symbols,
/// whitespace and newlines are classified lexically.
std::vector<Token> lex(std::string_view src);

/// Resolves identifier classes: def/class names, builtins, and dotted
/// composites (`recv.member`) fused into one token. Idempotent.
std::vector<Token> classify(const std::vector<Token>& tokens,
                            const BuiltinTables& builtins = BuiltinTables::standard());

/// clean_code + lex + classify.
std::vector<Token> tokenize(std::string_view raw_src,
                            const BuiltinTables& builtins = BuiltinTables::standard());

/// Member name after the last dot of a composite (`a.b.strip` -> `strip`).
std::string_view member_key(std::string_view composite);

/// Golden-file text escaping: backslash, tab and newline become `\\`, `\t`, `\n`.
std::string escape_text(std::string_view s);
std::string unescape_text(std::string_view s);

}  // namespace clcp::pylex
