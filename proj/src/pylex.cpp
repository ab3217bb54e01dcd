// SPDX-License-Identifier: Apache-2.0
#include "clcp/pylex.hpp"

#include <algorithm>
#include <cctype>

namespace clcp::pylex {

namespace {

constexpr std::array<std::string_view, kComponentCount> kNames = {
    "Keyword",         "BuiltinClass",  "Class",        "BuiltinMethod",
    "Method",          "BuiltinMethCall", "MethodCall", "BuiltinAttribute",
    "Variable",        "BuiltinAttrCall", "AttributeCall", "Operator",
    "Number",          "Symbol",        "Whitespace",   "Newline",
    "Placeholder",
};

// Longest first so the scanner can take the first match.
constexpr std::array<std::string_view, 37> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", ">>", "<<", "<=",
    ">=",  "==",  "!=",  "+=",  "-=",  "*=", "/=", "%=", "@=", "&=", "|=", "^=",
    "+",   "-",   "*",   "/",   "%",   "@",  "&",  "|",  "^",  "~",  "<",  ">",
    "=",
};
constexpr std::string_view kSymbols = "()[]{},:;";

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_prefix_char(char c) {
  switch (c) {
    case 'r': case 'R': case 'b': case 'B': case 'u': case 'U': case 'f': case 'F':
      return true;
    default:
      return false;
  }
}

// If a string literal (with optional prefix) starts at `i`, returns the
// length of the prefix; otherwise npos.
std::size_t string_prefix_at(std::string_view s, std::size_t i) {
  if (i > 0 && is_ident_char(static_cast<unsigned char>(s[i - 1]))) return std::string_view::npos;
  std::size_t j = i;
  while (j < s.size() && j - i < 2 && is_prefix_char(s[j])) ++j;
  if (j < s.size() && (s[j] == '"' || s[j] == '\'')) return j - i;
  return std::string_view::npos;
}

// End offset of the literal whose opening quote is at `q`, or npos if it is
// not terminated.
std::size_t string_end(std::string_view s, std::size_t q) {
  const char quote = s[q];
  const bool triple = q + 2 < s.size() && s[q + 1] == quote && s[q + 2] == quote;
  std::size_t i = q + (triple ? 3 : 1);
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (triple) {
      if (c == quote && i + 2 < s.size() && s[i + 1] == quote && s[i + 2] == quote) return i + 3;
    } else {
      if (c == quote) return i + 1;
      if (c == '\n' || c == '\r') return std::string_view::npos;
    }
    ++i;
  }
  return std::string_view::npos;
}

std::size_t scan_number(std::string_view s, std::size_t i) {
  auto digits = [&](auto pred) {
    while (i < s.size() && (pred(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
  };
  if (s[i] == '0' && i + 1 < s.size() &&
      std::string_view("xXoObB").find(s[i + 1]) != std::string_view::npos) {
    i += 2;
    digits([](unsigned char c) { return std::isxdigit(c) != 0; });
    return i;
  }
  digits(is_digit);
  if (i < s.size() && s[i] == '.') {
    ++i;
    digits(is_digit);
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    if (j < s.size() && is_digit(static_cast<unsigned char>(s[j]))) {
      i = j;
      digits(is_digit);
    }
  }
  if (i < s.size() && (s[i] == 'j' || s[i] == 'J')) ++i;
  return i;
}

bool is_name_like(const Token& t) {
  return t.component == Component::Keyword || is_identifier_class(t.component) ||
         (t.component == Component::Placeholder && t.text == kStringPlaceholder);
}

bool is_dot(const Token& t) { return t.component == Component::Operator && t.text == "."; }

}  // namespace

std::string_view component_name(Component c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Component> component_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Component>(i);
  }
  return std::nullopt;
}

bool is_identifier_class(Component c) {
  switch (c) {
    case Component::BuiltinClass: case Component::Class:
    case Component::BuiltinMethod: case Component::Method:
    case Component::BuiltinMethCall: case Component::MethodCall:
    case Component::BuiltinAttribute: case Component::Variable:
    case Component::BuiltinAttrCall: case Component::AttributeCall:
      return true;
    default:
      return false;
  }
}

bool is_call_class(Component c) {
  return c == Component::BuiltinMethCall || c == Component::MethodCall ||
         c == Component::BuiltinAttrCall || c == Component::AttributeCall;
}

std::string clean_code(std::string_view src) {
  std::string out;
  out.reserve(src.size());
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
      while (i < src.size() && src[i] != '\n' && src[i] != '\r') ++i;
      continue;
    }
    if (c == '\\' && i + 1 < src.size()) {
      out.push_back(c);
      out.push_back(src[i + 1]);
      i += 2;
      continue;
    }
    const std::size_t prefix = string_prefix_at(src, i);
    if (prefix != std::string_view::npos) {
      const std::size_t end = string_end(src, i + prefix);
      if (end == std::string_view::npos) {
        // Unterminated: leave the rest untouched and let lex() report it.
        out.append(src.substr(i));
        break;
      }
      out.append(kStringPlaceholder);
      i = end;
      continue;
    }
    if (is_ident_start(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      out.append(src.substr(i, j - i));
      i = j;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  const BuiltinTables& builtins = BuiltinTables::standard();
  std::size_t i = 0;
  auto emit = [&](Component comp, std::size_t end) {
    out.push_back(Token{std::string(src.substr(i, end - i)), comp, Span{i, end}});
    i = end;
  };
  while (i < src.size()) {
    const char c = src[i];
    const auto uc = static_cast<unsigned char>(c);
    if (c == '\r' && i + 1 < src.size() && src[i + 1] == '\n') {
      emit(Component::Newline, i + 2);
    } else if (c == '\n' || c == '\r') {
      emit(Component::Newline, i + 1);
    } else if (c == '\\') {
      if (src.substr(i + 1, 2) == "\r\n") {
        emit(Component::Newline, i + 3);
      } else if (i + 1 < src.size() && (src[i + 1] == '\n' || src[i + 1] == '\r')) {
        emit(Component::Newline, i + 2);
      } else {
        throw LexError("stray backslash", Span{i, i + 1});
      }
    } else if (c == ' ' || c == '\t' || c == '\f') {
      std::size_t j = i;
      while (j < src.size() && (src[j] == ' ' || src[j] == '\t' || src[j] == '\f')) ++j;
      emit(Component::Whitespace, j);
    } else if (c == '#') {
      std::size_t j = i;
      while (j < src.size() && src[j] != '\n' && src[j] != '\r') ++j;
      emit(Component::Placeholder, j);
    } else if (const std::size_t prefix = string_prefix_at(src, i);
               prefix != std::string_view::npos) {
      const std::size_t end = string_end(src, i + prefix);
      if (end == std::string_view::npos) {
        throw LexError("unterminated string literal at byte " + std::to_string(i),
                       Span{i, src.size()});
      }
      emit(Component::Placeholder, end);
    } else if (is_ident_start(uc)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      const std::string_view word = src.substr(i, j - i);
      Component comp = Component::Variable;
      if (builtins.is_keyword(word)) {
        comp = Component::Keyword;
      } else if (word == kStringPlaceholder) {
        comp = Component::Placeholder;
      }
      emit(comp, j);
    } else if (is_digit(uc) ||
               (c == '.' && i + 1 < src.size() && is_digit(static_cast<unsigned char>(src[i + 1])))) {
      emit(Component::Number, scan_number(src, i));
    } else if (kSymbols.find(c) != std::string_view::npos && src.substr(i, 2) != ":=") {
      emit(Component::Symbol, i + 1);
    } else {
      const auto op = std::find_if(kOperators.begin(), kOperators.end(), [&](std::string_view o) {
        return src.substr(i, o.size()) == o;
      });
      if (op != kOperators.end()) {
        emit(Component::Operator, i + op->size());
      } else if (c == '.') {
        emit(Component::Operator, i + 1);
      } else {
        throw LexError(std::string("unexpected character '") + c + "' at byte " + std::to_string(i),
                       Span{i, i + 1});
      }
    }
  }
  return out;
}

std::vector<Token> classify(const std::vector<Token>& tokens, const BuiltinTables& builtins) {
  // Pass 1: fuse `name(.name)+` and `.name(.name)*` following a closing bracket.
  std::vector<Token> fused;
  fused.reserve(tokens.size());
  auto extend_chain = [&](std::size_t j, Token& acc) {
    while (j + 1 < tokens.size() && is_dot(tokens[j]) && is_name_like(tokens[j + 1])) {
      acc.text += ".";
      acc.text += tokens[j + 1].text;
      acc.span.end = tokens[j + 1].span.end;
      j += 2;
    }
    return j;
  };
  for (std::size_t i = 0; i < tokens.size();) {
    const Token& t = tokens[i];
    if (is_name_like(t)) {
      Token acc = t;
      const std::size_t next = extend_chain(i + 1, acc);
      if (next != i + 1) acc.component = Component::Variable;
      fused.push_back(std::move(acc));
      i = next;
    } else if (is_dot(t) && !fused.empty() && fused.back().component == Component::Symbol &&
               (fused.back().text == ")" || fused.back().text == "]" || fused.back().text == "}") &&
               i + 1 < tokens.size() && is_name_like(tokens[i + 1])) {
      Token acc{"." + tokens[i + 1].text, Component::Variable, Span{t.span.begin, tokens[i + 1].span.end}};
      i = extend_chain(i + 2, acc);
      fused.push_back(std::move(acc));
    } else {
      fused.push_back(t);
      ++i;
    }
  }

  // Pass 2: assign classes from context.
  std::vector<Token> out;
  out.reserve(fused.size());
  const Token* prev = nullptr;  // last non-whitespace token already classified
  for (std::size_t i = 0; i < fused.size(); ++i) {
    Token t = fused[i];
    if (is_name_like(t)) {
      std::size_t j = i + 1;
      while (j < fused.size() && fused[j].component == Component::Whitespace) ++j;
      const bool called = j < fused.size() && fused[j].component == Component::Symbol &&
                          fused[j].text == "(";
      const auto after = [&](std::string_view kw) {
        return prev != nullptr && prev->component == Component::Keyword && prev->text == kw;
      };
      if (t.text.find('.') != std::string::npos) {
        const std::string_view member = member_key(t.text);
        if (called) {
          t.component = builtins.is_method(member) ? Component::BuiltinMethCall : Component::MethodCall;
        } else {
          t.component =
              builtins.is_attr_call(member) ? Component::BuiltinAttrCall : Component::AttributeCall;
        }
      } else if (builtins.is_keyword(t.text)) {
        t.component = Component::Keyword;
      } else if (t.text == kStringPlaceholder) {
        t.component = Component::Placeholder;
      } else if (after("def")) {
        t.component = Component::Method;
      } else if (after("class")) {
        t.component = Component::Class;
      } else if (builtins.is_class(t.text)) {
        t.component = Component::BuiltinClass;
      } else if (called && builtins.is_function(t.text)) {
        t.component = Component::BuiltinMethod;
      } else if (builtins.is_attribute(t.text)) {
        t.component = Component::BuiltinAttribute;
      } else {
        t.component = Component::Variable;
      }
    }
    out.push_back(std::move(t));
    if (out.back().component != Component::Whitespace) prev = &out.back();
  }
  return out;
}

std::vector<Token> tokenize(std::string_view raw_src, const BuiltinTables& builtins) {
  return classify(lex(clean_code(raw_src)), builtins);
}

std::string_view member_key(std::string_view composite) {
  const std::size_t dot = composite.rfind('.');
  return dot == std::string_view::npos ? composite : composite.substr(dot + 1);
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace clcp::pylex
