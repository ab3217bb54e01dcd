// SPDX-License-Identifier: Apache-2.0
#include "clcp/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

namespace clcp::vocab {

namespace {

using pylex::component_name;

constexpr std::array<std::string_view, 38> kOperatorTable = {
    "+",  "-",  "*",  "/",  "//", "%",  "**", "@",  "<<",  ">>",  "&",   "|",   "^",
    "~",  "<",  ">",  "<=", ">=", "==", "!=", ":=", "+=",  "-=",  "*=",  "/=",  "//=",
    "%=", "**=", "@=", "<<=", ">>=", "&=", "|=", "^=", "=", "->", ".", "...",
};
constexpr std::array<std::string_view, 9> kSymbolTable = {"(", ")", "[", "]", "{",
                                                          "}", ",", ":", ";"};
constexpr std::array<std::string_view, 5> kNewlineTable = {"\n", "\r\n", "\r", "\\\n",
                                                           "\\\r\n"};
constexpr std::size_t kMaxSpaceRun = 64;
constexpr std::size_t kMaxTabRun = 8;

bool is_scoped_user_class(Component c) {
  return c == Component::Class || c == Component::Method || c == Component::Variable;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

TokenId parse_id(std::string_view s) {
  std::size_t used = 0;
  const unsigned long v = std::stoul(std::string(s), &used);
  if (used != s.size()) throw std::invalid_argument("bad id: " + std::string(s));
  return static_cast<TokenId>(v);
}

Component parse_component(std::string_view s) {
  auto c = pylex::component_from_name(s);
  if (!c) throw std::invalid_argument("unknown component: " + std::string(s));
  return *c;
}

// Frequency-ranked assignment of the fixed slots of `c`.
void assign_ranked(Vocabulary& v, Component c, const std::map<std::string, std::size_t>& counts) {
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;  // map order already breaks ties lexicographically
  });
  const std::size_t cap = v.ranges.fixed_capacity(c);
  const TokenId lo = v.ranges.own(c).lo;
  for (std::size_t i = 0; i < ranked.size() && i < cap; ++i) {
    v.add(c, ranked[i].first, lo + static_cast<TokenId>(i));
  }
}

template <typename Table>
void assign_table(Vocabulary& v, Component c, const Table& names) {
  if (names.size() > v.ranges.fixed_capacity(c)) throw RangeExhausted(c);
  const TokenId lo = v.ranges.own(c).lo;
  for (std::size_t i = 0; i < names.size(); ++i) {
    v.add(c, std::string(names[i]), lo + static_cast<TokenId>(i));
  }
}

}  // namespace

// --- IdRanges -------------------------------------------------------------

IdRanges IdRanges::table_defaults() {
  IdRanges r;
  auto fixed = [&](Component c, TokenId lo, TokenId hi) { r.set(c, {lo, hi}, hi + 1); };
  auto local = [&](Component c, TokenId lo, TokenId hi) { r.set(c, {lo, hi}, lo); };
  fixed(Component::Keyword, 1, 35);
  fixed(Component::BuiltinClass, 36, 54);
  local(Component::Class, 55, 1584);
  fixed(Component::BuiltinMethod, 1585, 2698);
  local(Component::Method, 2699, 4454);
  fixed(Component::BuiltinMethCall, 4455, 6128);
  r.set(Component::MethodCall, {6129, 6929}, 6929 - 64 + 1);
  fixed(Component::BuiltinAttribute, 6930, 7960);
  local(Component::Variable, 7961, 9999);
  fixed(Component::BuiltinAttrCall, 10000, 11270);
  r.set(Component::AttributeCall, {11271, 11509}, 11509 - 32 + 1);
  fixed(Component::Operator, 11510, 11554);
  // Number's row is 11555-13811; its top 100 IDs host the helper classes.
  r.set(Component::Number, {11555, 13711}, 13711 - 128 + 1);
  fixed(Component::Symbol, 13712, 13726);
  fixed(Component::Newline, 13727, 13731);
  r.set(Component::Placeholder, {13732, 13735}, 13733);
  r.set(Component::Whitespace, {13736, 13811}, 13736 + kMaxSpaceRun + kMaxTabRun);
  return r;
}

IdRange IdRanges::table_range(Component c) const {
  switch (c) {
    case Component::Symbol:
    case Component::Whitespace:
    case Component::Newline:
    case Component::Placeholder: {
      IdRange host = own(Component::Number);
      for (Component aux : {Component::Symbol, Component::Whitespace, Component::Newline,
                            Component::Placeholder}) {
        host.hi = std::max(host.hi, own(aux).hi);
      }
      return host;
    }
    case Component::Number: return table_range(Component::Symbol);
    default: return own(c);
  }
}

void IdRanges::set(Component c, IdRange r, TokenId local_lo) {
  own_[index(c)] = r;
  local_lo_[index(c)] = local_lo;
}

TokenId IdRanges::max_id() const {
  TokenId m = 0;
  for (const auto& r : own_) m = std::max(m, r.hi);
  return m;
}

std::optional<Component> IdRanges::component_of(TokenId id) const {
  for (std::size_t i = 0; i < own_.size(); ++i) {
    if (own_[i].contains(id)) return static_cast<Component>(i);
  }
  return std::nullopt;
}

void IdRanges::validate() const {
  for (std::size_t i = 0; i < own_.size(); ++i) {
    const auto c = static_cast<Component>(i);
    const IdRange a = own_[i];
    if (a.lo == kPadId || a.hi < a.lo) {
      throw std::invalid_argument("malformed range for " + std::string(component_name(c)));
    }
    if (local_lo_[i] < a.lo || local_lo_[i] > a.hi + 1) {
      throw std::invalid_argument("local start outside range for " + std::string(component_name(c)));
    }
    for (std::size_t j = i + 1; j < own_.size(); ++j) {
      const IdRange b = own_[j];
      if (a.lo <= b.hi && b.lo <= a.hi) {
        throw std::invalid_argument("overlapping ranges: " + std::string(component_name(c)) + " and " +
                                    std::string(component_name(static_cast<Component>(j))));
      }
    }
  }
}

// --- Vocabulary -------------------------------------------------------------

std::optional<TokenId> Vocabulary::find(Component c, std::string_view key) const {
  auto it = entries_.find(std::make_pair(c, std::string(key)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::pair<Component, std::string>* Vocabulary::entry(TokenId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& Vocabulary::lookup_list(TokenId id) const {
  static const std::vector<std::string> kEmpty;
  auto it = lookup_.find(id);
  return it == lookup_.end() ? kEmpty : it->second;
}

void Vocabulary::add(Component c, std::string key, TokenId id) {
  if (!ranges.own(c).contains(id) || id >= ranges.local_lo(c)) {
    throw std::invalid_argument("id " + std::to_string(id) + " outside fixed range of " +
                                std::string(component_name(c)));
  }
  by_id_[id] = {c, key};
  entries_[{c, std::move(key)}] = id;
}

void Vocabulary::add_lookup(TokenId id, std::string text) {
  auto& list = lookup_[id];
  auto pos = std::lower_bound(list.begin(), list.end(), text);
  if (pos == list.end() || *pos != text) list.insert(pos, std::move(text));
}

std::string Vocabulary::serialize() const {
  std::ostringstream out;
  out << "# clcp-vocab\n";
  out << "version\t" << version << "\n";
  out << "tables\t" << tables_version << "\n";
  for (std::size_t i = 0; i < pylex::kComponentCount; ++i) {
    const auto c = static_cast<Component>(i);
    out << "range\t" << component_name(c) << "\t" << ranges.own(c).lo << "\t" << ranges.own(c).hi
        << "\t" << ranges.local_lo(c) << "\n";
  }
  std::vector<std::pair<TokenId, const std::pair<Component, std::string>*>> ordered;
  ordered.reserve(by_id_.size());
  for (const auto& [id, e] : by_id_) ordered.emplace_back(id, &e);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [id, e] : ordered) {
    out << component_name(e->first) << "\t" << pylex::escape_text(e->second) << "\t" << id << "\n";
  }
  for (const auto& [id, list] : lookup_) {
    out << "lookup\t" << id;
    for (const auto& t : list) out << "\t" << pylex::escape_text(t);
    out << "\n";
  }
  return out.str();
}

Vocabulary Vocabulary::parse(std::string_view text) {
  Vocabulary v;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line == "# clcp-vocab") {
      saw_header = true;
      continue;
    }
    if (line.front() == '#') continue;
    try {
      const auto f = split_tabs(line);
      if (f[0] == "version" && f.size() == 2) {
        v.version = static_cast<int>(parse_id(f[1]));
        if (v.version != kFormatVersion) {
          throw std::invalid_argument("unsupported vocab version " + std::string(f[1]));
        }
      } else if (f[0] == "tables" && f.size() == 2) {
        v.tables_version = static_cast<int>(parse_id(f[1]));
      } else if (f[0] == "range" && f.size() == 5) {
        v.ranges.set(parse_component(f[1]), {parse_id(f[2]), parse_id(f[3])}, parse_id(f[4]));
      } else if (f[0] == "lookup" && f.size() >= 2) {
        const TokenId id = parse_id(f[1]);
        for (std::size_t i = 2; i < f.size(); ++i) v.add_lookup(id, pylex::unescape_text(f[i]));
      } else if (f.size() == 3) {
        v.add(parse_component(f[0]), pylex::unescape_text(f[1]), parse_id(f[2]));
      } else {
        throw std::invalid_argument("unrecognized line");
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("vocab line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_header) throw std::invalid_argument("not a clcp vocab file");
  v.ranges.validate();
  return v;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocab " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocab " + path);
  out << serialize();
}

std::string_view key_of(const pylex::Token& t) {
  return pylex::is_call_class(t.component) ? pylex::member_key(t.text) : std::string_view(t.text);
}

Vocabulary build_vocab(std::span<const std::vector<pylex::Token>> corpus, const IdRanges& ranges,
                       const pylex::BuiltinTables& builtins) {
  ranges.validate();
  Vocabulary v;
  v.ranges = ranges;
  v.tables_version = builtins.version;

  assign_table(v, Component::Keyword, builtins.keywords);
  assign_table(v, Component::BuiltinClass, builtins.classes);
  assign_table(v, Component::BuiltinMethod, builtins.functions);
  assign_table(v, Component::BuiltinAttribute, builtins.attributes);
  assign_table(v, Component::BuiltinMethCall, builtins.methods);
  assign_table(v, Component::BuiltinAttrCall, builtins.attr_calls);
  assign_table(v, Component::Operator, kOperatorTable);
  assign_table(v, Component::Symbol, kSymbolTable);
  assign_table(v, Component::Newline, kNewlineTable);
  assign_table(v, Component::Placeholder, std::array<std::string_view, 1>{pylex::kStringPlaceholder});

  std::vector<std::string> whitespace;
  for (std::size_t n = 1; n <= kMaxSpaceRun; ++n) whitespace.emplace_back(n, ' ');
  for (std::size_t n = 1; n <= kMaxTabRun; ++n) whitespace.emplace_back(n, '\t');
  assign_table(v, Component::Whitespace, whitespace);

  std::map<std::string, std::size_t> numbers, method_keys, attribute_keys;
  for (const auto& snippet : corpus) {
    for (const auto& t : snippet) {
      switch (t.component) {
        case Component::Number: ++numbers[t.text]; break;
        case Component::MethodCall: ++method_keys[std::string(key_of(t))]; break;
        case Component::AttributeCall: ++attribute_keys[std::string(key_of(t))]; break;
        default: break;
      }
    }
  }
  assign_ranked(v, Component::Number, numbers);
  assign_ranked(v, Component::MethodCall, method_keys);
  assign_ranked(v, Component::AttributeCall, attribute_keys);

  for (const auto& snippet : corpus) {
    for (const auto& t : snippet) {
      if (!pylex::is_call_class(t.component)) continue;
      if (auto id = v.find(t.component, key_of(t))) v.add_lookup(*id, t.text);
    }
  }
  return v;
}

// --- NamespaceScope -----------------------------------------------------------

NamespaceScope::NamespaceScope(const IdRanges& ranges) : ranges_(&ranges) {
  for (std::size_t i = 0; i < pylex::kComponentCount; ++i) {
    cursor_[i] = ranges.local_lo(static_cast<Component>(i));
  }
}

std::optional<TokenId> NamespaceScope::find(Component c, std::string_view text) const {
  auto it = local_.find(std::make_pair(c, std::string(text)));
  if (it == local_.end()) return std::nullopt;
  return it->second;
}

TokenId NamespaceScope::allocate(Component c, const std::string& text, ExhaustPolicy policy) {
  if (auto id = find(c, text)) return *id;
  const auto i = static_cast<std::size_t>(c);
  const IdRange r = ranges_->own(c);
  if (cursor_[i] > r.hi) {
    if (policy == ExhaustPolicy::Error || ranges_->local_lo(c) > r.hi) throw RangeExhausted(c);
    cursor_[i] = ranges_->local_lo(c);
    ++recycled_;
  }
  const TokenId id = cursor_[i]++;
  if (auto old = reverse_.find(id); old != reverse_.end()) local_.erase(old->second);
  local_[{c, text}] = id;
  reverse_[id] = {c, text};
  return id;
}

const std::string* NamespaceScope::text_of(TokenId id) const {
  auto it = reverse_.find(id);
  return it == reverse_.end() ? nullptr : &it->second.second;
}

void NamespaceScope::observe(TokenId id, const std::string& text) { observed_[id].insert(text); }

const std::set<std::string>* NamespaceScope::observed(TokenId id) const {
  auto it = observed_.find(id);
  return it == observed_.end() ? nullptr : &it->second;
}

std::vector<std::tuple<TokenId, Component, std::string>> NamespaceScope::locals() const {
  std::vector<std::tuple<TokenId, Component, std::string>> out;
  out.reserve(reverse_.size());
  for (const auto& [id, e] : reverse_) out.emplace_back(id, e.first, e.second);
  return out;
}

void NamespaceScope::restore_local(TokenId id, Component c, const std::string& text) {
  if (!ranges_->own(c).contains(id) || id < ranges_->local_lo(c)) {
    throw std::invalid_argument("scope entry " + std::to_string(id) + " outside local range");
  }
  local_[{c, text}] = id;
  reverse_[id] = {c, text};
  auto& cur = cursor_[static_cast<std::size_t>(c)];
  cur = std::max(cur, id + 1);
}

// --- encode / decode ----------------------------------------------------------

std::vector<TokenId> assign_ids(const std::vector<pylex::Token>& tokens, const Vocabulary& vocab,
                                NamespaceScope& scope, ExhaustPolicy policy) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    const Component c = t.component;
    const std::string_view key = key_of(t);
    TokenId id = kPadId;
    if (is_scoped_user_class(c)) {
      id = scope.allocate(c, t.text, policy);
    } else if (auto fixed = vocab.find(c, key)) {
      id = *fixed;
    } else if (vocab.ranges.fixed_capacity(c) < vocab.ranges.own(c).size()) {
      id = scope.allocate(c, std::string(key), policy);
    } else {
      throw std::invalid_argument("no ID for " + std::string(pylex::component_name(c)) + " token '" +
                                  pylex::escape_text(t.text) + "'");
    }
    if (pylex::is_call_class(c)) scope.observe(id, t.text);
    ids.push_back(id);
  }
  return ids;
}

std::vector<DecodedToken> decode(std::span<const TokenId> ids, const Vocabulary& vocab,
                                 const NamespaceScope* scope) {
  std::vector<DecodedToken> out;
  out.reserve(ids.size());
  for (const TokenId id : ids) {
    DecodedToken d;
    d.id = id;
    if (id == kPadId) {
      d.pad = true;
      d.text = "<pad>";
      out.push_back(std::move(d));
      continue;
    }
    const auto comp = vocab.ranges.component_of(id);
    if (!comp) throw DecodeError("ID " + std::to_string(id) + " lies outside every component range");
    d.component = comp;
    if (id < vocab.ranges.local_lo(*comp)) {
      const auto* e = vocab.entry(id);
      if (e == nullptr) throw DecodeError("ID " + std::to_string(id) + " is not assigned in the vocabulary");
      d.text = e->second;
    } else if (const std::string* t = scope ? scope->text_of(id) : nullptr) {
      d.text = *t;
    } else {
      const std::size_t n = id - vocab.ranges.local_lo(*comp);
      d.text = "<" + std::string(pylex::component_name(*comp)) + "#" + std::to_string(n) + ">";
    }
    if (pylex::is_call_class(*comp)) {
      std::set<std::string> cands(vocab.lookup_list(id).begin(), vocab.lookup_list(id).end());
      if (scope != nullptr) {
        if (const auto* seen = scope->observed(id)) cands.insert(seen->begin(), seen->end());
      }
      d.candidates.assign(cands.begin(), cands.end());
      d.ambiguous = d.candidates.size() > 1;
      if (d.candidates.size() == 1) d.text = d.candidates.front();
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace clcp::vocab
