// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <tuple>
#include <utility>
#include <vector>

#include "clcp/pylex.hpp"

namespace clcp::vocab {

using pylex::Component;
using TokenId = std::uint32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr int kFormatVersion = 1;

struct IdRange {
  TokenId lo = 0;
  TokenId hi = 0;
  std::size_t size() const { return hi >= lo ? static_cast<std::size_t>(hi - lo) + 1 : 0; }
  bool contains(TokenId id) const { return id >= lo && id <= hi; }
  friend bool operator==(const IdRange&, const IdRange&) = default;
};

/// Per-component ID ranges. `own(c)` is where IDs of class `c` live; IDs in
/// [local_lo(c), own(c).hi] are handed out per namespace, the rest are fixed
/// by the vocabulary. Symbol, Whitespace, Newline and Placeholder have no
/// class row of their own and are nested at the top of the Number range;
/// `table_range(c)` reports the class row that hosts a component.
class IdRanges {
 public:
  /// Default class layout.
  static IdRanges table_defaults();

  IdRange own(Component c) const { return own_[index(c)]; }
  TokenId local_lo(Component c) const { return local_lo_[index(c)]; }
  IdRange table_range(Component c) const;
  /// Number of fixed (vocabulary-assigned) slots.
  std::size_t fixed_capacity(Component c) const { return local_lo(c) - own(c).lo; }

  void set(Component c, IdRange r, TokenId local_lo);

  /// Largest ID any component can take (13811 for the default layout).
  TokenId max_id() const;
  std::optional<Component> component_of(TokenId id) const;

  /// Throws std::invalid_argument when ranges overlap or are malformed.
  void validate() const;

  friend bool operator==(const IdRanges&, const IdRanges&) = default;

 private:
  static std::size_t index(Component c) { return static_cast<std::size_t>(c); }
  std::array<IdRange, pylex::kComponentCount> own_{};
  std::array<TokenId, pylex::kComponentCount> local_lo_{};
};

class RangeExhausted : public std::runtime_error {
 public:
  explicit RangeExhausted(Component c)
      : std::runtime_error("ID range exhausted for component " +
                           std::string(pylex::component_name(c))),
        component_(c) {}
  Component component() const { return component_; }

 private:
  Component component_;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed token -> ID assignments plus reverse lookup lists for abstracted
/// call composites. Immutable after build; safe to share across threads.
class Vocabulary {
 public:
  int version = kFormatVersion;
  int tables_version = 0;
  IdRanges ranges;

  /// Fixed ID for (component, key). For call classes the key is the member
  /// name; for everything else it is the token text.
  std::optional<TokenId> find(Component c, std::string_view key) const;
  /// Reverse of `find`.
  const std::pair<Component, std::string>* entry(TokenId id) const;
  /// Concrete composite texts recorded for an abstracted call ID.
  const std::vector<std::string>& lookup_list(TokenId id) const;

  void add(Component c, std::string key, TokenId id);
  void add_lookup(TokenId id, std::string text);
  std::size_t size() const { return entries_.size(); }
  const std::map<TokenId, std::vector<std::string>>& lookup_lists() const { return lookup_; }

  /// Byte-deterministic text form.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  static Vocabulary load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::map<std::pair<Component, std::string>, TokenId, std::less<>> entries_;
  std::unordered_map<TokenId, std::pair<Component, std::string>> by_id_;
  std::map<TokenId, std::vector<std::string>> lookup_;
};

/// Lookup key of a token: member name for call composites, text otherwise.
std::string_view key_of(const pylex::Token& t);

/// Builds the vocabulary from classified token streams (one per snippet).
/// Built-in tables take IDs in table order from the range start; numbers and
/// non-builtin call keys are ranked by corpus frequency (ties lexicographic).
Vocabulary build_vocab(std::span<const std::vector<pylex::Token>> corpus,
                       const IdRanges& ranges = IdRanges::table_defaults(),
                       const pylex::BuiltinTables& builtins = pylex::BuiltinTables::standard());

enum class ExhaustPolicy { Error, Recycle };

/// Scope-local allocations for one namespace (one snippet by default).
class NamespaceScope {
 public:
  explicit NamespaceScope(const IdRanges& ranges);

  std::optional<TokenId> find(Component c, std::string_view text) const;
  TokenId allocate(Component c, const std::string& text, ExhaustPolicy policy);
  /// Text allocated to a scope-local ID.
  const std::string* text_of(TokenId id) const;

  /// Records the concrete composite seen for an abstracted call ID.
  void observe(TokenId id, const std::string& text);
  const std::set<std::string>* observed(TokenId id) const;

  /// Number of times a cursor wrapped under ExhaustPolicy::Recycle.
  std::size_t recycled() const { return recycled_; }
  /// All scope-local (id, component, text) triples, in ID order.
  std::vector<std::tuple<TokenId, Component, std::string>> locals() const;
  void restore_local(TokenId id, Component c, const std::string& text);

 private:
  const IdRanges* ranges_;
  std::array<TokenId, pylex::kComponentCount> cursor_{};
  std::map<std::pair<Component, std::string>, TokenId, std::less<>> local_;
  std::map<TokenId, std::pair<Component, std::string>> reverse_;
  std::map<TokenId, std::set<std::string>> observed_;
  std::size_t recycled_ = 0;
};

/// Maps classified tokens to IDs. Built-ins go through the vocabulary,
/// user-defined tokens through the scope.
std::vector<TokenId> assign_ids(const std::vector<pylex::Token>& tokens, const Vocabulary& vocab,
                                NamespaceScope& scope,
                                ExhaustPolicy policy = ExhaustPolicy::Error);

struct DecodedToken {
  TokenId id = kPadId;
  std::optional<Component> component;  // empty for padding
  std::string text;                    // best single text, "<pad>" for padding
  std::vector<std::string> candidates; // for abstracted calls
  bool ambiguous = false;
  bool pad = false;
};

/// Inverse of assign_ids. Without a scope, scope-local IDs decode to a
/// `<Component#n>` marker.
std::vector<DecodedToken> decode(std::span<const TokenId> ids, const Vocabulary& vocab,
                                 const NamespaceScope* scope);

}  // namespace clcp::vocab
