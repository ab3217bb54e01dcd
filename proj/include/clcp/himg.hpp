// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clcp/vocab.hpp"

namespace clcp::himg {

using vocab::TokenId;

inline constexpr std::size_t kDefaultLength = 512;

/// Fixed-length single-channel 1D heterogeneous image. `values` holds the
/// IDs scaled into [0, 1] by `max_id`; padding is ID 0 / value 0.
struct HeterogeneousImage {
  std::vector<TokenId> ids;
  std::vector<float> values;
  std::size_t true_len = 0;
  bool truncated = false;
};

/// Keeps a prefix of at most `length` IDs, right-pads with 0, normalizes.
HeterogeneousImage make_image(std::span<const TokenId> ids, std::size_t length, TokenId max_id);

/// Output of the full front-end for one snippet.
struct EncodedSnippet {
  std::vector<TokenId> ids;
  vocab::NamespaceScope scope;
};

/// clean_code -> lex -> classify -> assign_ids with a fresh namespace scope.
EncodedSnippet encode_snippet(const std::string& code, const vocab::Vocabulary& vocab,
                              vocab::ExhaustPolicy policy = vocab::ExhaustPolicy::Error);

/// Encoded-corpus file. Binary layout, all little-endian u32 unless noted:
///   magic "CLCPHIMG" (8 bytes), version, length, max_id, count (u64),
///   then per record: true_len, flags (bit0 truncated, bit1 recycled), length IDs.
struct ImageFile {
  std::uint32_t length = kDefaultLength;
  TokenId max_id = 0;
  std::vector<HeterogeneousImage> images;
  std::vector<std::uint32_t> flags;

  void save(const std::string& path) const;
  static ImageFile load(const std::string& path);
  /// Human-readable dump of one record.
  std::string debug_dump(std::size_t index) const;
};

inline constexpr std::uint32_t kFlagTruncated = 1u;
inline constexpr std::uint32_t kFlagRecycled = 2u;

}  // namespace clcp::himg
