// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "clcp/config.hpp"
#include "clcp/ingest.hpp"
#include "clcp/textvocab.hpp"
#include "clcp/vocab.hpp"

namespace clcp {

/// A (code, text) pair ready for the encoders.
struct EncodedPair {
  std::vector<float> image;          // image_length normalized IDs
  std::vector<std::int32_t> text;    // text token IDs, at most text_max_len
  bool code_truncated = false;
  bool text_truncated = false;
};

/// Code vocabulary over the training snippets.
vocab::Vocabulary build_code_vocab(const std::vector<ingest::PairRecord>& records);

/// Text vocabulary over the training descriptions.
TextVocab build_text_vocab(const std::vector<ingest::PairRecord>& records, const ModelConfig& cfg);

/// Each snippet is its own namespace; exhausted local ranges recycle.
EncodedPair encode_pair(const ingest::PairRecord& record, const vocab::Vocabulary& code_vocab,
                        const TextVocab& text_vocab, const ModelConfig& cfg);

std::vector<EncodedPair> encode_pairs(const std::vector<ingest::PairRecord>& records,
                                      const vocab::Vocabulary& code_vocab, const TextVocab& text_vocab,
                                      const ModelConfig& cfg);

}  // namespace clcp
