// SPDX-License-Identifier: Apache-2.0
#include "clcp/dataset.hpp"

#include "clcp/himg.hpp"
#include "clcp/pylex.hpp"

namespace clcp {

vocab::Vocabulary build_code_vocab(const std::vector<ingest::PairRecord>& records) {
  std::vector<std::vector<pylex::Token>> corpus;
  corpus.reserve(records.size());
  for (const auto& r : records) corpus.push_back(pylex::tokenize(r.code));
  return vocab::build_vocab(corpus);
}

TextVocab build_text_vocab(const std::vector<ingest::PairRecord>& records, const ModelConfig& cfg) {
  std::vector<std::string> docs;
  docs.reserve(records.size());
  for (const auto& r : records) docs.push_back(r.doc);
  return TextVocab::build(docs, static_cast<std::size_t>(cfg.text_vocab_size),
                          static_cast<std::size_t>(cfg.text_min_freq));
}

EncodedPair encode_pair(const ingest::PairRecord& record, const vocab::Vocabulary& code_vocab,
                        const TextVocab& text_vocab, const ModelConfig& cfg) {
  const auto snippet = himg::encode_snippet(record.code, code_vocab, vocab::ExhaustPolicy::Recycle);
  const auto img = himg::make_image(snippet.ids, static_cast<std::size_t>(cfg.image_length),
                                    code_vocab.ranges.max_id());
  auto text = text_vocab.encode(record.doc, static_cast<std::size_t>(cfg.text_max_len));
  return {img.values, std::move(text.ids), img.truncated, text.truncated};
}

std::vector<EncodedPair> encode_pairs(const std::vector<ingest::PairRecord>& records,
                                      const vocab::Vocabulary& code_vocab, const TextVocab& text_vocab,
                                      const ModelConfig& cfg) {
  std::vector<EncodedPair> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(encode_pair(r, code_vocab, text_vocab, cfg));
  return out;
}

}  // namespace clcp
