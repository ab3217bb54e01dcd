// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clcp::ingest {

/// One (code, description) pair.
struct PairRecord {
  std::string id;
  std::string code;
  std::string doc;
  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

/// JSONL field names; defaults follow CodeSearchNet.
struct FieldNames {
  std::string code = "code";
  std::string doc = "docstring";
  std::string id = "id";
};

struct LoadResult {
  std::vector<PairRecord> records;
  std::size_t skipped = 0;
  std::size_t lines = 0;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads JSONL pairs in file order. Malformed lines (bad JSON, missing or
/// empty fields) are skipped and counted; more than half malformed is fatal.
/// Records without an id field get a content hash (`h:<hex>`), with `#k`
/// appended on collision.
LoadResult load_pairs(const std::string& path, std::optional<std::size_t> limit = std::nullopt,
                      const FieldNames& fields = {});
LoadResult read_pairs(std::istream& in, std::optional<std::size_t> limit = std::nullopt,
                      const FieldNames& fields = {});

/// Writes records back as JSONL using `fields`.
void write_pairs(const std::string& path, const std::vector<PairRecord>& records,
                 const FieldNames& fields = {});

struct SamplePlan {
  std::vector<std::size_t> train_sizes;
  std::vector<std::size_t> test_sizes;
  std::uint64_t seed = 0;

  /// Sizes strictly positive and non-decreasing; throws IngestError.
  void validate() const;
  static SamplePlan from_json(const std::string& text);
  std::string to_json() const;
};

struct Split {
  std::vector<PairRecord> train_pool;  // shuffled; sample(n) is its first n
  std::vector<PairRecord> test_pool;
  std::size_t removed_for_overlap = 0; // train records sharing a first sentence with the test pool

  std::vector<PairRecord> train(std::size_t n) const;
  std::vector<PairRecord> test(std::size_t n) const;
};

/// Seeded shuffle, test pool = first max(test_sizes) records, train pool =
/// the rest minus records whose normalized first sentence occurs in the test
/// pool. Throws IngestError naming the first size that does not fit.
Split sample_split(const std::vector<PairRecord>& records, const SamplePlan& plan);

/// Lowercased, whitespace-collapsed first sentence of a description.
std::string first_sentence_key(const std::string& doc);

/// Header line (seed, counts) followed by one `{"split","rank","id"}` line
/// per pooled record; sample(n) of a split is every rank < n.
void write_split_manifest(const std::string& path, const Split& split, const SamplePlan& plan);

/// Deterministic Fisher-Yates permutation of [0, n).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace clcp::ingest
