// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clcp/ingest.hpp"

namespace clcp::synthetic {

/// One operation template: code and description parameterized by an
/// integer constant, a function name and an argument name.
struct Operation {
  std::string name;
  std::string code;                // `{f}`, `{x}`, `{c}` placeholders
  std::vector<std::string> docs;   // paraphrases with `{c}`
};

const std::vector<Operation>& operations();

/// Constants used by every operation.
inline constexpr int kMinConstant = 2;
inline constexpr int kMaxConstant = 41;

/// Instantiates operation `op` with constant `c`; `variant` picks the
/// identifier names and the doc paraphrase.
ingest::PairRecord instantiate(std::size_t op, int c, std::uint64_t variant);

struct Split {
  std::vector<ingest::PairRecord> train;
  std::vector<ingest::PairRecord> test;
};

/// Seeded split over (operation, constant) combinations: `test` holds one
/// pair for each of `test_size` held-out combinations (all descriptions
/// distinct); `train` draws `train_size` pairs from the remaining ones.
Split make_split(std::size_t train_size, std::size_t test_size, std::uint64_t seed);

/// `n` pairs with pairwise distinct operations, so codes differ in structure
/// and not only in a constant.
std::vector<ingest::PairRecord> distinct_pairs(std::size_t n, std::uint64_t seed);

}  // namespace clcp::synthetic
