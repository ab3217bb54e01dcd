// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "clcp/config.hpp"
#include "clcp/ingest.hpp"
#include "clcp/train.hpp"

namespace clcp::zeval {

struct EvalResult {
  std::size_t L = 0;
  std::size_t correct = 0;
  double acc = 0;
  double ea = 0;  // 1 / L
  std::string config_id;
  std::string variant = "raw";
  std::string direction = "code_to_text";
};

/// For each query column i, the prediction is argmax_j q_i . c_j with ties
/// to the lowest j; pair i is correct when the prediction is i. Columns are
/// d-dimensional embeddings.
template <typename Scalar>
EvalResult zero_shot_match(const Mat<Scalar>& queries, const Mat<Scalar>& candidates) {
  if (queries.cols() != candidates.cols() || queries.rows() != candidates.rows()) {
    throw std::invalid_argument("zero_shot_match: " + std::to_string(queries.cols()) + " queries vs " +
                                std::to_string(candidates.cols()) + " candidates");
  }
  EvalResult r;
  r.L = static_cast<std::size_t>(queries.cols());
  if (r.L == 0) throw std::invalid_argument("zero_shot_match: empty test set");
  const Mat<Scalar> sim = queries.transpose() * candidates;
  for (Index i = 0; i < sim.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < sim.cols(); ++j) {
      if (sim(i, j) > sim(i, best)) best = j;
    }
    r.correct += best == i;
  }
  r.acc = static_cast<double>(r.correct) / static_cast<double>(r.L);
  r.ea = 1.0 / static_cast<double>(r.L);
  return r;
}

/// Embeddings of the first `n` pairs in eval mode, d x n.
template <typename Scalar>
std::pair<Mat<Scalar>, Mat<Scalar>> embed_pairs(ClcpModel<Scalar>& model, const std::vector<EncodedPair>& pairs) {
  const Index d = model.config().embed_dim;
  const auto n = static_cast<Index>(pairs.size());
  Mat<Scalar> codes(d, n), texts(d, n);
  const Index chunk = std::max(model.config().batch_size, 1);
  for (Index at = 0; at < n; at += chunk) {
    std::vector<const EncodedPair*> batch;
    for (Index i = at; i < std::min(n, at + chunk); ++i) batch.push_back(&pairs[static_cast<std::size_t>(i)]);
    const auto cols = static_cast<Index>(batch.size());
    codes.middleCols(at, cols) = model.embed_codes(batch, false);
    texts.middleCols(at, cols) = model.embed_texts(batch, false);
  }
  return {codes, texts};
}

/// Code-to-text (headline) and text-to-code results.
template <typename Scalar>
std::pair<EvalResult, EvalResult> evaluate(ClcpModel<Scalar>& model, const std::vector<EncodedPair>& pairs) {
  auto [c, t] = embed_pairs(model, pairs);
  EvalResult fwd = zero_shot_match<Scalar>(c, t);
  EvalResult back = zero_shot_match<Scalar>(t, c);
  fwd.config_id = back.config_id = model.config().id();
  back.direction = "text_to_code";
  return {fwd, back};
}

/// One trained model evaluated at one test size.
struct LadderRow {
  std::string config_id;
  std::string config_hash;
  std::string family;
  int blocks = 0;
  std::string delta = "none";
  std::string variant = "raw";
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  bool failed = false;
  std::string error;
  EvalResult result;          // code to text
  EvalResult reverse;         // text to code
  std::string stop_reason;
  int epochs = 0;
  int best_epoch = 0;
  double seconds = 0;
  std::string run_dir;
};

struct LadderOptions {
  std::string out_dir;         // run directories and results; empty: nothing written
  std::string variant = "raw"; // raw | cleaned
  unsigned workers = 0;        // 0: CLCP_WORKERS or 1
  std::ostream* log = nullptr;
  std::vector<std::string> deltas;  // delta label per config, parallel to configs; default "none"
};

/// Worker count from CLCP_WORKERS (default 1).
unsigned workers_from_env();

/// The `delta` variant of a base config: none, +BN, -Pool or -Init.
ModelConfig apply_delta(const ModelConfig& base, const std::string& delta);
const std::vector<std::string>& standard_deltas();

/// One train + eval run per (train size, config), evaluated on the first
/// t test pairs for every t in `test_sizes`. Failed runs are kept as rows
/// marked failed. Rows come back ordered by (config, train size, test size).
std::vector<LadderRow> run_ladder(const ingest::Split& split, const std::vector<std::size_t>& train_sizes,
                                  const std::vector<std::size_t>& test_sizes, const std::vector<ModelConfig>& configs,
                                  const LadderOptions& opts);

std::string ladder_csv(const std::vector<LadderRow>& rows);
std::string ladder_table(const std::vector<LadderRow>& rows);

struct AblationCell {
  std::string family;
  int blocks = 0;
  std::string delta;
  double mean_acc = 0;
  double mean_ea = 0;
  double diff = 0;  // mean_acc - base mean_acc
  std::size_t runs = 0;
  std::size_t failed = 0;
};

struct DirectionFlag {
  std::string claim;
  std::string family;
  bool observed = false;
  std::string detail;
};

struct AblationReport {
  std::vector<AblationCell> cells;
  std::vector<DirectionFlag> flags;
  std::vector<LadderRow> rows;
};

/// Runs every base config under every delta over the ladder and compares
/// mean accuracy (over all train and test sizes) against the base.
AblationReport run_ablations(const ingest::Split& split, const std::vector<std::size_t>& train_sizes,
                             const std::vector<std::size_t>& test_sizes, const std::vector<ModelConfig>& bases,
                             const std::vector<std::string>& deltas, const LadderOptions& opts);

/// Difference table: one row per (family, blocks), one column per delta.
std::string ablation_table(const AblationReport& report);
std::string ablation_csv(const AblationReport& report);

}  // namespace clcp::zeval
