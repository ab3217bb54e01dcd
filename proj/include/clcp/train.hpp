// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clcp/config.hpp"
#include "clcp/dataset.hpp"
#include "clcp/encoders.hpp"
#include "clcp/ingest.hpp"
#include "clcp/ndnn.hpp"
#include "json.hpp"

namespace clcp {

using ndnn::Index;
using ndnn::Mat;
using ndnn::ParamRef;
using ndnn::Tensor;

/// Code encoder, text encoder and the shared learnable logit scale.
template <typename Scalar>
class ClcpModel {
  ModelConfig cfg_;

 public:
  ClcpModel(const ModelConfig& cfg, Index text_vocab_size)
      : cfg_(cfg), code(cfg), text(cfg, text_vocab_size), log_scale({1}) {
    log_scale.data[0] = static_cast<Scalar>(cfg.logit_scale_init);
  }

  const ModelConfig& config() const { return cfg_; }

  void init() {
    ndnn::Rng rng(cfg_.seed);
    code.init(rng);
    text.init(rng);
    log_scale.data[0] = static_cast<Scalar>(cfg_.logit_scale_init);
  }

  std::vector<ParamRef<Scalar>> parameters() {
    std::vector<ParamRef<Scalar>> out;
    code.parameters(out);
    text.parameters(out);
    out.push_back({"logit_scale", &log_scale});
    return out;
  }
  std::vector<ParamRef<Scalar>> buffers() {
    std::vector<ParamRef<Scalar>> out;
    code.buffers(out);
    return out;
  }

  double temperature() const {
    return std::min(std::exp(static_cast<double>(log_scale.data[0])), ndnn::kMaxLogitScale);
  }

  /// d x N embeddings.
  Mat<Scalar> embed_codes(const std::vector<const EncodedPair*>& batch, bool training) {
    std::vector<const std::vector<float>*> imgs;
    for (const auto* p : batch) imgs.push_back(&p->image);
    auto y = code.forward(encoders::image_batch<Scalar>(imgs, cfg_.image_length), training);
    return y.matrix(cfg_.embed_dim, y.batch());
  }
  Mat<Scalar> embed_texts(const std::vector<const EncodedPair*>& batch, bool training) {
    std::vector<const std::vector<std::int32_t>*> seqs;
    for (const auto* p : batch) seqs.push_back(&p->text);
    auto y = text.forward(encoders::TextBatch::pack(seqs, cfg_.text_max_len), training);
    return y.matrix(cfg_.embed_dim, y.batch());
  }

  encoders::CodeEncoder<Scalar> code;
  encoders::TextEncoder<Scalar> text;
  Tensor<Scalar> log_scale;
};

/// Fraction of rows (codes) whose argmax column is the diagonal, ties to the
/// lowest index.
template <typename Scalar>
double matching_accuracy(const Mat<Scalar>& logits) {
  Index correct = 0;
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < logits.cols(); ++j) {
      if (logits(i, j) > logits(i, best)) best = j;
    }
    correct += best == i;
  }
  return logits.rows() ? static_cast<double>(correct) / static_cast<double>(logits.rows()) : 0.0;
}

struct StepResult {
  double loss = 0;
  double accuracy = 0;
};

/// One optimizer-free forward/backward over a batch; gradients accumulate.
template <typename Scalar>
StepResult contrastive_step(ClcpModel<Scalar>& model, const std::vector<const EncodedPair*>& batch, bool training,
                            bool backward) {
  ndnn::SimilarityHead<Scalar> head;
  const Mat<Scalar> c = model.embed_codes(batch, training);
  const Mat<Scalar> t = model.embed_texts(batch, training);
  const Mat<Scalar> logits = head.forward(c, t, model.log_scale.data[0]);
  const auto lr = ndnn::clip_loss<Scalar>(logits);
  StepResult r{static_cast<double>(lr.loss), matching_accuracy(logits)};
  if (!std::isfinite(r.loss)) throw encoders::NonFiniteActivation("clip_loss");
  if (backward) {
    Mat<Scalar> dc, dt;
    const Scalar dls = head.backward(lr.dlogits, dc, dt);
    const Index d = c.rows(), n = c.cols();
    Tensor<Scalar> gc({n, d, 1}), gt({n, d, 1});
    gc.matrix(d, n) = dc;
    gt.matrix(d, n) = dt;
    model.code.backward(gc);
    model.text.backward(gt);
    ndnn::ensure_grad(model.log_scale);
    model.log_scale.grad[0] += dls;
  }
  return r;
}

struct EpochMetrics {
  int epoch = 0;
  long step = 0;
  double train_loss = 0;
  std::optional<double> val_loss;
  double temperature = 0;
  double train_acc = 0;

  nlohmann::json to_json() const {
    nlohmann::json j = {{"epoch", epoch},     {"step", step},           {"train_loss", train_loss},
                        {"val_loss", nullptr}, {"temperature", temperature}, {"train_acc", train_acc}};
    if (val_loss) j["val_loss"] = *val_loss;
    return j;
  }
};

struct TrainOptions {
  std::string out_dir;                           // empty: nothing written
  std::ostream* log = nullptr;                   // warnings and progress
  std::function<void(const EpochMetrics&)> on_epoch;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
  int best_epoch = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::string stop_reason;  // max_epochs | early_stop | target_acc | non_finite
  std::string error;        // set when stop_reason is non_finite
  std::vector<std::string> warnings;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
};

/// Everything needed to continue a run exactly: parameters, buffers,
/// optimizer moments plus the counters in `state.json`.
template <typename Scalar>
class TrainState {
 public:
  explicit TrainState(ClcpModel<Scalar>& model) : model_(model), adam_(adam_config(model.config())) {}

  ndnn::Adam<Scalar>& adam() { return adam_; }
  long step = 0;
  int epoch = 0;
  int best_epoch = 0;
  int stale_epochs = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();

  std::vector<ParamRef<Scalar>> entries() {
    auto params = model_.parameters();
    auto out = params;
    for (auto& b : model_.buffers()) out.push_back(b);
    adam_.state(out, params);
    return out;
  }

  void save(const std::string& dir) {
    std::filesystem::create_directories(dir);
    ndnn::save_checkpoint(dir + "/checkpoint.bin", entries());
    nlohmann::json j = {{"step", step},
                        {"epoch", epoch},
                        {"best_epoch", best_epoch},
                        {"stale_epochs", stale_epochs},
                        {"best_val_loss", std::isfinite(best_val_loss) ? nlohmann::json(best_val_loss) : nullptr},
                        {"adam_steps", adam_.steps()},
                        {"seed", model_.config().seed},
                        {"config_hash", model_.config().hash()}};
    std::ofstream(dir + "/state.json") << j.dump(2) << "\n";
  }

  void load(const std::string& dir) {
    ndnn::load_checkpoint(dir + "/checkpoint.bin", entries());
    std::ifstream in(dir + "/state.json");
    if (!in) throw ndnn::CheckpointError("cannot read " + dir + "/state.json");
    const auto j = nlohmann::json::parse(in);
    step = j.at("step");
    epoch = j.at("epoch");
    best_epoch = j.at("best_epoch");
    stale_epochs = j.at("stale_epochs");
    best_val_loss = j.at("best_val_loss").is_null() ? std::numeric_limits<double>::infinity()
                                                     : j.at("best_val_loss").template get<double>();
    adam_.set_steps(j.at("adam_steps"));
  }

 private:
  static ndnn::AdamConfig adam_config(const ModelConfig& cfg) {
    ndnn::AdamConfig a;
    a.lr = cfg.lr;
    return a;
  }
  ClcpModel<Scalar>& model_;
  ndnn::Adam<Scalar> adam_;
};

/// Seeded split of `n` pair indices into (train, validation).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_split(std::size_t n,
                                                                                     double fraction,
                                                                                     std::uint64_t seed) {
  auto perm = ingest::seeded_permutation(n, seed ^ 0x5a17u);
  auto nval = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (fraction > 0 && nval < 2 && n >= 4) nval = 2;
  std::vector<std::size_t> val(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nval));
  std::vector<std::size_t> train(perm.begin() + static_cast<std::ptrdiff_t>(nval), perm.end());
  return {train, val};
}

/// Consecutive batches over `order`; a trailing batch of one is folded into
/// the previous batch unless the batch size itself is one.
inline std::vector<std::vector<std::size_t>> make_batches(const std::vector<std::size_t>& order, std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < order.size(); i += size) {
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                     order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + size)));
  }
  if (size > 1 && out.size() > 1 && out.back().size() == 1) {
    out[out.size() - 2].push_back(out.back()[0]);
    out.pop_back();
  }
  return out;
}

template <typename Scalar>
double validation_loss(ClcpModel<Scalar>& model, const std::vector<EncodedPair>& pairs,
                       const std::vector<std::size_t>& idx) {
  double total = 0;
  std::size_t weight = 0;
  for (const auto& b : make_batches(idx, static_cast<std::size_t>(model.config().batch_size))) {
    std::vector<const EncodedPair*> batch;
    for (auto i : b) batch.push_back(&pairs[i]);
    total += contrastive_step(model, batch, false, false).loss * static_cast<double>(b.size());
    weight += b.size();
  }
  return weight ? total / static_cast<double>(weight) : 0.0;
}

/// Contrastive training with early stopping on validation loss. On return
/// the model holds the best parameters (lowest validation loss, or the last
/// finished epoch without a validation split). With an output directory the
/// best state, `metrics.jsonl` and `result.json` are written there.
template <typename Scalar>
TrainResult train(ClcpModel<Scalar>& model, const std::vector<EncodedPair>& pairs, const TrainOptions& opts = {}) {
  const ModelConfig& cfg = model.config();
  TrainResult result;
  auto warn = [&](const std::string& w) {
    result.warnings.push_back(w);
    if (opts.log) *opts.log << "warning: " << w << "\n";
  };
  if (cfg.batch_size == 1) warn("batch size 1: the contrastive loss is identically zero");
  auto [train_idx, val_idx] = validation_split(pairs.size(), cfg.val_fraction, cfg.seed);
  result.train_size = train_idx.size();
  result.val_size = val_idx.size();
  if (train_idx.empty()) throw std::invalid_argument("train: no training pairs");

  TrainState<Scalar> state(model);
  auto params = model.parameters();
  auto snapshot = [&]() {
    std::vector<Tensor<Scalar>> s;
    for (auto& e : state.entries()) s.push_back(*e.tensor);
    return s;
  };
  auto restore = [&](const std::vector<Tensor<Scalar>>& s) {
    auto e = state.entries();
    for (std::size_t i = 0; i < e.size(); ++i) e[i].tensor->data = s[i].data;
  };
  std::vector<Tensor<Scalar>> best = snapshot();
  std::ofstream metrics;
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    metrics.open(opts.out_dir + "/metrics.jsonl");
  }
  const auto checkpoint = [&]() {
    if (opts.out_dir.empty()) return;
    auto live = snapshot();
    restore(best);
    state.save(opts.out_dir + "/best");
    restore(live);
  };

  const auto abort_non_finite = [&](const std::string& what) {
    result.stop_reason = "non_finite";
    result.error = what;
    if (opts.log) *opts.log << "error: " << what << "; keeping epoch " << state.best_epoch << "\n";
  };
  result.stop_reason = "max_epochs";
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochMetrics m;
    m.epoch = epoch;
    double loss_sum = 0, acc_sum = 0;
    std::size_t seen = 0;
    std::vector<std::size_t> order(train_idx.size());
    const auto perm = ingest::seeded_permutation(train_idx.size(), cfg.seed * 1000003u + static_cast<unsigned>(epoch));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = train_idx[perm[i]];
    try {
      for (const auto& b : make_batches(order, static_cast<std::size_t>(cfg.batch_size))) {
        std::vector<const EncodedPair*> batch;
        for (auto i : b) batch.push_back(&pairs[i]);
        ndnn::zero_grads(params);
        const auto r = contrastive_step(model, batch, true, true);
        state.adam().step(params);
        ++state.step;
        loss_sum += r.loss * static_cast<double>(b.size());
        acc_sum += r.accuracy * static_cast<double>(b.size());
        seen += b.size();
      }
      if (!val_idx.empty()) m.val_loss = validation_loss(model, pairs, val_idx);
    } catch (const encoders::NonFiniteActivation& e) {
      abort_non_finite(e.what());
      break;
    } catch (const ndnn::NonFiniteGradient& e) {
      abort_non_finite(e.what());
      break;
    }
    state.epoch = epoch;
    m.step = state.step;
    m.train_loss = loss_sum / static_cast<double>(seen);
    m.train_acc = acc_sum / static_cast<double>(seen);
    m.temperature = model.temperature();
    result.history.push_back(m);
    if (metrics.is_open()) metrics << m.to_json().dump() << "\n" << std::flush;

    const double score = m.val_loss.value_or(-static_cast<double>(epoch));
    const bool improved = score < state.best_val_loss || !m.val_loss;
    if (improved) {
      state.best_val_loss = score;
      state.best_epoch = epoch;
      state.stale_epochs = 0;
      best = snapshot();
      checkpoint();
    }
    if (opts.on_epoch) opts.on_epoch(m);
    if (!improved && ++state.stale_epochs >= cfg.patience) {
      result.stop_reason = "early_stop";
      break;
    }
    if (cfg.target_train_acc > 0 && m.train_acc >= cfg.target_train_acc) {
      result.stop_reason = "target_acc";
      break;
    }
  }
  restore(best);
  result.best_epoch = state.best_epoch;
  if (!val_idx.empty()) result.best_val_loss = state.best_val_loss;
  if (!opts.out_dir.empty()) {
    nlohmann::json j = {{"stop_reason", result.stop_reason},
                        {"error", result.error},
                        {"best_epoch", result.best_epoch},
                        {"epochs", result.history.size()},
                        {"train_size", result.train_size},
                        {"val_size", result.val_size},
                        {"warnings", result.warnings}};
    j["best_val_loss"] = std::isfinite(result.best_val_loss) ? nlohmann::json(result.best_val_loss) : nullptr;
    std::ofstream(opts.out_dir + "/result.json") << j.dump(2) << "\n";
  }
  return result;
}

}  // namespace clcp
