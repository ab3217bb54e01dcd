// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace clcp {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Family { Lp, Gp, Rn };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Architecture and training hyperparameters. Serialized as flat
/// `key = value` text; every field is addressable by name.
struct ModelConfig {
  // code encoder
  Family family = Family::Lp;
  int blocks = 3;
  int kernel = 3;
  int stride = 1;
  int pool_kernel = 2;
  int pool_stride = 2;
  std::string pool_mode = "max";  // max | avg
  int channels = 16;              // first block; doubles per block
  int channel_cap = 128;
  bool use_bn = false;
  bool use_pooling = true;
  bool use_he_init = true;
  int embed_dim = 64;
  int image_length = 512;

  // text encoder
  int text_vocab_size = 8000;
  int text_min_freq = 1;
  int text_width = 64;
  int text_layers = 1;
  int text_heads = 4;
  int text_ffn = 128;
  int text_max_len = 32;

  // training
  double logit_scale_init = 2.659260036932778;  // ln(1 / 0.07)
  std::string optimizer = "adam";                // adam | sgd
  double lr = 1e-3;
  int batch_size = 32;
  int max_epochs = 50;
  int patience = 5;
  double val_fraction = 0.05;
  double target_train_acc = 0;  // > 0: stop once an epoch reaches it
  std::uint64_t seed = 1;

  /// Block-stack (lp, gp) or residual (rn).
  bool residual() const { return family == Family::Rn; }
  bool global_pool() const { return family != Family::Lp; }
  int block_channels(int block) const;  // 1-based

  void validate() const;
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  std::string serialize() const;
  static ModelConfig parse(const std::string& text);
  static ModelConfig load(const std::string& path);
  void save(const std::string& path) const;
  /// Short id such as lp3, rn5+BN, gp4-Pool.
  std::string id() const;
  std::string hash() const;
};

/// One stage of the code encoder dry run.
struct PlanStep {
  std::string layer;
  int channels = 0;
  int length = 0;
};

/// Computes every intermediate shape of the code encoder without running
/// any math. Throws ConfigError naming the first block whose output length
/// drops below 1.
std::vector<PlanStep> plan_code_encoder(const ModelConfig& cfg);

}  // namespace clcp
