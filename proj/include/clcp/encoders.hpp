// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "clcp/config.hpp"
#include "clcp/ndnn.hpp"

namespace clcp::encoders {

using ndnn::Index;
using ndnn::Rng;
using ndnn::Tensor;

class NonFiniteActivation : public std::runtime_error {
 public:
  explicit NonFiniteActivation(const std::string& layer)
      : std::runtime_error("non-finite activation after " + layer), layer_(layer) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};

template <typename Scalar>
void require_finite(const Tensor<Scalar>& t, const std::string& layer) {
  if (!t.data.allFinite()) throw NonFiniteActivation(layer);
}

/// Runs a Sequential layer by layer so a non-finite activation can be
/// attributed to the layer that produced it.
template <typename Scalar>
Tensor<Scalar> checked_forward(ndnn::Sequential<Scalar>& net, const Tensor<Scalar>& x, bool training) {
  Tensor<Scalar> h = x;
  for (std::size_t i = 0; i < net.size(); ++i) {
    h = net.at(i).forward(h, training);
    require_finite(h, net.at(i).name());
  }
  return h;
}

template <typename Scalar>
Tensor<Scalar> sequential_backward(ndnn::Sequential<Scalar>& net, const Tensor<Scalar>& dy) {
  Tensor<Scalar> g = dy;
  for (std::size_t i = net.size(); i-- > 0;) g = net.at(i).backward(g);
  return g;
}

/// Code encoder for one of the three families, ending in a dense projection
/// and L2 normalization. Input {B, 1, image_length}, output {B, d, 1}.
///
///   lp: M x (conv -> [BN] -> ReLU -> local pool) -> flatten -> dense
///   gp: M x (conv -> [BN] -> ReLU) -> global pool -> dense
///   rn: conv -> [BN] -> ReLU -> M x (residual block -> ReLU) -> global pool -> dense
///
/// -Pool drops every pooling layer (the projection then sees the flattened
/// map); +BN puts batch norm before each activation.
template <typename Scalar>
class CodeEncoder {
 public:
  explicit CodeEncoder(const ModelConfig& cfg) : cfg_(cfg), net_("code"), norm_("code.normalize") {
    cfg.validate();
    using namespace ndnn;
    const auto mode = cfg.pool_mode == "avg" ? PoolMode::Avg : PoolMode::Max;
    auto act = [&](const std::string& prefix, Index channels) {
      if (cfg.use_bn) net_.template add<BatchNorm1d<Scalar>>(prefix + ".bn", channels);
      net_.template add<ReLU<Scalar>>(prefix + ".relu");
    };
    Index ch = 1;
    if (cfg.residual()) {
      const Index first = cfg.block_channels(1);
      net_.template add<Conv1d<Scalar>>("input.conv", ch, first, cfg.kernel, cfg.stride);
      act("input", first);
      ch = first;
      for (int b = 1; b <= cfg.blocks; ++b) {
        const std::string name = "block" + std::to_string(b);
        const Index out = cfg.block_channels(b);
        net_.template add<ResidualBlock<Scalar>>(name, ch, out, cfg.kernel, cfg.use_bn);
        net_.template add<ReLU<Scalar>>(name + ".relu");
        ch = out;
      }
    } else {
      for (int b = 1; b <= cfg.blocks; ++b) {
        const std::string name = "block" + std::to_string(b);
        const Index out = cfg.block_channels(b);
        net_.template add<Conv1d<Scalar>>(name + ".conv", ch, out, cfg.kernel, cfg.stride);
        act(name, out);
        if (cfg.use_pooling && !cfg.global_pool()) {
          net_.template add<Pool1d<Scalar>>(name + ".pool", mode, PoolScope::Local, cfg.pool_kernel, cfg.pool_stride);
        }
        ch = out;
      }
    }
    if (cfg.use_pooling && cfg.global_pool()) {
      net_.template add<Pool1d<Scalar>>("global_pool", mode, PoolScope::Global);
    }
    net_.template add<Flatten<Scalar>>("flatten");
    const FeatureShape flat = net_.plan({1, cfg.image_length});
    net_.template add<Dense<Scalar>>("projection", flat.channels, cfg.embed_dim);
  }

  const ModelConfig& config() const { return cfg_; }
  ndnn::Sequential<Scalar>& net() { return net_; }

  void init(Rng& rng) { net_.init(cfg_.use_he_init ? ndnn::Init::He : ndnn::Init::FanInUniform, rng); }

  Tensor<Scalar> forward(const Tensor<Scalar>& images, bool training) {
    if (images.shape.size() != 3 || images.channels() != 1 || images.length() != cfg_.image_length) {
      throw ndnn::ShapeError("code encoder: expected {B,1," + std::to_string(cfg_.image_length) + "}, got " +
                             ndnn::shape_string(images.shape));
    }
    Tensor<Scalar> y = norm_.forward(checked_forward(net_, images, training), training);
    require_finite(y, "code.normalize");
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) { return sequential_backward(net_, norm_.backward(dy)); }

  void parameters(std::vector<ndnn::ParamRef<Scalar>>& out) { net_.parameters(out); }
  void buffers(std::vector<ndnn::ParamRef<Scalar>>& out) { net_.buffers(out); }

 private:
  ModelConfig cfg_;
  ndnn::Sequential<Scalar> net_;
  ndnn::L2Normalize<Scalar> norm_;
};

/// Padded token batch; ids and mask are B * len, sample-major.
struct TextBatch {
  std::vector<std::int32_t> ids;
  ndnn::PositionMask mask;
  Index batch = 0;
  Index len = 0;

  /// Pads to the longest sequence (cut at max_len) with id 0.
  static TextBatch pack(const std::vector<const std::vector<std::int32_t>*>& seqs, Index max_len) {
    TextBatch tb;
    tb.batch = static_cast<Index>(seqs.size());
    for (const auto* s : seqs) tb.len = std::max(tb.len, std::min<Index>(static_cast<Index>(s->size()), max_len));
    tb.len = std::max<Index>(tb.len, 1);
    tb.ids.assign(static_cast<std::size_t>(tb.batch * tb.len), 0);
    tb.mask.assign(tb.ids.size(), 0);
    for (Index b = 0; b < tb.batch; ++b) {
      const auto& s = *seqs[static_cast<std::size_t>(b)];
      for (Index t = 0; t < std::min<Index>(static_cast<Index>(s.size()), tb.len); ++t) {
        const auto at = static_cast<std::size_t>(b * tb.len + t);
        tb.ids[at] = s[static_cast<std::size_t>(t)];
        tb.mask[at] = s[static_cast<std::size_t>(t)] != 0;
      }
    }
    return tb;
  }
};

/// Token + position embedding -> A transformer layers -> masked mean pool
/// -> dense -> L2 normalization. A = 0 reduces to a projected bag of
/// embeddings.
template <typename Scalar>
class TextEncoder {
 public:
  TextEncoder(const ModelConfig& cfg, Index vocab_size)
      : cfg_(cfg),
        embed_("text.embed", vocab_size, cfg.text_width, cfg.text_max_len),
        pool_("text.pool"),
        proj_("text.projection", cfg.text_width, cfg.embed_dim),
        norm_("text.normalize") {
    for (int a = 0; a < cfg.text_layers; ++a) {
      layers_.push_back(std::make_unique<ndnn::TransformerLayer<Scalar>>(
          "text.layer" + std::to_string(a + 1), cfg.text_width, cfg.text_heads, cfg.text_ffn));
    }
  }

  void init(Rng& rng) {
    embed_.init(rng);
    for (auto& l : layers_) l->init(ndnn::Init::FanInUniform, rng);
    proj_.init(ndnn::Init::FanInUniform, rng);
  }

  Tensor<Scalar> forward(const TextBatch& tb, bool training) {
    Tensor<Scalar> h = embed_.forward(tb.ids, tb.batch, tb.len);
    for (auto& l : layers_) {
      l->set_mask(tb.mask);
      h = l->forward(h, training);
      require_finite(h, l->name());
    }
    pool_.set_mask(tb.mask);
    h = pool_.forward(h, training);
    h = proj_.forward(h, training);
    require_finite(h, proj_.name());
    return norm_.forward(h, training);
  }

  void backward(const Tensor<Scalar>& dy) {
    Tensor<Scalar> g = proj_.backward(norm_.backward(dy));
    g = pool_.backward(g);
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    embed_.backward(g);
  }

  void parameters(std::vector<ndnn::ParamRef<Scalar>>& out) {
    embed_.parameters(out);
    for (auto& l : layers_) l->parameters(out);
    proj_.parameters(out);
  }

  ndnn::TokenEmbedding<Scalar>& embedding() { return embed_; }
  ndnn::Dense<Scalar>& projection() { return proj_; }

 private:
  ModelConfig cfg_;
  ndnn::TokenEmbedding<Scalar> embed_;
  std::vector<std::unique_ptr<ndnn::TransformerLayer<Scalar>>> layers_;
  ndnn::MaskedMeanPool<Scalar> pool_;
  ndnn::Dense<Scalar> proj_;
  ndnn::L2Normalize<Scalar> norm_;
};

/// Packs normalized image values into {B, 1, L}.
template <typename Scalar>
Tensor<Scalar> image_batch(const std::vector<const std::vector<float>*>& images, Index length) {
  Tensor<Scalar> t = ndnn::activation<Scalar>(static_cast<Index>(images.size()), 1, length);
  for (std::size_t b = 0; b < images.size(); ++b) {
    if (static_cast<Index>(images[b]->size()) != length) throw ndnn::ShapeError("image length mismatch");
    for (Index i = 0; i < length; ++i) t.data[static_cast<Index>(b) * length + i] = (*images[b])[static_cast<std::size_t>(i)];
  }
  return t;
}

}  // namespace clcp::encoders
