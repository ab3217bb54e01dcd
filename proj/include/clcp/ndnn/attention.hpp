// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "clcp/ndnn/layers.hpp"

namespace clcp::ndnn {

/// Per-sample validity of sequence positions, B * T entries, sample-major.
using PositionMask = std::vector<std::uint8_t>;

/// Token table plus learned position table. Input ids are B * T, sample-major.
template <typename Scalar>
class TokenEmbedding {
 public:
  TokenEmbedding(std::string name, Index vocab, Index width, Index max_len)
      : name_(std::move(name)), vocab_(vocab), width_(width), max_len_(max_len),
        tokens({vocab, width}), positions({max_len, width}) {}

  const std::string& name() const { return name_; }
  Index width() const { return width_; }
  Index max_len() const { return max_len_; }

  void init(Rng& rng) {
    normal_fill(tokens, 0.1, rng);
    normal_fill(positions, 0.1, rng);
  }

  /// Returns {B, width, T}.
  Tensor<Scalar> forward(const std::vector<std::int32_t>& ids, Index batch, Index len) {
    if (static_cast<Index>(ids.size()) != batch * len) throw ShapeError(name_ + ": id count mismatch");
    if (len > max_len_) throw ShapeError(name_ + ": sequence longer than " + std::to_string(max_len_));
    Tensor<Scalar> y = activation<Scalar>(batch, width_, len);
    const auto tok = tokens.matrix(width_, vocab_);
    const auto pos = positions.matrix(width_, max_len_);
    for (Index b = 0; b < batch; ++b) {
      auto yb = y.sample(b);
      for (Index t = 0; t < len; ++t) {
        const std::int32_t id = ids[static_cast<std::size_t>(b * len + t)];
        if (id < 0 || id >= vocab_) throw ShapeError(name_ + ": token id " + std::to_string(id) + " out of range");
        yb.col(t) = tok.col(id) + pos.col(t);
      }
    }
    ids_ = ids;
    batch_ = batch;
    len_ = len;
    cached_ = true;
    return y;
  }

  void backward(const Tensor<Scalar>& dy) {
    if (!cached_) throw std::logic_error(name_ + ": backward called without a recorded forward pass");
    ensure_grad(tokens);
    ensure_grad(positions);
    auto dt = tokens.grad_matrix(width_, vocab_);
    auto dp = positions.grad_matrix(width_, max_len_);
    for (Index b = 0; b < batch_; ++b) {
      const auto g = dy.sample(b);
      for (Index t = 0; t < len_; ++t) {
        dt.col(ids_[static_cast<std::size_t>(b * len_ + t)]) += g.col(t);
        dp.col(t) += g.col(t);
      }
    }
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) {
    out.push_back({name_ + ".tokens", &tokens});
    out.push_back({name_ + ".positions", &positions});
  }

 private:
  std::string name_;
  Index vocab_, width_, max_len_;
  std::vector<std::int32_t> ids_;
  Index batch_ = 0, len_ = 0;
  bool cached_ = false;

 public:
  // Column-major width x vocab and width x max_len.
  Tensor<Scalar> tokens;
  Tensor<Scalar> positions;
};

/// Multi-head scaled dot-product self-attention over {B, D, T}. Keys at
/// masked positions get zero weight; a sample with no valid position
/// attends to every position.
template <typename Scalar>
class MultiHeadSelfAttention : public Layer<Scalar> {
 public:
  MultiHeadSelfAttention(std::string name, Index width, Index heads)
      : Layer<Scalar>(std::move(name)), width_(width), heads_(heads),
        wq({width, width}), wk({width, width}), wv({width, width}), wo({width, width}),
        bq({width}), bk({width}), bv({width}), bo({width}) {
    if (heads < 1 || width % heads != 0) {
      throw ShapeError(this->name_ + ": width " + std::to_string(width) + " not divisible by " +
                       std::to_string(heads) + " heads");
    }
  }

  std::string kind() const override { return "self_attention"; }
  void set_mask(PositionMask mask) { mask_ = std::move(mask); }

  FeatureShape plan(FeatureShape in) const override {
    if (in.channels != width_) {
      throw ShapeError(this->name_ + ": expected width " + std::to_string(width_) + ", got " +
                       std::to_string(in.channels));
    }
    return in;
  }
  void init(Init, Rng& rng) override {
    for (Tensor<Scalar>* w : {&wq, &wk, &wv, &wo}) uniform_fan_in(*w, width_, rng);
    for (Tensor<Scalar>* b : {&bq, &bk, &bv, &bo}) b->data.setZero();
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    plan({x.channels(), x.length()});
    const Index batch = x.batch();
    const Index len = x.length();
    const Index dh = width_ / heads_;
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dh));
    x_ = x;
    for (auto* cache : {&q_, &k_, &v_, &o_}) cache->assign(static_cast<std::size_t>(batch), {});
    attn_.assign(static_cast<std::size_t>(batch * heads_), {});
    Tensor<Scalar> y(x.shape);
    for (Index b = 0; b < batch; ++b) {
      const auto xb = x.sample(b);
      auto& q = q_[b];
      auto& k = k_[b];
      auto& v = v_[b];
      q.noalias() = wq.matrix(width_, width_) * xb;
      q.colwise() += bq.data;
      k.noalias() = wk.matrix(width_, width_) * xb;
      k.colwise() += bk.data;
      v.noalias() = wv.matrix(width_, width_) * xb;
      v.colwise() += bv.data;
      const std::vector<bool> valid = valid_positions(b, len);
      o_[b].resize(width_, len);
      for (Index h = 0; h < heads_; ++h) {
        Mat<Scalar> s = scale * (q.middleRows(h * dh, dh).transpose() * k.middleRows(h * dh, dh));
        for (Index j = 0; j < len; ++j) {
          if (!valid[static_cast<std::size_t>(j)]) s.col(j).setConstant(-std::numeric_limits<Scalar>::infinity());
        }
        for (Index i = 0; i < len; ++i) {
          const Scalar m = s.row(i).maxCoeff();
          s.row(i) = (s.row(i).array() - m).exp().matrix();
          s.row(i) /= s.row(i).sum();
        }
        o_[b].middleRows(h * dh, dh).noalias() = v.middleRows(h * dh, dh) * s.transpose();
        attn_[static_cast<std::size_t>(b * heads_ + h)] = std::move(s);
      }
      auto yb = y.sample(b);
      yb.noalias() = wo.matrix(width_, width_) * o_[b];
      yb.colwise() += bo.data;
    }
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, x_.shape);
    for (Tensor<Scalar>* p : {&wq, &wk, &wv, &wo, &bq, &bk, &bv, &bo}) ensure_grad(*p);
    const Index batch = dy.batch();
    const Index dh = width_ / heads_;
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(dh));
    Tensor<Scalar> dx(x_.shape);
    Mat<Scalar> dq, dk, dv;
    for (Index b = 0; b < batch; ++b) {
      const auto g = dy.sample(b);
      const auto xb = x_.sample(b);
      wo.grad_matrix(width_, width_).noalias() += g * o_[b].transpose();
      bo.grad += g.rowwise().sum();
      const Mat<Scalar> d_o = wo.matrix(width_, width_).transpose() * g;
      dq.setZero(width_, xb.cols());
      dk.setZero(width_, xb.cols());
      dv.setZero(width_, xb.cols());
      for (Index h = 0; h < heads_; ++h) {
        const Mat<Scalar>& a = attn_[static_cast<std::size_t>(b * heads_ + h)];
        const auto doh = d_o.middleRows(h * dh, dh);
        dv.middleRows(h * dh, dh).noalias() = doh * a;
        const Mat<Scalar> da = doh.transpose() * v_[b].middleRows(h * dh, dh);
        const Vec<Scalar> row_dot = da.cwiseProduct(a).rowwise().sum();
        const Mat<Scalar> ds = (a.array() * (da.colwise() - row_dot).array()).matrix();
        dq.middleRows(h * dh, dh).noalias() = scale * k_[b].middleRows(h * dh, dh) * ds.transpose();
        dk.middleRows(h * dh, dh).noalias() = scale * q_[b].middleRows(h * dh, dh) * ds;
      }
      wq.grad_matrix(width_, width_).noalias() += dq * xb.transpose();
      wk.grad_matrix(width_, width_).noalias() += dk * xb.transpose();
      wv.grad_matrix(width_, width_).noalias() += dv * xb.transpose();
      bq.grad += dq.rowwise().sum();
      bk.grad += dk.rowwise().sum();
      bv.grad += dv.rowwise().sum();
      auto dxb = dx.sample(b);
      dxb.noalias() = wq.matrix(width_, width_).transpose() * dq;
      dxb.noalias() += wk.matrix(width_, width_).transpose() * dk;
      dxb.noalias() += wv.matrix(width_, width_).transpose() * dv;
    }
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    out.push_back({this->name_ + ".wq", &wq});
    out.push_back({this->name_ + ".bq", &bq});
    out.push_back({this->name_ + ".wk", &wk});
    out.push_back({this->name_ + ".bk", &bk});
    out.push_back({this->name_ + ".wv", &wv});
    out.push_back({this->name_ + ".bv", &bv});
    out.push_back({this->name_ + ".wo", &wo});
    out.push_back({this->name_ + ".bo", &bo});
  }

 private:
  std::vector<bool> valid_positions(Index b, Index len) const {
    std::vector<bool> valid(static_cast<std::size_t>(len), true);
    if (mask_.empty()) return valid;
    bool any = false;
    for (Index t = 0; t < len; ++t) {
      valid[static_cast<std::size_t>(t)] = mask_.at(static_cast<std::size_t>(b * len + t)) != 0;
      any = any || valid[static_cast<std::size_t>(t)];
    }
    if (!any) valid.assign(valid.size(), true);
    return valid;
  }

  Index width_, heads_;
  PositionMask mask_;
  Tensor<Scalar> x_;
  std::vector<Mat<Scalar>> q_, k_, v_, o_, attn_;

 public:
  Tensor<Scalar> wq, wk, wv, wo, bq, bk, bv, bo;
};

/// Mean over valid positions: {B, D, T} -> {B, D, 1}.
template <typename Scalar>
class MaskedMeanPool : public Layer<Scalar> {
 public:
  explicit MaskedMeanPool(std::string name) : Layer<Scalar>(std::move(name)) {}
  std::string kind() const override { return "masked_mean_pool"; }
  void set_mask(PositionMask mask) { mask_ = std::move(mask); }
  FeatureShape plan(FeatureShape in) const override { return {in.channels, 1}; }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    const Index batch = x.batch();
    const Index len = x.length();
    weights_ = Mat<Scalar>::Zero(len, batch);
    for (Index b = 0; b < batch; ++b) {
      Index n = 0;
      for (Index t = 0; t < len; ++t) n += valid(b, t, len) ? 1 : 0;
      for (Index t = 0; t < len; ++t) {
        if (n == 0 || valid(b, t, len)) weights_(t, b) = Scalar(1) / static_cast<Scalar>(n == 0 ? len : n);
      }
    }
    Tensor<Scalar> y = activation<Scalar>(batch, x.channels(), 1);
    for (Index b = 0; b < batch; ++b) y.sample(b).noalias() = x.sample(b) * weights_.col(b);
    in_shape_ = x.shape;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    Tensor<Scalar> dx(in_shape_);
    for (Index b = 0; b < dx.batch(); ++b) dx.sample(b).noalias() = dy.sample(b) * weights_.col(b).transpose();
    return dx;
  }

 private:
  bool valid(Index b, Index t, Index len) const {
    return mask_.empty() || mask_.at(static_cast<std::size_t>(b * len + t)) != 0;
  }
  PositionMask mask_;
  Mat<Scalar> weights_;
  std::vector<Index> in_shape_;
};

/// x + attention(x), then h + ffn(h); no layer normalization.
template <typename Scalar>
class TransformerLayer : public Layer<Scalar> {
 public:
  TransformerLayer(std::string name, Index width, Index heads, Index hidden)
      : Layer<Scalar>(name), attention_(name + ".attn", width, heads), ffn_(name + ".ffn") {
    ffn_.template add<Conv1d<Scalar>>(name + ".ffn_in", width, hidden, 1, 1);
    ffn_.template add<ReLU<Scalar>>(name + ".ffn_relu");
    ffn_.template add<Conv1d<Scalar>>(name + ".ffn_out", hidden, width, 1, 1);
  }

  std::string kind() const override { return "transformer"; }
  void set_mask(PositionMask mask) { attention_.set_mask(std::move(mask)); }
  MultiHeadSelfAttention<Scalar>& attention() { return attention_; }
  FeatureShape plan(FeatureShape in) const override { return ffn_.plan(attention_.plan(in)); }
  void init(Init, Rng& rng) override {
    attention_.init(Init::FanInUniform, rng);
    ffn_.init(Init::FanInUniform, rng);
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool training) override {
    Tensor<Scalar> h = attention_.forward(x, training);
    h.data += x.data;
    Tensor<Scalar> y = ffn_.forward(h, training);
    y.data += h.data;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    Tensor<Scalar> dh = ffn_.backward(dy);
    dh.data += dy.data;
    Tensor<Scalar> dx = attention_.backward(dh);
    dx.data += dh.data;
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    attention_.parameters(out);
    ffn_.parameters(out);
  }

 private:
  MultiHeadSelfAttention<Scalar> attention_;
  Sequential<Scalar> ffn_;
};

}  // namespace clcp::ndnn
