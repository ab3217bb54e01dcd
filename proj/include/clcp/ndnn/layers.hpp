// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clcp/ndnn/init.hpp"
#include "clcp/ndnn/tensor.hpp"

namespace clcp::ndnn {

/// Base class for modules with a cached forward pass. backward() consumes
/// the upstream gradient, accumulates parameter gradients and returns the
/// gradient with respect to the input of the last forward().
template <typename Scalar>
class Layer {
 public:
  explicit Layer(std::string name) : name_(std::move(name)) {}
  virtual ~Layer() = default;
  Layer(const Layer&) = delete;
  Layer& operator=(const Layer&) = delete;

  const std::string& name() const { return name_; }
  virtual std::string kind() const = 0;
  /// Output geometry for an input geometry; throws ShapeError naming the layer.
  virtual FeatureShape plan(FeatureShape in) const = 0;
  virtual Tensor<Scalar> forward(const Tensor<Scalar>& x, bool training) = 0;
  virtual Tensor<Scalar> backward(const Tensor<Scalar>& dy) = 0;
  virtual void parameters(std::vector<ParamRef<Scalar>>&) {}
  /// Persistent non-trainable state (running statistics).
  virtual void buffers(std::vector<ParamRef<Scalar>>&) {}
  virtual void init(Init, Rng&) {}

 protected:
  void require_forward() const {
    if (!cached_) throw std::logic_error(name_ + ": backward called without a recorded forward pass");
  }
  void check_rank(const Tensor<Scalar>& x) const {
    if (x.shape.size() != 3) throw ShapeError(name_ + ": expected {B,C,L}, got " + shape_string(x.shape));
  }
  void check_same(const Tensor<Scalar>& dy, const std::vector<Index>& expected) const {
    if (dy.shape != expected) {
      throw ShapeError(name_ + ": gradient shape " + shape_string(dy.shape) + " does not match output " +
                       shape_string(expected));
    }
  }

  std::string name_;
  bool cached_ = false;
};

template <typename Scalar>
void ensure_grad(Tensor<Scalar>& t) {
  if (!t.has_grad()) t.zero_grad();
}

/// Valid (unpadded) 1D convolution. weight has shape {out, in, k}; element
/// (o, c, j) lives at o + out * (c * k + j), i.e. weight.matrix(out, in * k).
template <typename Scalar>
class Conv1d : public Layer<Scalar> {
 public:
  Conv1d(std::string name, Index in, Index out, Index k, Index s)
      : Layer<Scalar>(std::move(name)), in_(in), out_(out), k_(k), s_(s), weight({out, in, k}), bias({out}) {
    if (in < 1 || out < 1) throw ShapeError(this->name_ + ": channel counts must be positive");
    if (k < 1 || s < 1) throw ShapeError(this->name_ + ": kernel and stride must be at least 1");
  }

  std::string kind() const override { return "conv1d"; }
  Index in_channels() const { return in_; }
  Index out_channels() const { return out_; }
  Index kernel() const { return k_; }
  Index stride() const { return s_; }
  Index fan_in() const { return in_ * k_; }

  FeatureShape plan(FeatureShape in) const override {
    if (in.channels != in_) {
      throw ShapeError(this->name_ + ": expected " + std::to_string(in_) + " input channels, got " +
                       std::to_string(in.channels));
    }
    const Index len = window_out(in.length, k_, s_);
    if (len < 1) {
      throw ShapeError(this->name_ + ": input length " + std::to_string(in.length) + " is shorter than kernel " +
                       std::to_string(k_));
    }
    return {out_, len};
  }

  void init(Init scheme, Rng& rng) override {
    init_weights(weight, fan_in(), scheme, rng);
    bias.data.setZero();
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    const FeatureShape o = plan({x.channels(), x.length()});
    const Index batch = x.batch();
    Tensor<Scalar> y = activation<Scalar>(batch, o.channels, o.length);
    const auto w = weight.matrix(out_, in_ * k_);
    cols_.resize(static_cast<std::size_t>(batch));
    for (Index b = 0; b < batch; ++b) {
      const auto xb = x.sample(b);
      Mat<Scalar>& c = cols_[static_cast<std::size_t>(b)];
      c.resize(in_ * k_, o.length);
      for (Index t = 0; t < o.length; ++t) {
        for (Index ch = 0; ch < in_; ++ch) {
          for (Index j = 0; j < k_; ++j) c(ch * k_ + j, t) = xb(ch, t * s_ + j);
        }
      }
      auto yb = y.sample(b);
      yb.noalias() = w * c;
      yb.colwise() += bias.data;
    }
    in_len_ = x.length();
    out_shape_ = y.shape;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, out_shape_);
    ensure_grad(weight);
    ensure_grad(bias);
    const Index batch = dy.batch();
    Tensor<Scalar> dx = activation<Scalar>(batch, in_, in_len_);
    const auto w = weight.matrix(out_, in_ * k_);
    auto dw = weight.grad_matrix(out_, in_ * k_);
    Mat<Scalar> dc;
    for (Index b = 0; b < batch; ++b) {
      const auto g = dy.sample(b);
      const Mat<Scalar>& c = cols_[static_cast<std::size_t>(b)];
      dw.noalias() += g * c.transpose();
      bias.grad += g.rowwise().sum();
      dc.noalias() = w.transpose() * g;
      auto dxb = dx.sample(b);
      for (Index t = 0; t < dc.cols(); ++t) {
        for (Index ch = 0; ch < in_; ++ch) {
          for (Index j = 0; j < k_; ++j) dxb(ch, t * s_ + j) += dc(ch * k_ + j, t);
        }
      }
    }
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    out.push_back({this->name_ + ".weight", &weight});
    out.push_back({this->name_ + ".bias", &bias});
  }

 private:
  Index in_, out_, k_, s_;
  Index in_len_ = 0;
  std::vector<Index> out_shape_;
  std::vector<Mat<Scalar>> cols_;

 public:
  Tensor<Scalar> weight;
  Tensor<Scalar> bias;
};

enum class PoolMode { Max, Avg };
enum class PoolScope { Local, Global };

/// Max or average pooling over windows (local) or the whole sequence
/// (global). Max ties route the gradient to the first maximal index.
template <typename Scalar>
class Pool1d : public Layer<Scalar> {
 public:
  Pool1d(std::string name, PoolMode mode, PoolScope scope, Index k = 2, Index s = 2)
      : Layer<Scalar>(std::move(name)), mode_(mode), scope_(scope), k_(k), s_(s) {
    if (scope == PoolScope::Local && (k < 1 || s < 1)) {
      throw ShapeError(this->name_ + ": window and stride must be at least 1");
    }
  }

  std::string kind() const override {
    return std::string(scope_ == PoolScope::Local ? "local_" : "global_") + (mode_ == PoolMode::Max ? "max" : "avg") +
           "_pool";
  }

  FeatureShape plan(FeatureShape in) const override {
    if (in.length < 1) throw ShapeError(this->name_ + ": empty input");
    if (scope_ == PoolScope::Global) return {in.channels, 1};
    const Index len = window_out(in.length, k_, s_);
    if (len < 1) {
      throw ShapeError(this->name_ + ": input length " + std::to_string(in.length) + " is shorter than window " +
                       std::to_string(k_));
    }
    return {in.channels, len};
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    const FeatureShape o = plan({x.channels(), x.length()});
    const Index kw = scope_ == PoolScope::Global ? x.length() : k_;
    const Index sw = scope_ == PoolScope::Global ? 1 : s_;
    const Index batch = x.batch();
    const Index ch = x.channels();
    Tensor<Scalar> y = activation<Scalar>(batch, ch, o.length);
    if (mode_ == PoolMode::Max) argmax_.assign(static_cast<std::size_t>(batch * ch * o.length), 0);
    for (Index b = 0; b < batch; ++b) {
      const auto xb = x.sample(b);
      auto yb = y.sample(b);
      for (Index t = 0; t < o.length; ++t) {
        const Index start = t * sw;
        if (mode_ == PoolMode::Avg) {
          yb.col(t) = xb.middleCols(start, kw).rowwise().sum() / static_cast<Scalar>(kw);
          continue;
        }
        for (Index c = 0; c < ch; ++c) {
          Index best = start;
          for (Index j = start + 1; j < start + kw; ++j) {
            if (xb(c, j) > xb(c, best)) best = j;
          }
          yb(c, t) = xb(c, best);
          argmax_[static_cast<std::size_t>((b * o.length + t) * ch + c)] = best;
        }
      }
    }
    in_shape_ = x.shape;
    out_shape_ = y.shape;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, out_shape_);
    Tensor<Scalar> dx(in_shape_);
    const Index batch = dy.batch();
    const Index ch = dy.channels();
    const Index len = dy.length();
    const Index kw = scope_ == PoolScope::Global ? in_shape_[2] : k_;
    const Index sw = scope_ == PoolScope::Global ? 1 : s_;
    for (Index b = 0; b < batch; ++b) {
      const auto g = dy.sample(b);
      auto dxb = dx.sample(b);
      for (Index t = 0; t < len; ++t) {
        if (mode_ == PoolMode::Avg) {
          dxb.middleCols(t * sw, kw).colwise() += g.col(t) / static_cast<Scalar>(kw);
          continue;
        }
        for (Index c = 0; c < ch; ++c) {
          dxb(c, argmax_[static_cast<std::size_t>((b * len + t) * ch + c)]) += g(c, t);
        }
      }
    }
    return dx;
  }

 private:
  PoolMode mode_;
  PoolScope scope_;
  Index k_, s_;
  std::vector<Index> argmax_;
  std::vector<Index> in_shape_, out_shape_;
};

/// max(0, x); the subgradient at 0 is 0.
template <typename Scalar>
class ReLU : public Layer<Scalar> {
 public:
  explicit ReLU(std::string name) : Layer<Scalar>(std::move(name)) {}
  std::string kind() const override { return "relu"; }
  FeatureShape plan(FeatureShape in) const override { return in; }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    Tensor<Scalar> y;
    y.shape = x.shape;
    y.data = x.data.cwiseMax(Scalar(0));
    mask_ = (x.data.array() > Scalar(0)).template cast<Scalar>();
    shape_ = x.shape;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, shape_);
    Tensor<Scalar> dx;
    dx.shape = dy.shape;
    dx.data = dy.data.cwiseProduct(mask_);
    return dx;
  }

 private:
  Vec<Scalar> mask_;
  std::vector<Index> shape_;
};

/// Per-channel normalization over batch and length. Training mode uses batch
/// statistics (biased variance) and updates running statistics; eval mode
/// uses the running ones.
template <typename Scalar>
class BatchNorm1d : public Layer<Scalar> {
 public:
  BatchNorm1d(std::string name, Index channels, double eps = 1e-5, double momentum = 0.1)
      : Layer<Scalar>(std::move(name)),
        channels_(channels),
        eps_(eps),
        momentum_(momentum),
        gamma({channels}),
        beta({channels}),
        running_mean({channels}),
        running_var({channels}) {
    gamma.data.setOnes();
    running_var.data.setOnes();
  }

  std::string kind() const override { return "batchnorm1d"; }
  FeatureShape plan(FeatureShape in) const override {
    if (in.channels != channels_) {
      throw ShapeError(this->name_ + ": expected " + std::to_string(channels_) + " channels, got " +
                       std::to_string(in.channels));
    }
    return in;
  }
  void init(Init, Rng&) override {
    gamma.data.setOnes();
    beta.data.setZero();
    running_mean.data.setZero();
    running_var.data.setOnes();
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool training) override {
    this->check_rank(x);
    plan({x.channels(), x.length()});
    const Index batch = x.batch();
    const Index len = x.length();
    Vec<Scalar> mean, var;
    if (training) {
      if (batch < 2) throw ShapeError(this->name_ + ": training mode needs a batch of at least 2");
      const Scalar n = static_cast<Scalar>(batch * len);
      mean = Vec<Scalar>::Zero(channels_);
      for (Index b = 0; b < batch; ++b) mean += x.sample(b).rowwise().sum();
      mean /= n;
      var = Vec<Scalar>::Zero(channels_);
      for (Index b = 0; b < batch; ++b) var += (x.sample(b).colwise() - mean).array().square().matrix().rowwise().sum();
      var /= n;
      const Scalar m = static_cast<Scalar>(momentum_);
      running_mean.data = (Scalar(1) - m) * running_mean.data + m * mean;
      running_var.data = (Scalar(1) - m) * running_var.data + m * var * (n / (n - Scalar(1)));
    } else {
      mean = running_mean.data;
      var = running_var.data;
    }
    inv_std_ = (var.array() + static_cast<Scalar>(eps_)).rsqrt().matrix();
    xhat_.shape = x.shape;
    xhat_.data.resize(x.numel());
    Tensor<Scalar> y(x.shape);
    for (Index b = 0; b < batch; ++b) {
      auto h = xhat_.sample(b);
      h = ((x.sample(b).colwise() - mean).array().colwise() * inv_std_.array()).matrix();
      y.sample(b) = ((h.array().colwise() * gamma.data.array()).colwise() + beta.data.array()).matrix();
    }
    training_ = training;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, xhat_.shape);
    ensure_grad(gamma);
    ensure_grad(beta);
    const Index batch = dy.batch();
    Tensor<Scalar> dx(dy.shape);
    Vec<Scalar> sum_dy = Vec<Scalar>::Zero(channels_);
    Vec<Scalar> sum_dy_xhat = Vec<Scalar>::Zero(channels_);
    for (Index b = 0; b < batch; ++b) {
      sum_dy += dy.sample(b).rowwise().sum();
      sum_dy_xhat += dy.sample(b).cwiseProduct(xhat_.sample(b)).rowwise().sum();
    }
    gamma.grad += sum_dy_xhat;
    beta.grad += sum_dy;
    const Vec<Scalar> scale = gamma.data.cwiseProduct(inv_std_);
    if (!training_) {
      for (Index b = 0; b < batch; ++b) dx.sample(b) = dy.sample(b).array().colwise() * scale.array();
      return dx;
    }
    const Scalar n = static_cast<Scalar>(batch * dy.length());
    const Vec<Scalar> mean_dy = sum_dy / n;
    const Vec<Scalar> mean_dy_xhat = sum_dy_xhat / n;
    for (Index b = 0; b < batch; ++b) {
      const auto h = xhat_.sample(b);
      auto d = dx.sample(b);
      d = ((dy.sample(b).colwise() - mean_dy) - (h.array().colwise() * mean_dy_xhat.array()).matrix());
      d = (d.array().colwise() * scale.array()).matrix();
    }
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    out.push_back({this->name_ + ".gamma", &gamma});
    out.push_back({this->name_ + ".beta", &beta});
  }
  void buffers(std::vector<ParamRef<Scalar>>& out) override {
    out.push_back({this->name_ + ".running_mean", &running_mean});
    out.push_back({this->name_ + ".running_var", &running_var});
  }

 private:
  Index channels_;
  double eps_, momentum_;
  Vec<Scalar> inv_std_;
  Tensor<Scalar> xhat_;
  bool training_ = true;

 public:
  Tensor<Scalar> gamma, beta, running_mean, running_var;
};

/// {B, C, L} -> {B, C*L, 1}; the buffer is unchanged.
template <typename Scalar>
class Flatten : public Layer<Scalar> {
 public:
  explicit Flatten(std::string name) : Layer<Scalar>(std::move(name)) {}
  std::string kind() const override { return "flatten"; }
  FeatureShape plan(FeatureShape in) const override { return {in.channels * in.length, 1}; }
  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    in_shape_ = x.shape;
    Tensor<Scalar> y;
    y.shape = {x.batch(), x.channels() * x.length(), 1};
    y.data = x.data;
    this->cached_ = true;
    return y;
  }
  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    Tensor<Scalar> dx;
    dx.shape = in_shape_;
    dx.data = dy.data;
    return dx;
  }

 private:
  std::vector<Index> in_shape_;
};

/// Fully connected layer on {B, in, 1}. Always initialized with the fan-in
/// uniform scheme; He initialization applies to convolution layers only.
template <typename Scalar>
class Dense : public Layer<Scalar> {
 public:
  Dense(std::string name, Index in, Index out)
      : Layer<Scalar>(std::move(name)), in_(in), out_(out), weight({out, in}), bias({out}) {}

  std::string kind() const override { return "dense"; }
  Index in_features() const { return in_; }
  Index out_features() const { return out_; }

  FeatureShape plan(FeatureShape in) const override {
    if (in.length != 1 || in.channels != in_) {
      throw ShapeError(this->name_ + ": expected " + std::to_string(in_) + " features with length 1, got " +
                       std::to_string(in.channels) + "x" + std::to_string(in.length));
    }
    return {out_, 1};
  }
  void init(Init, Rng& rng) override {
    uniform_fan_in(weight, in_, rng);
    bias.data.setZero();
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    this->check_rank(x);
    plan({x.channels(), x.length()});
    const Index batch = x.batch();
    Tensor<Scalar> y = activation<Scalar>(batch, out_, 1);
    y.matrix(out_, batch).noalias() = weight.matrix(out_, in_) * x.matrix(in_, batch);
    y.matrix(out_, batch).colwise() += bias.data;
    x_ = x;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, {x_.batch(), out_, 1});
    ensure_grad(weight);
    ensure_grad(bias);
    const Index batch = dy.batch();
    const auto g = dy.matrix(out_, batch);
    weight.grad_matrix(out_, in_).noalias() += g * x_.matrix(in_, batch).transpose();
    bias.grad += g.rowwise().sum();
    Tensor<Scalar> dx(x_.shape);
    dx.matrix(in_, batch).noalias() = weight.matrix(out_, in_).transpose() * g;
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    out.push_back({this->name_ + ".weight", &weight});
    out.push_back({this->name_ + ".bias", &bias});
  }

 private:
  Index in_, out_;
  Tensor<Scalar> x_;

 public:
  Tensor<Scalar> weight;
  Tensor<Scalar> bias;
};

/// Scales every sample to unit Euclidean norm.
template <typename Scalar>
class L2Normalize : public Layer<Scalar> {
 public:
  explicit L2Normalize(std::string name, double eps = 1e-12) : Layer<Scalar>(std::move(name)), eps_(eps) {}
  std::string kind() const override { return "l2_normalize"; }
  FeatureShape plan(FeatureShape in) const override { return in; }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool) override {
    const Index batch = x.batch();
    const Index width = x.numel() / batch;
    y_.shape = x.shape;
    y_.data.resize(x.numel());
    norms_.resize(batch);
    for (Index b = 0; b < batch; ++b) {
      const auto xb = x.data.segment(b * width, width);
      norms_[b] = std::max(xb.norm(), static_cast<Scalar>(eps_));
      y_.data.segment(b * width, width) = xb / norms_[b];
    }
    this->cached_ = true;
    return y_;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, y_.shape);
    const Index batch = dy.batch();
    const Index width = dy.numel() / batch;
    Tensor<Scalar> dx(dy.shape);
    for (Index b = 0; b < batch; ++b) {
      const auto y = y_.data.segment(b * width, width);
      const auto g = dy.data.segment(b * width, width);
      dx.data.segment(b * width, width) = (g - y * y.dot(g)) / norms_[b];
    }
    return dx;
  }

 private:
  double eps_;
  Tensor<Scalar> y_;
  Vec<Scalar> norms_;
};

/// Ordered container; itself a layer.
template <typename Scalar>
class Sequential : public Layer<Scalar> {
 public:
  explicit Sequential(std::string name = "seq") : Layer<Scalar>(std::move(name)) {}
  std::string kind() const override { return "sequential"; }

  template <typename L, typename... Args>
  L& add(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }
  void push(std::unique_ptr<Layer<Scalar>> layer) { layers_.push_back(std::move(layer)); }

  std::size_t size() const { return layers_.size(); }
  Layer<Scalar>& at(std::size_t i) { return *layers_.at(i); }
  const Layer<Scalar>& at(std::size_t i) const { return *layers_.at(i); }

  FeatureShape plan(FeatureShape in) const override {
    for (const auto& l : layers_) in = l->plan(in);
    return in;
  }
  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool training) override {
    Tensor<Scalar> h = x;
    for (auto& l : layers_) h = l->forward(h, training);
    this->cached_ = true;
    return h;
  }
  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    Tensor<Scalar> g = dy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
  }
  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    for (auto& l : layers_) l->parameters(out);
  }
  void buffers(std::vector<ParamRef<Scalar>>& out) override {
    for (auto& l : layers_) l->buffers(out);
  }
  void init(Init scheme, Rng& rng) override {
    for (auto& l : layers_) l->init(scheme, rng);
  }

 private:
  std::vector<std::unique_ptr<Layer<Scalar>>> layers_;
};

/// conv_a -> [BN] -> ReLU -> conv_b -> [BN], plus a 1x1 convolution of the
/// input cropped to the same centre window, added. Stride 1 throughout.
template <typename Scalar>
class ResidualBlock : public Layer<Scalar> {
 public:
  ResidualBlock(std::string name, Index in, Index out, Index k, bool use_bn)
      : Layer<Scalar>(name), k_(k), body_(name + ".body"), shortcut_(name + ".shortcut", in, out, 1, 1) {
    body_.template add<Conv1d<Scalar>>(name + ".conv_a", in, out, k, 1);
    if (use_bn) body_.template add<BatchNorm1d<Scalar>>(name + ".bn_a", out);
    body_.template add<ReLU<Scalar>>(name + ".relu_a");
    body_.template add<Conv1d<Scalar>>(name + ".conv_b", out, out, k, 1);
    if (use_bn) body_.template add<BatchNorm1d<Scalar>>(name + ".bn_b", out);
  }

  std::string kind() const override { return "residual"; }
  Index crop() const { return k_ - 1; }
  Sequential<Scalar>& body() { return body_; }
  Conv1d<Scalar>& shortcut() { return shortcut_; }

  FeatureShape plan(FeatureShape in) const override {
    try {
      return body_.plan(in);
    } catch (const ShapeError& e) {
      throw ShapeError(this->name_ + ": " + e.what());
    }
  }

  Tensor<Scalar> forward(const Tensor<Scalar>& x, bool training) override {
    this->check_rank(x);
    Tensor<Scalar> y = body_.forward(x, training);
    const Tensor<Scalar> sc = shortcut_.forward(x, training);
    const Index len = y.length();
    for (Index b = 0; b < y.batch(); ++b) y.sample(b) += sc.sample(b).middleCols(crop(), len);
    sc_shape_ = sc.shape;
    out_shape_ = y.shape;
    this->cached_ = true;
    return y;
  }

  Tensor<Scalar> backward(const Tensor<Scalar>& dy) override {
    this->require_forward();
    this->check_same(dy, out_shape_);
    Tensor<Scalar> dsc(sc_shape_);
    for (Index b = 0; b < dy.batch(); ++b) dsc.sample(b).middleCols(crop(), dy.length()) = dy.sample(b);
    Tensor<Scalar> dx = body_.backward(dy);
    dx.data += shortcut_.backward(dsc).data;
    return dx;
  }

  void parameters(std::vector<ParamRef<Scalar>>& out) override {
    body_.parameters(out);
    shortcut_.parameters(out);
  }
  void buffers(std::vector<ParamRef<Scalar>>& out) override { body_.buffers(out); }
  void init(Init scheme, Rng& rng) override {
    body_.init(scheme, rng);
    shortcut_.init(scheme, rng);
  }

 private:
  Index k_;
  Sequential<Scalar> body_;
  Conv1d<Scalar> shortcut_;
  std::vector<Index> sc_shape_, out_shape_;
};

}  // namespace clcp::ndnn
