// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "clcp/ndnn/tensor.hpp"

namespace clcp::ndnn {

class NonFiniteGradient : public std::runtime_error {
 public:
  explicit NonFiniteGradient(const std::string& param)
      : std::runtime_error("non-finite gradient in " + param), param_(param) {}
  const std::string& param() const { return param_; }

 private:
  std::string param_;
};

template <typename Scalar>
void check_finite(const std::vector<ParamRef<Scalar>>& params) {
  for (const auto& p : params) {
    if (p.tensor->has_grad() && !p.tensor->grad.allFinite()) throw NonFiniteGradient(p.name);
  }
}

template <typename Scalar>
void zero_grads(const std::vector<ParamRef<Scalar>>& params) {
  for (const auto& p : params) p.tensor->zero_grad();
}

/// Plain gradient descent. The whole step is rejected if any gradient is
/// not finite.
template <typename Scalar>
class Sgd {
 public:
  explicit Sgd(double lr) : lr_(lr) {}
  void step(const std::vector<ParamRef<Scalar>>& params) {
    check_finite(params);
    for (const auto& p : params) {
      if (p.tensor->has_grad()) p.tensor->data -= static_cast<Scalar>(lr_) * p.tensor->grad;
    }
  }

 private:
  double lr_;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moments are indexed by parameter position, so
/// the parameter list must keep its order between steps.
template <typename Scalar>
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(const std::vector<ParamRef<Scalar>>& params) {
    check_finite(params);
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.push_back(Tensor<Scalar>(p.tensor->shape));
        v_.push_back(Tensor<Scalar>(p.tensor->shape));
      }
    }
    if (m_.size() != params.size()) throw std::logic_error("adam: parameter list changed between steps");
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    const Scalar b1 = static_cast<Scalar>(cfg_.beta1);
    const Scalar b2 = static_cast<Scalar>(cfg_.beta2);
    const Scalar step = static_cast<Scalar>(cfg_.lr / c1);
    const Scalar root_c2 = static_cast<Scalar>(std::sqrt(c2));
    const Scalar eps = static_cast<Scalar>(cfg_.eps);
    for (std::size_t i = 0; i < params.size(); ++i) {
      Tensor<Scalar>& p = *params[i].tensor;
      if (!p.has_grad()) continue;
      auto& m = m_[i].data;
      auto& v = v_[i].data;
      m = b1 * m + (Scalar(1) - b1) * p.grad;
      v = b2 * v + (Scalar(1) - b2) * p.grad.cwiseAbs2();
      p.data.array() -= step * m.array() / (v.array().sqrt() / root_c2 + eps);
    }
  }

  long steps() const { return t_; }
  /// Moment buffers, for checkpointing.
  void state(std::vector<ParamRef<Scalar>>& out, const std::vector<ParamRef<Scalar>>& params) {
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.push_back(Tensor<Scalar>(p.tensor->shape));
        v_.push_back(Tensor<Scalar>(p.tensor->shape));
      }
    }
    for (std::size_t i = 0; i < m_.size(); ++i) {
      out.push_back({"adam.m." + params[i].name, &m_[i]});
      out.push_back({"adam.v." + params[i].name, &v_[i]});
    }
  }
  void set_steps(long t) { t_ = t; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Tensor<Scalar>> m_, v_;
};

}  // namespace clcp::ndnn
