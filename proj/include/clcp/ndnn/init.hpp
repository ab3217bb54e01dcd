// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include "clcp/ndnn/tensor.hpp"

namespace clcp::ndnn {

using Rng = std::mt19937_64;

enum class Init {
  He,           // N(0, 2/n)
  FanInUniform  // U(-1/sqrt(n), 1/sqrt(n)), the usual framework default
};

/// Fills `t` with Gaussian(0, 2/n) samples.
template <typename Scalar>
void he_normal(Tensor<Scalar>& t, Index fan_in, Rng& rng) {
  if (fan_in < 1) throw std::invalid_argument("fan-in must be at least 1");
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
  for (Index i = 0; i < t.numel(); ++i) t.data[i] = static_cast<Scalar>(dist(rng));
}

template <typename Scalar>
void uniform_fan_in(Tensor<Scalar>& t, Index fan_in, Rng& rng) {
  if (fan_in < 1) throw std::invalid_argument("fan-in must be at least 1");
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index i = 0; i < t.numel(); ++i) t.data[i] = static_cast<Scalar>(dist(rng));
}

template <typename Scalar>
void normal_fill(Tensor<Scalar>& t, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Index i = 0; i < t.numel(); ++i) t.data[i] = static_cast<Scalar>(dist(rng));
}

template <typename Scalar>
void init_weights(Tensor<Scalar>& t, Index fan_in, Init scheme, Rng& rng) {
  if (scheme == Init::He) {
    he_normal(t, fan_in, rng);
  } else {
    uniform_fan_in(t, fan_in, rng);
  }
}

template <typename Scalar>
Tensor<Scalar> he_init(std::vector<Index> shape, Index fan_in, Rng& rng) {
  Tensor<Scalar> t(std::move(shape));
  he_normal(t, fan_in, rng);
  return t;
}

}  // namespace clcp::ndnn
