// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace clcp::ndnn {

using Index = Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense n-d array with an optional gradient buffer of the same size.
///
/// Activations use shape {B, C, L}. Each sample is a contiguous C x L
/// column-major block, so sample(b) is a plain Eigen map.
template <typename Scalar>
struct Tensor {
  std::vector<Index> shape;
  Vec<Scalar> data;
  Vec<Scalar> grad;

  Tensor() = default;
  explicit Tensor(std::vector<Index> dims) : shape(std::move(dims)) {
    data = Vec<Scalar>::Zero(count(shape));
  }

  static Index count(const std::vector<Index>& dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<Index>());
  }

  Index numel() const { return data.size(); }
  Index dim(std::size_t i) const { return shape.at(i); }
  Index batch() const { return shape.at(0); }
  Index channels() const { return shape.at(1); }
  Index length() const { return shape.at(2); }

  bool has_grad() const { return grad.size() == data.size() && data.size() > 0; }
  void zero_grad() { grad = Vec<Scalar>::Zero(data.size()); }

  Eigen::Map<Mat<Scalar>> sample(Index b) {
    const Index cl = channels() * length();
    return {data.data() + b * cl, channels(), length()};
  }
  Eigen::Map<const Mat<Scalar>> sample(Index b) const {
    const Index cl = channels() * length();
    return {data.data() + b * cl, channels(), length()};
  }
  /// The whole buffer viewed as rows x cols.
  Eigen::Map<Mat<Scalar>> matrix(Index rows, Index cols) { return {data.data(), rows, cols}; }
  Eigen::Map<const Mat<Scalar>> matrix(Index rows, Index cols) const { return {data.data(), rows, cols}; }
  Eigen::Map<Mat<Scalar>> grad_matrix(Index rows, Index cols) { return {grad.data(), rows, cols}; }

  template <typename Other>
  Tensor<Other> cast() const {
    Tensor<Other> out;
    out.shape = shape;
    out.data = data.template cast<Other>();
    if (has_grad()) out.grad = grad.template cast<Other>();
    return out;
  }
};

template <typename Scalar>
Tensor<Scalar> activation(Index batch, Index channels, Index length) {
  return Tensor<Scalar>({batch, channels, length});
}

inline std::string shape_string(const std::vector<Index>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + "]";
}

/// Per-sample feature-map geometry, used by shape plans.
struct FeatureShape {
  Index channels = 1;
  Index length = 1;
  friend bool operator==(const FeatureShape&, const FeatureShape&) = default;
};

/// floor((L - k) / s) + 1, or 0 when the window does not fit.
inline Index window_out(Index length, Index k, Index s) { return length < k ? 0 : (length - k) / s + 1; }

/// A named reference to a trainable parameter or a persistent buffer.
template <typename Scalar>
struct ParamRef {
  std::string name;
  Tensor<Scalar>* tensor = nullptr;
};

}  // namespace clcp::ndnn
