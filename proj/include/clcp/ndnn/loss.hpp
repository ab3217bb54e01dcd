// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "clcp/ndnn/tensor.hpp"

namespace clcp::ndnn {

template <typename Scalar>
struct LossResult {
  Scalar loss = 0;
  Mat<Scalar> dlogits;  // dloss / dlogits
};

/// Symmetric cross entropy over an N x N logit matrix with the diagonal as
/// targets: mean of the row-wise and column-wise losses.
template <typename Scalar>
LossResult<Scalar> clip_loss(const Mat<Scalar>& logits) {
  if (logits.rows() != logits.cols() || logits.rows() == 0) {
    throw ShapeError("clip_loss: expected a non-empty square matrix, got " + std::to_string(logits.rows()) + "x" +
                     std::to_string(logits.cols()));
  }
  const Index n = logits.rows();
  LossResult<Scalar> r;
  r.dlogits = Mat<Scalar>::Zero(n, n);
  Scalar row_loss = 0;
  Scalar col_loss = 0;
  const Scalar w = Scalar(0.5) / static_cast<Scalar>(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar m = logits.row(i).maxCoeff();
    const Eigen::Array<Scalar, 1, Eigen::Dynamic> e = (logits.row(i).array() - m).exp();
    const Scalar z = e.sum();
    row_loss += std::log(z) + m - logits(i, i);
    r.dlogits.row(i) += w * (e / z).matrix();
    r.dlogits(i, i) -= w;
  }
  for (Index j = 0; j < n; ++j) {
    const Scalar m = logits.col(j).maxCoeff();
    const Eigen::Array<Scalar, Eigen::Dynamic, 1> e = (logits.col(j).array() - m).exp();
    const Scalar z = e.sum();
    col_loss += std::log(z) + m - logits(j, j);
    r.dlogits.col(j) += w * (e / z).matrix();
    r.dlogits(j, j) -= w;
  }
  r.loss = (row_loss + col_loss) * w;
  return r;
}

inline constexpr double kMaxLogitScale = 100.0;

/// Logits s * C^T T for column-stacked embeddings (d x N each), with
/// s = min(exp(log_scale), 100), and the backward pass through them.
template <typename Scalar>
struct SimilarityHead {
  Scalar scale = 0;
  bool clamped = false;

  Mat<Scalar> forward(const Eigen::Ref<const Mat<Scalar>>& codes, const Eigen::Ref<const Mat<Scalar>>& texts,
                      Scalar log_scale) {
    if (codes.rows() != texts.rows() || codes.cols() != texts.cols()) {
      throw ShapeError("similarity: code and text embedding batches differ in shape");
    }
    const Scalar raw = std::exp(log_scale);
    clamped = raw > static_cast<Scalar>(kMaxLogitScale);
    scale = clamped ? static_cast<Scalar>(kMaxLogitScale) : raw;
    cos_ = codes.transpose() * texts;
    codes_ = codes;
    texts_ = texts;
    return scale * cos_;
  }

  /// Returns d/dlog_scale; fills the embedding gradients.
  Scalar backward(const Mat<Scalar>& dlogits, Mat<Scalar>& dcodes, Mat<Scalar>& dtexts) const {
    dcodes.noalias() = scale * (texts_ * dlogits.transpose());
    dtexts.noalias() = scale * (codes_ * dlogits);
    return clamped ? Scalar(0) : scale * dlogits.cwiseProduct(cos_).sum();
  }

  const Mat<Scalar>& cosine() const { return cos_; }

 private:
  Mat<Scalar> cos_, codes_, texts_;
};

}  // namespace clcp::ndnn
