// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <string>

#include "clcp/ndnn/layers.hpp"

namespace clcp::ndnn {

/// ||a - n|| / max(||a||, ||n||, floor). The floor keeps gradients that are
/// identically zero (e.g. a bias feeding batch norm) from dividing noise by noise.
inline double relative_error(const Vec<double>& analytic, const Vec<double>& numeric, double floor = 1e-5) {
  const double denom = std::max({analytic.norm(), numeric.norm(), floor});
  return (analytic - numeric).norm() / denom;
}

/// Central differences of a scalar function over every entry of `v`.
inline Vec<double> numeric_gradient(Vec<double>& v, const std::function<double()>& f, double h = 1e-5) {
  Vec<double> g(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double old = v[i];
    v[i] = old + h;
    const double up = f();
    v[i] = old - h;
    const double down = f();
    v[i] = old;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

struct GradCheckResult {
  double max_rel_error = 0;
  std::string worst;  // "input" or a parameter name
};

/// Checks input and parameter gradients of `layer` at `x` against central
/// differences of the scalar probe sum(g * layer(x)) for a random g.
inline GradCheckResult check_layer_gradients(Layer<double>& layer, const Tensor<double>& x, Rng& rng,
                                             bool training = true) {
  const Tensor<double> y = layer.forward(x, training);
  Tensor<double> g(y.shape);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (Index i = 0; i < g.numel(); ++i) g.data[i] = dist(rng);

  std::vector<ParamRef<double>> params;
  layer.parameters(params);
  for (auto& p : params) p.tensor->zero_grad();
  const Tensor<double> dx = layer.backward(g);

  Tensor<double> probe = x;
  auto loss = [&]() { return g.data.dot(layer.forward(probe, training).data); };

  GradCheckResult r;
  auto record = [&](double err, const std::string& what) {
    if (err > r.max_rel_error) {
      r.max_rel_error = err;
      r.worst = what;
    }
  };
  record(relative_error(dx.data, numeric_gradient(probe.data, loss)), "input");
  for (auto& p : params) {
    const Vec<double> analytic = p.tensor->grad;
    record(relative_error(analytic, numeric_gradient(p.tensor->data, loss)), p.name);
  }
  return r;
}

inline Tensor<double> random_tensor(std::vector<Index> shape, Rng& rng, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  std::normal_distribution<double> dist(0.0, scale);
  for (Index i = 0; i < t.numel(); ++i) t.data[i] = dist(rng);
  return t;
}

}  // namespace clcp::ndnn
