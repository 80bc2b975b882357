#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillclf/error.hpp"
#include "skillclf/nn/activation.hpp"
#include "skillclf/nn/architecture.hpp"
#include "skillclf/random.hpp"

namespace skillclf::nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using FlatView = Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>>;

/// One dense layer: weights are (width x fan_in), biases (width).
template <typename Scalar>
struct DenseLayer {
  Matrix<Scalar> weights;
  Vector<Scalar> biases;

  bool operator==(const DenseLayer& other) const {
    return weights.rows() == other.weights.rows() && weights.cols() == other.weights.cols() &&
           biases.size() == other.biases.size() && weights == other.weights && biases == other.biases;
  }
};

template <typename Scalar>
struct Mlp {
  ArchitectureSpec spec;
  std::vector<DenseLayer<Scalar>> layers;

  bool operator==(const Mlp&) const = default;

  int input_dim() const { return spec.input_dim; }
  int output_dim() const { return spec.output_dim(); }

  /// Flat views over [W0, b0, W1, b1, ...] for the optimizers.
  std::vector<FlatView<Scalar>> parameter_views() {
    std::vector<FlatView<Scalar>> views;
    for (auto& layer : layers) {
      views.emplace_back(layer.weights.data(), layer.weights.size());
      views.emplace_back(layer.biases.data(), layer.biases.size());
    }
    return views;
  }

  bool all_finite() const {
    for (const auto& layer : layers) {
      if (!layer.weights.allFinite() || !layer.biases.allFinite()) return false;
    }
    return true;
  }
};

/// Gradients share the parameter layout.
template <typename Scalar>
using Gradients = std::vector<DenseLayer<Scalar>>;

template <typename Scalar>
std::vector<FlatView<Scalar>> gradient_views(Gradients<Scalar>& grads) {
  std::vector<FlatView<Scalar>> views;
  for (auto& layer : grads) {
    views.emplace_back(layer.weights.data(), layer.weights.size());
    views.emplace_back(layer.biases.data(), layer.biases.size());
  }
  return views;
}

/// Zero biases; weights ~ N(0, s^2) with s = sqrt(2 / fan_in) for elu/lrelu
/// layers (He) and s = sqrt(2 / (fan_in + fan_out)) for sigmoid/tanh layers
/// (Glorot). Layer l draws from Rng(derive_seed(seed, l)) in row-major order.
template <typename Scalar>
Mlp<Scalar> init_network(const ArchitectureSpec& spec, std::uint64_t seed) {
  if (spec.layers.empty() || spec.input_dim <= 0) {
    throw Error(ErrorCode::InvalidArgument, "architecture needs an input and at least one layer");
  }
  Mlp<Scalar> net{spec, {}};
  int fan_in = spec.input_dim;
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const auto& layer_spec = spec.layers[l];
    if (layer_spec.width <= 0) {
      throw Error(ErrorCode::NonPositiveWidth, "layer " + std::to_string(l + 1) + " has no concrete width");
    }
    const int fan_out = layer_spec.width;
    const bool rectifier = layer_spec.activation == Activation::Elu || layer_spec.activation == Activation::LRelu;
    const double stddev = rectifier ? std::sqrt(2.0 / fan_in) : std::sqrt(2.0 / (fan_in + fan_out));
    DenseLayer<Scalar> layer{Matrix<Scalar>(fan_out, fan_in), Vector<Scalar>::Zero(fan_out)};
    Rng rng(derive_seed(seed, l));
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) layer.weights(r, c) = static_cast<Scalar>(stddev * rng.normal());
    }
    net.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return net;
}

/// Per-layer pre-activations and activations of one forward pass; columns
/// are instances.
template <typename Scalar>
struct ForwardCache {
  Matrix<Scalar> input;
  std::vector<Matrix<Scalar>> pre;
  std::vector<Matrix<Scalar>> post;

  const Matrix<Scalar>& output() const { return post.back(); }
};

/// Batched forward pass; `inputs` holds one instance per column.
template <typename Scalar, typename Derived>
void forward_batch(const Mlp<Scalar>& net, const Eigen::MatrixBase<Derived>& inputs, ForwardCache<Scalar>& cache) {
  if (inputs.rows() != net.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(inputs.rows()) +
                                                  " features, network expects " + std::to_string(net.input_dim()));
  }
  cache.input = inputs;
  cache.pre.resize(net.layers.size());
  cache.post.resize(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const Matrix<Scalar>& prev = l == 0 ? cache.input : cache.post[l - 1];
    cache.pre[l].noalias() = layer.weights * prev;
    cache.pre[l].colwise() += layer.biases;
    cache.post[l] = activate(net.spec.layers[l].activation, cache.pre[l].array()).matrix();
  }
}

template <typename Scalar>
std::pair<Vector<Scalar>, ForwardCache<Scalar>> forward(const Mlp<Scalar>& net, std::span<const Scalar> x) {
  if (static_cast<int>(x.size()) != net.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " features, network expects " + std::to_string(net.input_dim()));
  }
  ForwardCache<Scalar> cache;
  const Eigen::Map<const Matrix<Scalar>> column(x.data(), static_cast<Eigen::Index>(x.size()), 1);
  forward_batch(net, column, cache);
  return {cache.output().col(0), std::move(cache)};
}

template <typename Scalar>
Vector<Scalar> predict(const Mlp<Scalar>& net, std::span<const Scalar> x) {
  return forward(net, x).first;
}

inline constexpr double kBceEpsilon = 1e-7;

/// Mean binary cross-entropy over all entries, with predictions clipped to
/// [eps, 1 - eps].
template <typename DerivedP, typename DerivedY>
double bce_loss(const Eigen::MatrixBase<DerivedP>& predictions, const Eigen::MatrixBase<DerivedY>& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols() || predictions.size() == 0) {
    throw Error(ErrorCode::LengthMismatch, "predictions and targets must have equal, non-zero size");
  }
  double total = 0.0;
  for (Eigen::Index c = 0; c < predictions.cols(); ++c) {
    for (Eigen::Index r = 0; r < predictions.rows(); ++r) {
      const double p = std::clamp(static_cast<double>(predictions(r, c)), kBceEpsilon, 1.0 - kBceEpsilon);
      const double y = static_cast<double>(targets(r, c));
      total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
  }
  return total / static_cast<double>(predictions.size());
}

inline double bce_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw Error(ErrorCode::LengthMismatch, "predictions and targets must have equal, non-zero length");
  }
  const Eigen::Map<const Eigen::VectorXd> p(predictions.data(), static_cast<Eigen::Index>(predictions.size()));
  const Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  return bce_loss(p, y);
}

template <typename Scalar>
double l2_penalty(const Mlp<Scalar>& net, double lambda) {
  if (lambda == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& layer : net.layers) sum += static_cast<double>(layer.weights.squaredNorm());
  return 0.5 * lambda * sum;
}

/// Objective: bce_loss(outputs, targets) + (lambda / 2) * sum ||W||_F^2.
template <typename Scalar, typename Derived>
double objective(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                 const Eigen::MatrixBase<Derived>& targets, double lambda) {
  return bce_loss(cache.output(), targets) + l2_penalty(net, lambda);
}

template <typename Scalar>
Gradients<Scalar> zero_gradients(const Mlp<Scalar>& net) {
  Gradients<Scalar> grads;
  for (const auto& layer : net.layers) {
    grads.push_back({Matrix<Scalar>::Zero(layer.weights.rows(), layer.weights.cols()),
                     Vector<Scalar>::Zero(layer.biases.size())});
  }
  return grads;
}

/// Exact gradients of `objective` with respect to every weight and bias.
/// The sigmoid/BCE pair reduces to (p - y) / count at the output; entries
/// where the clip is active contribute nothing. Writes into `grads`, which
/// must already have the parameter layout.
template <typename Scalar, typename Derived>
void backward_into(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                   const Eigen::MatrixBase<Derived>& targets, double lambda, Gradients<Scalar>& grads) {
  const auto& out = cache.output();
  if (cache.post.size() != net.layers.size() || targets.rows() != out.rows() || targets.cols() != out.cols() ||
      grads.size() != net.layers.size()) {
    throw Error(ErrorCode::ShapeMismatch, "cache, targets and network disagree in shape");
  }
  const auto lo = static_cast<Scalar>(kBceEpsilon);
  const auto hi = static_cast<Scalar>(1.0 - kBceEpsilon);
  const auto scale = static_cast<Scalar>(1.0 / static_cast<double>(out.size()));
  Matrix<Scalar> delta = ((out.array() >= lo && out.array() <= hi)
                              .select((out - targets.template cast<Scalar>()).array() * scale, Scalar(0)))
                             .matrix();
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const Matrix<Scalar>& prev = l == 0 ? cache.input : cache.post[l - 1];
    auto& g = grads[l];
    g.weights.noalias() = delta * prev.transpose();
    if (lambda != 0.0) g.weights += static_cast<Scalar>(lambda) * net.layers[l].weights;
    g.biases.noalias() = delta.rowwise().sum();
    if (l > 0) {
      Matrix<Scalar> back = net.layers[l].weights.transpose() * delta;
      delta = (back.array() *
               activation_derivative(net.spec.layers[l - 1].activation, cache.pre[l - 1].array(),
                                     cache.post[l - 1].array()))
                  .matrix();
    }
  }
}

template <typename Scalar, typename Derived>
Gradients<Scalar> backward(const Mlp<Scalar>& net, const ForwardCache<Scalar>& cache,
                           const Eigen::MatrixBase<Derived>& targets, double lambda) {
  auto grads = zero_gradients(net);
  backward_into(net, cache, targets, lambda, grads);
  return grads;
}

}  // namespace skillclf::nn
