#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "skillclf/error.hpp"
#include "skillclf/nn/mlp.hpp"
#include "skillclf/nn/optimizer.hpp"
#include "skillclf/random.hpp"

namespace skillclf::nn {

struct Hyperparams {
  int epochs = 1000;
  double learning_rate = 0.001;
  double l2 = 0.0;
  OptimizerKind optimizer = OptimizerKind::Adam;
  int batch_size = 32;
  std::uint64_t seed = 0;

  bool operator==(const Hyperparams&) const = default;

  void validate() const {
    if (epochs <= 0) throw Error(ErrorCode::InvalidHyperparams, "epochs must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw Error(ErrorCode::InvalidHyperparams, "learning rate must be positive");
    }
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw Error(ErrorCode::InvalidHyperparams, "lambda must be >= 0");
    if (batch_size <= 0) throw Error(ErrorCode::InvalidHyperparams, "batch size must be positive");
  }
};

struct TrainHistory {
  std::vector<double> epoch_loss;
};

/// Mini-batch training for exactly hp.epochs passes over the columns of
/// `inputs`. The visiting order is reshuffled every epoch from
/// Rng(derive_seed(hp.seed, 0x5f0ffe)); the final batch may be short. Throws
/// NonFiniteLoss naming the epoch if the objective diverges.
template <typename Scalar, typename DerivedX, typename DerivedY>
TrainHistory train(Mlp<Scalar>& net, const Eigen::MatrixBase<DerivedX>& inputs,
                   const Eigen::MatrixBase<DerivedY>& targets, const Hyperparams& hp) {
  hp.validate();
  const Eigen::Index n = inputs.cols();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "no training instances");
  if (inputs.rows() != net.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "inputs have " + std::to_string(inputs.rows()) +
                                                  " features, network expects " + std::to_string(net.input_dim()));
  }
  if (targets.cols() != n || targets.rows() != net.output_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "targets must be " + std::to_string(net.output_dim()) + " x " +
                                                  std::to_string(n));
  }

  auto params = net.parameter_views();
  auto grads = zero_gradients(net);
  auto grad_views = gradient_views(grads);
  auto state = OptimizerState<Scalar>::template for_params<FlatView<Scalar>>(
      hp.optimizer, std::span<const FlatView<Scalar>>(params));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng shuffler(derive_seed(hp.seed, 0x5f0ffe));

  ForwardCache<Scalar> cache;
  Matrix<Scalar> batch_x;
  Matrix<Scalar> batch_y;
  TrainHistory history;
  history.epoch_loss.reserve(static_cast<std::size_t>(hp.epochs));

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    shuffler.shuffle(std::span<Eigen::Index>(order));
    double epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < n; start += hp.batch_size) {
      const Eigen::Index size = std::min<Eigen::Index>(hp.batch_size, n - start);
      batch_x.resize(inputs.rows(), size);
      batch_y.resize(targets.rows(), size);
      for (Eigen::Index j = 0; j < size; ++j) {
        const auto src = order[static_cast<std::size_t>(start + j)];
        batch_x.col(j) = inputs.col(src).template cast<Scalar>();
        batch_y.col(j) = targets.col(src).template cast<Scalar>();
      }
      forward_batch(net, batch_x, cache);
      epoch_loss += objective(net, cache, batch_y, hp.l2) * static_cast<double>(size);
      backward_into(net, cache, batch_y, hp.l2, grads);
      optimizer_step(state, std::span<FlatView<Scalar>>(params), std::span<const FlatView<Scalar>>(grad_views),
                     hp.learning_rate);
    }
    epoch_loss /= static_cast<double>(n);
    if (!std::isfinite(epoch_loss) || !net.all_finite()) {
      throw Error(ErrorCode::NonFiniteLoss, "training diverged in epoch " + std::to_string(epoch + 1));
    }
    history.epoch_loss.push_back(epoch_loss);
  }
  return history;
}

}  // namespace skillclf::nn
